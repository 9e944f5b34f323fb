import json

import pytest

from src.errors import CategoryError, FileFormatError
from src.loaders import FileLoader, parse_class_argument

from conftest import data_path


def _write(path, content) -> str:
    path.write_text(content if isinstance(content, str) else json.dumps(content, indent=2),
                    encoding="utf-8")
    return str(path)


class TestCategoryFiles:
    def test_categories_are_cached_by_path(self, loader, chain1):
        assert loader.load_category(data_path("chain1.json")) is chain1

    def test_malformed_json_reports_line(self, tmp_path):
        path = _write(tmp_path / "broken.json", '{\n  "kind": "poset",\n  "elements": [\n')
        with pytest.raises(FileFormatError) as excinfo:
            FileLoader().load_category(path)
        assert excinfo.value.line is not None
        assert str(excinfo.value).startswith(path)

    def test_missing_field(self, tmp_path):
        path = _write(tmp_path / "poset.json", {"kind": "poset", "name": "P"})
        with pytest.raises(FileFormatError) as excinfo:
            FileLoader().load_category(path)
        assert excinfo.value.field == "poset.elements"

    def test_unknown_key_reports_line(self, tmp_path):
        path = _write(tmp_path / "poset.json", '{\n  "kind": "poset",\n  "colour": "red",\n  "elements": []\n}\n')
        with pytest.raises(FileFormatError) as excinfo:
            FileLoader().load_category(path)
        assert excinfo.value.field == "poset.colour"
        assert excinfo.value.line == 3

    def test_category_law_violation_names_the_file(self, tmp_path):
        path = _write(tmp_path / "chain.json", {
            "kind": "category", "objects": ["a", "b", "c"],
            "morphisms": [{"id": "f", "dom": "a", "cod": "b"}, {"id": "g", "dom": "b", "cod": "c"}]})
        with pytest.raises(CategoryError, match="missing composite") as excinfo:
            FileLoader().load_category(path)
        assert str(excinfo.value).startswith(path)
        assert excinfo.value.witness == ("g", "f")


class TestStructureFiles:
    def test_load_structure(self, loader, chain1, weq_trivial):
        m = loader.load_structure(data_path("chain1_trivial_weq.json"))
        assert m == weq_trivial
        assert m.name == "W-trivial"
        assert m.status == "unverified"
        assert m.category is chain1

    def test_name_defaults_to_file_stem(self, tmp_path, chain1):
        path = _write(tmp_path / "plain.json", {"category": data_path("chain1.json"),
                                                "cof": ["@identities"], "fib": ["@all"], "weq": ["@all"]})
        m = FileLoader().load_structure(path)
        assert m.name == "plain"
        assert m.cof == chain1.identities()

    def test_unknown_morphism(self, tmp_path, chain1):
        path = _write(tmp_path / "bad.json", {"category": "ignored.json",
                                              "cof": ["@all"], "fib": ["0<2"], "weq": ["@all"]})
        with pytest.raises(FileFormatError, match="unknown morphism") as excinfo:
            FileLoader().load_structure(path, category=chain1)
        assert excinfo.value.field == "fib"

    def test_load_generators(self, loader, chain1):
        g = loader.load_generators(data_path("chain1_gen_trivial_weq.json"))
        assert g.gen_cof.ids() == ["0<1"]
        assert g.gen_acyclic_cof == chain1.empty()
        assert g.weq == chain1.identities()
        assert g.category is chain1


class TestClassArguments:
    def test_ids_and_tokens(self, chain1):
        assert parse_class_argument(chain1, "0<1, @identities") == chain1.all_morphisms()
        assert parse_class_argument(chain1, "@isos") == chain1.identities()
        assert parse_class_argument(chain1, "") == chain1.empty()

    def test_unknown_id(self, chain1):
        with pytest.raises(FileFormatError, match="tokens are @all, @isos, @identities"):
            parse_class_argument(chain1, "0<5")
