import json

import pandas as pd
import pytest

from config import Settings
from src.cli import EXIT_INPUT_ERROR, EXIT_REFUTED, EXIT_VERIFIED, render_human, run
from src.errors import EnumerationIncompleteError
from src.models import Verdict

from conftest import data_path


def _run_json(capsys, *argv):
    code = run(list(argv))
    return code, json.loads(capsys.readouterr().out)


class TestValidate:
    def test_poset_file(self, capsys):
        code, summary = _run_json(capsys, "validate", data_path("chain1.json"))
        assert code == EXIT_VERIFIED
        assert summary["name"] == "[1]"
        assert summary["identities"] == ["id_0", "id_1"]

    def test_structure_file(self, capsys):
        code, summary = _run_json(capsys, "validate", data_path("chain1_trivial_cof.json"))
        assert code == EXIT_VERIFIED
        assert summary["cof"] == ["id_0", "id_1"]
        assert summary["status"] == "unverified"

    def test_generator_file(self, capsys):
        code, summary = _run_json(capsys, "validate", data_path("chain1_gen_trivial_weq.json"))
        assert code == EXIT_VERIFIED
        assert summary["I"] == ["0<1"]

    def test_missing_file(self, capsys, tmp_path):
        assert run(["validate", str(tmp_path / "absent.json")]) == EXIT_INPUT_ERROR
        assert "error:" in capsys.readouterr().err

    def test_bad_category(self, capsys, tmp_path):
        path = tmp_path / "cycle.json"
        path.write_text(json.dumps({"kind": "poset", "elements": ["x", "y"], "leq": [["x", "y"], ["y", "x"]]}))
        assert run(["validate", str(path)]) == EXIT_INPUT_ERROR
        assert "cycle" in capsys.readouterr().err


class TestChecks:
    def test_check_wfs(self, capsys):
        code, verdict = _run_json(capsys, "check-wfs", data_path("chain1.json"),
                                  "--left", "@all", "--right", "@isos")
        assert code == EXIT_VERIFIED
        assert verdict["status"] == "verified"

    def test_check_wfs_refuted(self, capsys):
        code, verdict = _run_json(capsys, "check-wfs", data_path("chain1.json"),
                                  "--left", "@identities", "--right", "@identities")
        assert code == EXIT_REFUTED
        assert verdict["clause"] == "factorization"
        assert verdict["witness"] == ["0<1"]

    def test_check_model(self, capsys):
        code, report = _run_json(capsys, "check-model", data_path("chain1_trivial_weq.json"))
        assert code == EXIT_VERIFIED
        assert report["structure"]["status"] == "verified"
        assert report["verdict"]["status"] == "verified"

    def test_check_model_refuted(self, capsys):
        code, report = _run_json(capsys, "check-model", data_path("chain1_broken.json"))
        assert code == EXIT_REFUTED
        assert report["verdict"]["clause"] == "2-out-of-3"

    def test_human_rendering(self, capsys):
        assert run(["check-model", data_path("chain1_trivial_weq.json"), "--human"]) == EXIT_VERIFIED
        out = capsys.readouterr().out
        assert out.startswith("structure W-trivial on [1]\n")
        assert "  W = {id_0, id_1}" in out

    def test_recognize(self, capsys):
        code, report = _run_json(capsys, "recognize", data_path("chain1_gen_trivial_cof.json"))
        assert code == EXIT_VERIFIED
        assert report["structure"]["cof"] == ["id_0", "id_1"]

    def test_recognize_refuted(self, capsys):
        code, report = _run_json(capsys, "recognize", data_path("chain1_gen_isos.json"))
        assert code == EXIT_REFUTED
        failing = [c for c in report["conditions"] if c["status"] == "fail"]
        assert [c["name"] for c in failing] == ["v"]


class TestIntersect:
    def test_same_fibration_pair(self, capsys):
        code, report = _run_json(capsys, "intersect", data_path("chain1_trivial_weq.json"),
                                 data_path("chain1_trivial_cof.json"))
        assert code == EXIT_VERIFIED
        assert report["structure"]["weq"] == ["id_0", "id_1"]
        assert len(report["localizations"]) == 2
        assert report["proof_steps"]["status"] == "verified"
        assert report["generators"]["status"] == "verified"

    def test_with_generator_files(self, capsys):
        code, report = _run_json(capsys, "intersect", data_path("chain1_trivial_weq.json"),
                                 data_path("chain1_trivial_cof.json"), "--generators",
                                 data_path("chain1_gen_trivial_weq.json"),
                                 data_path("chain1_gen_trivial_cof.json"))
        assert code == EXIT_VERIFIED
        assert report["notes"] == []
        assert len(report["proof_steps"]["conditions"]) == 12

    def test_different_fibrations(self, capsys):
        code = run(["intersect", data_path("chain1_trivial_weq.json"), data_path("chain1_trivial_fib.json")])
        assert code == EXIT_INPUT_ERROR
        assert "error: fibrations do not agree [0<1]" in capsys.readouterr().err


class TestDiagram:
    def test_pipeline_over_the_arrow_shape(self, capsys):
        code, report = _run_json(capsys, "diagram", data_path("chain1_trivial_weq.json"),
                                 "--shape", data_path("chain1.json"),
                                 "--other", data_path("chain1_trivial_cof.json"))
        assert code == EXIT_VERIFIED
        assert report["total_objects"] == 3
        assert len(report["reports"]) == 6

    def test_selected_checks_and_csv(self, capsys, tmp_path):
        code, report = _run_json(capsys, "diagram", data_path("chain1_trivial_fib.json"),
                                 "--shape", data_path("terminal.json"), "--checks", "objectwise,induced",
                                 "--csv", "--output-dir", str(tmp_path))
        assert code == EXIT_VERIFIED
        assert [r["title"] for r in report["reports"]] == ["objectwise", "induced"]
        assert len(pd.read_csv(tmp_path / "diagram_[1]_1.csv")) == 2

    def test_cap(self, capsys):
        code = run(["diagram", data_path("chain1_trivial_weq.json"), "--shape", data_path("chain1.json"),
                    "--cap", "2"])
        assert code == EXIT_INPUT_ERROR
        assert "cap" in capsys.readouterr().err


class TestEnumerateAndQuiver:
    def test_enumerate(self, capsys, tmp_path):
        code, report = _run_json(capsys, "enumerate", data_path("chain1.json"), "--cross-check",
                                 "--csv", "--output-dir", str(tmp_path))
        assert code == EXIT_VERIFIED
        assert report["count"] == 3
        assert len(pd.read_csv(tmp_path / "census_[1].csv")) == 3

    def test_budget(self, capsys):
        assert run(["enumerate", data_path("chain2.json"), "--budget", "1"]) == EXIT_INPUT_ERROR
        assert "budget" in capsys.readouterr().err

    def test_quiver_json(self, capsys):
        code, dump = _run_json(capsys, "quiver", data_path("chain1.json"), "--certify")
        assert code == EXIT_VERIFIED
        assert dump["edges"] == [{"source": 2, "target": 0, "kind": "right"},
                                 {"source": 2, "target": 1, "kind": "left"}]

    def test_quiver_dot_to_file(self, capsys, tmp_path):
        target = tmp_path / "reports" / "chain1.dot"
        assert run(["quiver", data_path("chain1.json"), "--format", "dot", "--output", str(target)]) == 0
        assert capsys.readouterr().out == ""
        assert target.read_text(encoding="utf-8").startswith('digraph "[1]"')

    def test_reports_are_byte_identical(self, capsys):
        outputs = []
        for workers in ("1", "2"):
            run(["quiver", data_path("chain2.json"), "--workers", workers])
            outputs.append(capsys.readouterr().out)
        assert outputs[0] == outputs[1]

    def test_certify_with_missing_intersection_is_refuted(self, capsys, monkeypatch):
        def incomplete(m1, m2, quiver):
            raise EnumerationIncompleteError("M₁ ∩ M₂ is a model structure missing from the quiver")

        monkeypatch.setattr("src.cli.corollary_check", incomplete)
        code, dump = _run_json(capsys, "quiver", data_path("chain1.json"), "--certify")
        assert code == EXIT_REFUTED
        assert len(dump["nodes"]) == 3

    def test_incomplete_cross_check_is_refuted(self, capsys, monkeypatch):
        def incomplete(*args, **kwargs):
            raise EnumerationIncompleteError("enumeration found 2 structures, the triple scan 3",
                                             witness=("C-trivial",))

        monkeypatch.setattr("src.cli.enumerate_model_structures", incomplete)
        assert run(["enumerate", data_path("chain1.json"), "--cross-check"]) == EXIT_REFUTED
        assert "refuted: enumeration found 2 structures" in capsys.readouterr().err


class TestRendering:
    def test_verdict(self):
        text = render_human(Verdict.refuted("lifting", "no diagonal", witness=("a", "b")))
        assert text == "refuted at lifting: no diagonal [a, b]\n"


class TestSettings:
    def test_defaults(self, monkeypatch):
        for name in ("FINMODEL_FUNCTOR_CAP", "FINMODEL_WORKERS", "FINMODEL_LOG_LEVEL"):
            monkeypatch.delenv(name, raising=False)
        s = Settings()
        assert s.functor_cap == 4096
        assert s.workers == 1
        assert s.log_level == "INFO"

    def test_invalid_workers(self, monkeypatch):
        monkeypatch.setenv("FINMODEL_WORKERS", "0")
        with pytest.raises(ValueError, match="FINMODEL_WORKERS"):
            Settings()
