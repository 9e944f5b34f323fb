import os

import pytest

from src.fincat import FiniteCategory, functor_category, validate_category
from src.loaders import FileLoader
from src.modelstruct import GeneratingData, ModelStructure, verify

DATA_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "data")

CATEGORY_FILES = {
    "terminal": "terminal.json",
    "chain1": "chain1.json",
    "chain2": "chain2.json",
    "diamond": "diamond.json",
    "pentagon": "pentagon.json",
    "span": "span.json",
    "walking_iso": "walking_iso.json",
    "idempotent": "idempotent.json",
}

LATTICES = ["terminal", "chain1", "chain2", "diamond", "pentagon"]


def data_path(name: str) -> str:
    return os.path.join(DATA_DIR, name)


@pytest.fixture(scope="session")
def loader() -> FileLoader:
    return FileLoader()


@pytest.fixture(scope="session")
def categories(loader):
    return {name: loader.load_category(data_path(file)) for name, file in CATEGORY_FILES.items()}


@pytest.fixture(scope="session")
def terminal(categories) -> FiniteCategory:
    return categories["terminal"]


@pytest.fixture(scope="session")
def chain1(categories) -> FiniteCategory:
    return categories["chain1"]


@pytest.fixture(scope="session")
def chain2(categories) -> FiniteCategory:
    return categories["chain2"]


@pytest.fixture(scope="session")
def diamond(categories) -> FiniteCategory:
    return categories["diamond"]


@pytest.fixture(scope="session")
def pentagon(categories) -> FiniteCategory:
    return categories["pentagon"]


@pytest.fixture(scope="session")
def span(categories) -> FiniteCategory:
    return categories["span"]


@pytest.fixture(scope="session")
def walking_iso(categories) -> FiniteCategory:
    return categories["walking_iso"]


@pytest.fixture(scope="session")
def idempotent(categories) -> FiniteCategory:
    return categories["idempotent"]


@pytest.fixture(scope="session")
def discrete() -> FiniteCategory:
    return validate_category({"kind": "category", "name": "discrete", "objects": ["a", "b", "c"]})


def structure(category: FiniteCategory, cof, fib, weq, name=None) -> ModelStructure:
    return verify(ModelStructure(category, cof=cof, fib=fib, weq=weq, name=name))


@pytest.fixture(scope="session")
def weq_trivial(chain1) -> ModelStructure:
    """C = all, F = all, W = identities."""
    return structure(chain1, chain1.all_morphisms(), chain1.all_morphisms(), chain1.identities(), "W-trivial")


@pytest.fixture(scope="session")
def fib_trivial(chain1) -> ModelStructure:
    """C = all, F = identities, W = all."""
    return structure(chain1, chain1.all_morphisms(), chain1.identities(), chain1.all_morphisms(), "F-trivial")


@pytest.fixture(scope="session")
def cof_trivial(chain1) -> ModelStructure:
    """C = identities, F = all, W = all."""
    return structure(chain1, chain1.identities(), chain1.all_morphisms(), chain1.all_morphisms(), "C-trivial")


@pytest.fixture(scope="session")
def arrow_index(chain1):
    """[1]^[1]: diagrams of shape the walking arrow in [1]."""
    return functor_category(chain1, chain1)


@pytest.fixture(scope="session")
def point_index(chain1, terminal):
    return functor_category(chain1, terminal)


def generators(category: FiniteCategory, I, J, W) -> GeneratingData:
    return GeneratingData(category, gen_cof=category.morphism_class(I),
                          gen_acyclic_cof=category.morphism_class(J), weq=W)


def relabeled(category: FiniteCategory, objects=None, morphisms=None, name=None) -> FiniteCategory:
    """The same category with object and morphism ids renamed through the given maps."""
    objects = objects or {}
    morphisms = morphisms or {}

    def obj(x: int) -> str:
        return objects.get(category.objects[x], category.objects[x])

    def mor(m: int) -> str:
        return morphisms.get(category.morphisms[m], category.morphisms[m])

    n = category.n_morphisms
    return validate_category({
        "kind": "category",
        "name": name or category.name,
        "objects": [obj(x) for x in range(category.n_objects)],
        "morphisms": [{"id": mor(m), "dom": obj(category.dom[m]), "cod": obj(category.cod[m])}
                      for m in range(n)],
        "identities": {obj(x): mor(category.identity[x]) for x in range(category.n_objects)},
        "composition": [(mor(g), mor(f), mor(int(category.table[g, f])))
                        for g in range(n) for f in range(n) if category.table[g, f] >= 0],
    })
