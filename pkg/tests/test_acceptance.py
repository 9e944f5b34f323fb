"""Theorem-level checks swept over the census of every test lattice."""

import itertools

import pytest

from src.delocalize import intersect_generators, proof_step_report, right_intersect
from src.diagram import (check_diag_intersection, check_diagdown_hypotheses, induced_base_structure,
                         objectwise_structure)
from src.explorer import (build_quiver, component_analysis, corollary_check, enumerate_model_structures,
                          quiver_dump, same_fibration_pairs, to_dot)
from src.fincat import functor_category
from src.modelstruct import ModelStructure, generators_of, is_model_structure

from conftest import LATTICES

FAST = ["terminal", "chain1", "chain2"]
SWEPT = FAST + [pytest.param(name, marks=pytest.mark.slow) for name in ("diamond", "pentagon")]
BASES = ["chain1", "chain2", pytest.param("diamond", marks=pytest.mark.slow)]
SHAPES = ["terminal", "chain1"]


@pytest.fixture(scope="module")
def census(categories):
    found = {}

    def get(name):
        if name not in found:
            found[name] = enumerate_model_structures(categories[name])
        return found[name]
    return get


def _same_fibration_pairs(structures):
    return [(m1, m2) for m1, m2 in itertools.combinations_with_replacement(structures, 2)
            if m1.fib == m2.fib]


@pytest.mark.parametrize("name", LATTICES)
def test_trivial_structures_verify(categories, name):
    category = categories[name]
    everything, isos = category.all_morphisms(), category.isomorphisms()
    for cof, weq, fib in ((everything, isos, everything), (everything, everything, isos)):
        assert is_model_structure(ModelStructure(category, cof=cof, fib=fib, weq=weq)).verified


@pytest.mark.parametrize("name", SWEPT)
def test_right_intersections_are_model_structures(categories, census, name):
    for m1, m2 in _same_fibration_pairs(census(name)):
        result = right_intersect(m1, m2)
        assert result.verified, (m1, m2)
        outcome = intersect_generators(generators_of(m1), generators_of(m2))
        assert outcome.verified, (m1, m2)
        assert outcome.structure.same_classes(result)


@pytest.mark.parametrize("name", SWEPT)
def test_proof_steps_replay(census, name):
    for m1, m2 in _same_fibration_pairs(census(name)):
        report = proof_step_report(generators_of(m1), generators_of(m2))
        failing = [c.name for c in report.conditions if not c.passed]
        assert failing == [], (m1, m2)


@pytest.mark.parametrize("shape", SHAPES)
@pytest.mark.parametrize("name", BASES)
def test_diagram_intersection_commutes(categories, census, name, shape):
    index = functor_category(categories[name], categories[shape])
    for m1, m2 in _same_fibration_pairs(census(name)):
        verdict = check_diag_intersection(m1, m2, index)
        assert verdict.verified, verdict


@pytest.mark.parametrize("shape", SHAPES)
@pytest.mark.parametrize("name", BASES)
def test_induced_structure_round_trip(categories, census, name, shape):
    index = functor_category(categories[name], categories[shape])
    for m in census(name):
        mc = objectwise_structure(m, index)
        report = check_diagdown_hypotheses(mc, index)
        assert report.verified, report
        assert induced_base_structure(mc, index, report=report) == m


@pytest.mark.parametrize("name", SWEPT)
def test_same_fibration_nodes_share_a_component(census, name):
    quiver = build_quiver(census(name))
    analysis = component_analysis(quiver)
    for i, j in same_fibration_pairs(quiver):
        assert corollary_check(quiver.nodes[i], quiver.nodes[j], quiver).verified
        assert analysis.component_of(i) == analysis.component_of(j)


@pytest.mark.parametrize("name", FAST)
def test_exports_are_deterministic(categories, census, name):
    first = build_quiver(census(name))
    second = build_quiver(enumerate_model_structures(categories[name], workers=2))
    assert to_dot(first) == to_dot(second)
    assert quiver_dump(first).model_dump_json() == quiver_dump(second).model_dump_json()
