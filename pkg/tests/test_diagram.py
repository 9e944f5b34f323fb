import pytest

from src.diagram import (ProductAdjoint, check_diag_intersection, check_diagdown_hypotheses,
                         check_diagram_delocalization, check_lemma, compare_structures,
                         induced_base_structure, objectwise_structure, product_adjoint_check)
from src.errors import (ClassMismatchError, FinModelError, HypothesisFailure, InducedStructureError,
                        ProductMissingError, UnverifiedStructureError)
from src.fincat import functor_category
from src.hypotheses import BaseHypothesis, ComponentClosureHypothesis, PointedComplementsHypothesis
from src.modelstruct import ModelStructure, trivial_structures
from src.models import ConditionReport, ConditionResult

from conftest import relabeled


@pytest.fixture(scope="module")
def objectwise_weq(weq_trivial, arrow_index):
    return objectwise_structure(weq_trivial, arrow_index)


class TestObjectwiseStructure:
    @pytest.mark.parametrize("fixture", ["weq_trivial", "fib_trivial", "cof_trivial"])
    def test_objectwise_structures_verify(self, request, fixture, arrow_index):
        mc = objectwise_structure(request.getfixturevalue(fixture), arrow_index)
        assert mc.verified
        assert mc.category == arrow_index.total

    def test_objectwise_weak_equivalences(self, objectwise_weq, arrow_index):
        assert objectwise_weq.weq == arrow_index.total.identities()
        assert objectwise_weq.fib == arrow_index.total.all_morphisms()

    def test_point_shape_reproduces_the_base(self, weq_trivial, point_index):
        mc = objectwise_structure(weq_trivial, point_index)
        assert mc.verified
        assert len(mc.weq) == 2

    def test_unverified_base(self, chain1, arrow_index):
        raw = ModelStructure(chain1, cof=chain1.all_morphisms(), fib=chain1.all_morphisms(),
                             weq=chain1.identities())
        with pytest.raises(UnverifiedStructureError):
            objectwise_structure(raw, arrow_index)

    def test_base_on_another_category(self, chain2, arrow_index):
        with pytest.raises(ClassMismatchError):
            objectwise_structure(trivial_structures(chain2)[0], arrow_index)

    def test_compare_reports_first_differing_class(self, objectwise_weq, cof_trivial, arrow_index):
        other = objectwise_structure(cof_trivial, arrow_index)
        verdict = compare_structures(objectwise_weq, other)
        assert verdict.clause == "cofibrations"
        assert verdict.witness == ("<0,0>=><0,1>",)
        assert compare_structures(objectwise_weq, objectwise_weq).verified


class TestHypotheses:
    def test_all_hypotheses_hold_for_objectwise_structures(self, arrow_index, weq_trivial, fib_trivial,
                                                           cof_trivial):
        for base in (weq_trivial, fib_trivial, cof_trivial):
            report = check_diagdown_hypotheses(objectwise_structure(base, arrow_index), arrow_index)
            assert report.verified, report
            assert [c.name for c in report.conditions] == ["i", "ii", "iii", "iv", "iv", "v"]

    def test_parallel_evaluation_matches(self, objectwise_weq, arrow_index):
        serial = check_diagdown_hypotheses(objectwise_weq, arrow_index, workers=1)
        parallel = check_diagdown_hypotheses(objectwise_weq, arrow_index, workers=2)
        assert serial == parallel

    def test_complement_readings_agree(self, objectwise_weq, arrow_index):
        assert PointedComplementsHypothesis(arrow_index, objectwise_weq).readings_agree()

    def test_pointed_subcategory(self, objectwise_weq, arrow_index):
        hypothesis = ComponentClosureHypothesis(arrow_index, objectwise_weq)
        assert hypothesis.pointed_subcategory().ids() == ["<0,0>=><0,0>", "<0,0>=><1,1>", "<1,1>=><1,1>"]
        assert hypothesis.pointed_maps() == hypothesis.pointed_subcategory()

    def test_unknown_component_class(self, objectwise_weq, arrow_index):
        with pytest.raises(ValueError, match="Unknown component class"):
            ComponentClosureHypothesis(arrow_index, objectwise_weq, kind="cofibrations")

    def test_errors_become_error_results(self, objectwise_weq, arrow_index):
        class Exploding(BaseHypothesis):
            name = "x"

            def evaluate(self):
                raise FinModelError("exploded", witness=("w",))

        results = Exploding(arrow_index, objectwise_weq).run()
        assert len(results) == 1
        assert results[0].status == "error"
        assert results[0].witness == ("w",)
        assert "exploded" in results[0].message

    def test_structure_on_the_base_is_rejected(self, weq_trivial, arrow_index):
        with pytest.raises(ClassMismatchError):
            check_diagdown_hypotheses(weq_trivial, arrow_index)


class TestInducedStructure:
    @pytest.mark.parametrize("fixture", ["weq_trivial", "fib_trivial", "cof_trivial"])
    def test_induced_structure_recovers_the_base(self, request, fixture, arrow_index):
        base = request.getfixturevalue(fixture)
        induced = induced_base_structure(objectwise_structure(base, arrow_index), arrow_index)
        assert induced.verified
        assert induced == base

    def test_failing_hypothesis_is_raised(self, objectwise_weq, arrow_index):
        report = ConditionReport(title="induced-structure hypotheses", status="refuted", conditions=[
            ConditionResult(name="i", status="pass"),
            ConditionResult(name="iii", status="fail", message="not weak", witness=("w",)),
        ])
        with pytest.raises(HypothesisFailure, match=r"hypothesis \(iii\) fails") as excinfo:
            induced_base_structure(objectwise_weq, arrow_index, report=report)
        assert excinfo.value.witness == ("w",)

    def test_induced_classes_failing_the_axioms_raise(self, arrow_index):
        total = arrow_index.total
        mc = ModelStructure(total, cof=total.all_morphisms(), fib=total.identities(),
                            weq=total.identities())
        report = ConditionReport(title="induced-structure hypotheses", status="verified",
                                 conditions=[ConditionResult(name="i", status="pass")])
        with pytest.raises(InducedStructureError, match=r"refuted at wfs\(C∩W, F\)") as excinfo:
            induced_base_structure(mc, arrow_index, report=report)
        assert excinfo.value.witness == ("0<1",)


def _functor_key(index, X, rename):
    shape = index.shape
    objs, mors = index.functors[X]
    return (frozenset((rename.get(shape.objects[a], shape.objects[a]), objs[a])
                      for a in range(shape.n_objects)),
            frozenset((rename.get(shape.morphisms[u], shape.morphisms[u]), mors[u])
                      for u in range(shape.n_morphisms)))


def _class_keys(index, cls, rename=None):
    """Members of a class on M^C described independently of how the shape is labeled."""
    rename = rename or {}
    total, shape = index.total, index.shape
    return {(_functor_key(index, total.dom[phi], rename), _functor_key(index, total.cod[phi], rename),
             frozenset((rename.get(shape.objects[a], shape.objects[a]), c)
                       for a, c in enumerate(index.components[phi])))
            for phi in cls}


class TestShapeRelabeling:
    @pytest.mark.parametrize("shape_name, rename", [
        ("chain1", {"0": "b", "1": "a", "0<1": "b<a", "id_0": "id_b", "id_1": "id_a"}),
        ("span", {"a": "z", "b": "y", "c": "x", "f": "q", "g": "p", "id_a": "id_z", "id_b": "id_y",
                  "id_c": "id_x"}),
    ])
    def test_relabeled_shape_gives_identical_structures(self, categories, chain1, shape_name, rename):
        shape = categories[shape_name]
        objects = {k: v for k, v in rename.items() if k in shape.object_index}
        morphisms = {k: v for k, v in rename.items() if k in shape.morphism_index}
        other_shape = relabeled(shape, objects=objects, morphisms=morphisms)
        assert other_shape.objects != shape.objects

        index = functor_category(chain1, shape)
        other_index = functor_category(chain1, other_shape)
        for m in trivial_structures(chain1):
            mc = objectwise_structure(m, index)
            other = objectwise_structure(m, other_index)
            for cls in ("cof", "fib", "weq"):
                assert _class_keys(index, getattr(mc, cls), rename) == \
                    _class_keys(other_index, getattr(other, cls)), (m, cls)


class TestProductAdjoint:
    @pytest.mark.parametrize("alpha", ["0", "1"])
    def test_adjunction_on_arrow_category(self, arrow_index, alpha):
        assert ProductAdjoint(arrow_index, alpha).check().verified

    def test_adjunction_over_diamond(self, diamond, chain1):
        index = functor_category(diamond, chain1)
        adjoint = ProductAdjoint(index, "1")
        assert adjoint.check().verified
        # Hom(0, 1) and Hom(1, 1) are singletons, so G(y) is constant at y
        for y in diamond.objects:
            X = adjoint.right_adjoint_object(y)
            assert index.functors[X][0] == (diamond.obj(y), diamond.obj(y))

    def test_adjunction_over_idempotent_shape(self, chain1, idempotent):
        index = functor_category(chain1, idempotent)
        assert ProductAdjoint(index, "x").check().verified

    def test_right_adjoint_of_terminal_object(self, arrow_index):
        adjoint = ProductAdjoint(arrow_index, "0")
        # G(y)(1) is an empty product, the terminal object 1
        X = adjoint.right_adjoint_object("0")
        assert arrow_index.total.objects[X] == "<0,1>"

    def test_lemma_with_structure(self, objectwise_weq, arrow_index):
        verdict = product_adjoint_check(arrow_index, "1", objectwise_weq)
        assert verdict.verified
        assert len(verdict.details) == 2
        assert check_lemma(objectwise_weq, arrow_index, "0").verified

    def test_missing_terminal_object(self, span, chain1):
        index = functor_category(span, chain1)
        with pytest.raises(ProductMissingError):
            ProductAdjoint(index, "0").check()


class TestDiagramIntersection:
    def test_intersection_commutes_with_diagrams(self, weq_trivial, cof_trivial, arrow_index):
        assert check_diag_intersection(weq_trivial, cof_trivial, arrow_index).verified

    def test_delocalization_report(self, weq_trivial, cof_trivial, arrow_index):
        report = check_diagram_delocalization(weq_trivial, cof_trivial, arrow_index)
        assert report.verified
        assert report.conditions[0].name == "M₁^C ∩ M₂^C is a model structure"
        assert report.conditions[-1].name == "induced structure equals M₁ ∩ M₂"

    def test_delocalization_with_different_fibrations(self, weq_trivial, fib_trivial, arrow_index):
        report = check_diagram_delocalization(weq_trivial, fib_trivial, arrow_index)
        assert report.status == "refuted"
        assert report.conditions[0].status == "error"
