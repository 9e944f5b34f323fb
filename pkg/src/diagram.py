"""Objectwise structures on diagram categories and the induced base structure."""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional, Tuple

from config import settings
from .delocalize import right_intersect
from .errors import (ClassMismatchError, FinModelError, HypothesisFailure, InducedStructureError,
                     ProductMissingError, RoundTripMismatchError, UnverifiedStructureError)
from .fincat import DiagramIndex, MorphismClass, Ref, product
from .hypotheses import (ComponentClosureHypothesis, PointedAcyclicityHypothesis,
                         PointedComplementsHypothesis, PointedLiftingHypothesis)
from .lifting import left_complement, lift_exists
from .modelstruct import ModelStructure, is_model_structure, verify
from .models import ConditionReport, ConditionResult, Verdict

logger = logging.getLogger(__name__)


def _require_base(m: ModelStructure, index: DiagramIndex) -> None:
    if not m.verified:
        raise UnverifiedStructureError(f"base structure on {m.category.name} is {m.status}, expected verified")
    if m.category is not index.base and m.category != index.base:
        raise ClassMismatchError(f"structure lives on {m.category.name}, index is over {index.base.name}")


def _require_total(mc: ModelStructure, index: DiagramIndex) -> None:
    if mc.category is not index.total and mc.category != index.total:
        raise ClassMismatchError(f"structure lives on {mc.category.name}, expected {index.total.name}")


def objectwise_structure(m: ModelStructure, index: DiagramIndex) -> ModelStructure:
    """Objectwise weak equivalences and fibrations; cofibrations lift against objectwise acyclic fibrations."""
    _require_base(m, index)
    weq = index.componentwise(m.weq)
    fib = index.componentwise(m.fib)
    cof = left_complement(fib & weq)
    result = verify(ModelStructure(index.total, cof=cof, fib=fib, weq=weq,
                                   name=f"{m.name or 'M'}^{index.shape.name}"))
    if not result.verified:
        logger.warning(f"Objectwise structure on {index.total.name} is not a model structure: {result.witness}")
    return result


def _class_difference(name: str, a: MorphismClass, b: MorphismClass) -> Optional[Verdict]:
    if a == b:
        return None
    first = ((a - b) | (b - a)).first()
    return Verdict.refuted(name, f"{name} classes differ", witness=(a.category.label(first),))


def compare_structures(a: ModelStructure, b: ModelStructure) -> Verdict:
    """Class-by-class equality; the witness is a morphism in the first symmetric difference."""
    for name, x, y in (("cofibrations", a.cof, b.cof), ("fibrations", a.fib, b.fib),
                       ("weak equivalences", a.weq, b.weq)):
        refutation = _class_difference(name, x, y)
        if refutation is not None:
            return refutation
    return Verdict.ok("classes agree")


def check_diag_intersection(m1: ModelStructure, m2: ModelStructure, index: DiagramIndex) -> Verdict:
    """(M₁ ∩ M₂)^C against M₁^C ∩ M₂^C, class by class."""
    left = objectwise_structure(right_intersect(m1, m2), index)
    right = right_intersect(objectwise_structure(m1, index), objectwise_structure(m2, index))
    verdict = compare_structures(left, right)
    logger.info(f"Diagram intersection on {index.total.name}: {verdict.status}")
    return verdict


# -- induced base structure -----------------------------------------------------

def hypothesis_checks(mc: ModelStructure, index: DiagramIndex) -> list:
    return [
        ComponentClosureHypothesis(index, mc, kind="fibrations"),
        ComponentClosureHypothesis(index, mc, kind="weak equivalences"),
        PointedAcyclicityHypothesis(index, mc),
        PointedComplementsHypothesis(index, mc),
        PointedLiftingHypothesis(index, mc),
    ]


def check_diagdown_hypotheses(mc: ModelStructure, index: DiagramIndex,
                              workers: Optional[int] = None) -> ConditionReport:
    """Evaluate the five hypotheses of the induced-structure theorem exhaustively."""
    _require_total(mc, index)
    workers = settings.workers if workers is None else workers
    checks = hypothesis_checks(mc, index)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda check: check.run(), checks))
    else:
        results = [check.run() for check in checks]
    conditions = [c for batch in results for c in batch]
    status = "verified" if all(c.passed for c in conditions) else "refuted"
    return ConditionReport(title="induced-structure hypotheses", status=status,
                           conditions=conditions, structure=mc.summary())


def induced_base_structure(mc: ModelStructure, index: DiagramIndex,
                           report: Optional[ConditionReport] = None) -> ModelStructure:
    """F and W from all components of fibrations and weak equivalences of M^C; C by lifting.

    Raises :class:`HypothesisFailure` naming the first failing hypothesis,
    :class:`InducedStructureError` when the induced classes fail the model axioms, and
    :class:`RoundTripMismatchError` when the objectwise structure of the result differs from mc.
    The returned structure is always verified.
    """
    report = report or check_diagdown_hypotheses(mc, index)
    for condition in report.conditions:
        if not condition.passed:
            raise HypothesisFailure(f"hypothesis ({condition.name}) fails: {condition.message}",
                                    witness=condition.witness)
    fib = index.component_union(mc.fib)
    weq = index.component_union(mc.weq)
    cof = left_complement(fib & weq)
    result = ModelStructure(index.base, cof=cof, fib=fib, weq=weq)
    verdict = is_model_structure(result)
    if not verdict.verified:
        raise InducedStructureError(
            f"induced structure on {index.base.name} is refuted at {verdict.clause}: {verdict.message}",
            witness=verdict.witness)
    result = result.with_verdict(verdict)

    rebuilt = objectwise_structure(result, index)
    verdict = compare_structures(rebuilt, mc)
    if not verdict.verified:
        raise RoundTripMismatchError(
            f"objectwise structure of the induced structure differs from the original: {verdict.message}",
            witness=verdict.witness)
    return result


# -- product adjoint ---------------------------------------------------------------

class ProductAdjoint:
    """Evaluation at α and its right adjoint G with G(y)(β) = ∏_{Hom(β, α)} y."""

    def __init__(self, index: DiagramIndex, alpha: Ref):
        self.index = index
        self.alpha = index.shape.obj(alpha)
        self._cones: Dict[Tuple[int, int], Tuple[int, Tuple[int, ...]]] = {}

    def cone(self, beta: int, y: int) -> Tuple[int, Tuple[int, ...]]:
        """(∏_{Hom(β, α)} y, projections in Hom(β, α) order)."""
        key = (beta, y)
        if key not in self._cones:
            M, C = self.index.base, self.index.shape
            factors = [y] * len(C.hom(beta, self.alpha))
            found = product(M, factors)
            if found is None:
                raise ProductMissingError(
                    f"no product of {len(factors)} copies of {M.objects[y]} (for {C.objects[beta]})",
                    witness=(C.objects[beta], M.objects[y]))
            self._cones[key] = found
        return self._cones[key]

    def _mediate(self, source: int, target: int, legs: List[int], projections: Tuple[int, ...]) -> int:
        T = self.index.base.composites
        for m in self.index.base.hom(source, target):
            if all(T[p][m] == leg for p, leg in zip(projections, legs)):
                return m
        raise FinModelError("no mediating morphism into a product; the product search is inconsistent")

    def right_adjoint_object(self, y: Ref) -> int:
        """G(y) as an object of M^C."""
        M, C = self.index.base, self.index.shape
        yi = M.obj(y)
        objs = tuple(self.cone(beta, yi)[0] for beta in range(C.n_objects))
        mors = []
        for u in range(C.n_morphisms):
            beta, beta2 = C.dom[u], C.cod[u]
            source, source_proj = self.cone(beta, yi)
            target, target_proj = self.cone(beta2, yi)
            hom_beta = C.hom(beta, self.alpha)
            legs = [source_proj[hom_beta.index(C.composites[h][u])] for h in C.hom(beta2, self.alpha)]
            mors.append(self._mediate(source, target, legs, target_proj))
        X = self.index.find_object((objs, tuple(mors)))
        if X is None:
            raise FinModelError(f"G({M.objects[yi]}) is not a functor of the index")
        return X

    def right_adjoint_morphism(self, g: Ref) -> int:
        """G(g) as a morphism of M^C."""
        M, C = self.index.base, self.index.shape
        gi = M.mor(g)
        y, y2 = M.dom[gi], M.cod[gi]
        comps = []
        for beta in range(C.n_objects):
            source, source_proj = self.cone(beta, y)
            target, target_proj = self.cone(beta, y2)
            legs = [M.composites[gi][p] for p in source_proj]
            comps.append(self._mediate(source, target, legs, target_proj))
        phi = self.index.find_morphism(self.right_adjoint_object(y), self.right_adjoint_object(y2), comps)
        if phi is None:
            raise FinModelError(f"G({M.label(gi)}) is not a natural transformation of the index")
        return phi

    def transpose(self, phi: int, y: int) -> int:
        """φ: X → G(y) ↦ π_{id_α} ∘ φ_α : X(α) → y."""
        C = self.index.shape
        _, projections = self.cone(self.alpha, y)
        counit = projections[C.hom(self.alpha, self.alpha).index(C.identity[self.alpha])]
        return self.index.base.composites[counit][self.index.component_of(phi, self.alpha)]

    def check(self) -> Verdict:
        """Bijection Hom(X, G(y)) ≅ Hom(X(α), y) for all X, y, natural in both variables."""
        index = self.index
        M, total = index.base, index.total
        T = M.composites
        TT = total.composites
        G = {y: self.right_adjoint_object(y) for y in range(M.n_objects)}
        for X in range(total.n_objects):
            for y in range(M.n_objects):
                maps = total.hom(X, G[y])
                images = {self.transpose(phi, y) for phi in maps}
                expected = M.hom(index.evaluate(X, self.alpha), y)
                if len(images) != len(maps) or images != set(expected):
                    return Verdict.refuted("adjunction", "transposition is not a bijection",
                                           witness=(total.objects[X], M.objects[y]))
                for psi in range(total.n_morphisms):
                    if total.cod[psi] != X:
                        continue
                    for phi in maps:
                        left = self.transpose(TT[phi][psi], y)
                        right = T[self.transpose(phi, y)][index.component_of(psi, self.alpha)]
                        if left != right:
                            return Verdict.refuted("naturality", "transposition is not natural in X",
                                                   witness=(total.label(phi), total.label(psi)))
        for g in range(M.n_morphisms):
            Gg = self.right_adjoint_morphism(g)
            y, y2 = M.dom[g], M.cod[g]
            for phi in range(total.n_morphisms):
                if total.cod[phi] != G[y]:
                    continue
                if self.transpose(TT[Gg][phi], y2) != T[g][self.transpose(phi, y)]:
                    return Verdict.refuted("naturality", "transposition is not natural in y",
                                           witness=(total.label(phi), M.label(g)))
        return Verdict.ok(f"evaluation at {index.shape.objects[self.alpha]} is left adjoint to G")


def check_lemma(mc: ModelStructure, index: DiagramIndex, alpha: Ref) -> Verdict:
    """Components at α of each left class lift against the components of the matching right class."""
    _require_total(mc, index)
    a = index.shape.obj(alpha)
    M = index.base
    for name, left, right in (("C∩W vs F", mc.acyclic_cof, mc.fib),
                              ("C vs F∩W", mc.cof, mc.acyclic_fib)):
        targets = index.component_union(right)
        for l in left:
            component = index.component_of(l, a)
            for r in targets:
                if not lift_exists(M, component, r):
                    return Verdict.refuted(name, f"component at {index.shape.objects[a]} does not lift",
                                           witness=(index.total.label(l), M.label(component), M.label(r)))
    return Verdict.ok(f"component maps at {index.shape.objects[a]} lift")


def product_adjoint_check(index: DiagramIndex, alpha: Ref,
                          mc: Optional[ModelStructure] = None) -> Verdict:
    """Verify the product adjunction at α and, when a structure is given, the lemma's conclusion."""
    adjoint = ProductAdjoint(index, alpha)
    verdict = adjoint.check()
    if not verdict.verified or mc is None:
        return verdict
    lemma = check_lemma(mc, index, alpha)
    if not lemma.verified:
        return Verdict.refuted("lemma", lemma.message, witness=lemma.witness, details=(verdict, lemma))
    return Verdict.ok(verdict.message, details=(verdict, lemma))


def check_diagram_delocalization(m1: ModelStructure, m2: ModelStructure,
                                 index: DiagramIndex) -> ConditionReport:
    """Induce a base structure from M₁^C ∩ M₂^C and compare it with M₁ ∩ M₂."""
    conditions: List[ConditionResult] = []
    intersection = None
    try:
        intersection = right_intersect(objectwise_structure(m1, index), objectwise_structure(m2, index))
        conditions.append(ConditionResult(
            name="M₁^C ∩ M₂^C is a model structure",
            status="pass" if intersection.verified else "fail", witness=intersection.witness))
    except FinModelError as e:
        conditions.append(ConditionResult(name="M₁^C ∩ M₂^C is a model structure", status="error",
                                          message=str(e), witness=e.witness))

    if intersection is not None and intersection.verified:
        report = check_diagdown_hypotheses(intersection, index)
        conditions.extend(ConditionResult(name=f"hypothesis {c.name}", status=c.status,
                                          message=c.message, witness=c.witness)
                          for c in report.conditions)
        try:
            induced = induced_base_structure(intersection, index, report=report)
            expected = right_intersect(m1, m2)
            verdict = compare_structures(induced, expected)
            conditions.append(ConditionResult(name="induced structure equals M₁ ∩ M₂",
                                              status="pass" if verdict.verified else "fail",
                                              message=verdict.message, witness=verdict.witness))
        except FinModelError as e:
            conditions.append(ConditionResult(name="induced structure equals M₁ ∩ M₂", status="error",
                                              message=str(e), witness=e.witness))

    status = "verified" if conditions and all(c.passed for c in conditions) else "refuted"
    return ConditionReport(title="diagram delocalization", status=status, conditions=conditions)
