"""Right Bousfield (de)localization and the right-intersected model structure."""

import logging
from dataclasses import dataclass, field
from typing import Callable, List, Optional

from .errors import (ClassMismatchError, FibrationMismatchError, FinModelError,
                     UnverifiedStructureError)
from .fincat import MorphismClass
from .lifting import cell_closure, left_complement, retract_closure, right_complement
from .modelstruct import (GeneratingData, ModelStructure, Recognition, kan_recognition,
                          two_out_of_three, verify)
from .models import ConditionReport, ConditionResult, Verdict

logger = logging.getLogger(__name__)


def _difference_witness(a: MorphismClass, b: MorphismClass) -> tuple:
    difference = (a - b) | (b - a)
    first = difference.first()
    return () if first is None else (a.category.label(first),)


def _require_verified(*structures: ModelStructure) -> None:
    for m in structures:
        if not m.verified:
            raise UnverifiedStructureError(
                f"structure {m.name or m.category.name} is {m.status}, expected verified")
    first = structures[0]
    for m in structures[1:]:
        if m.category is not first.category and m.category != first.category:
            raise ClassMismatchError(
                f"structures live on different categories: {first.category.name} and {m.category.name}")


def is_right_localization(m1: ModelStructure, m2: ModelStructure) -> Verdict:
    """Verified iff m2 is a right Bousfield localization of m1: F₁ = F₂ and W₁ ⊆ W₂."""
    _require_verified(m1, m2)
    if m1.fib != m2.fib:
        return Verdict.refuted("fibrations", "fibrations do not agree",
                               witness=_difference_witness(m1.fib, m2.fib))
    if not m1.weq <= m2.weq:
        extra = (m1.weq - m2.weq).first()
        return Verdict.refuted("weak equivalences",
                               "a weak equivalence of the first structure is not one of the second",
                               witness=(m1.category.label(extra),))
    return Verdict.ok("right Bousfield localization")


def is_right_delocalization(m1: ModelStructure, m2: ModelStructure) -> Verdict:
    """m1 delocalizes m2 exactly when m2 is a right Bousfield localization of m1."""
    verdict = is_right_localization(m1, m2)
    if verdict.verified:
        return Verdict.ok("right Bousfield delocalization")
    return verdict


def right_intersect(m1: ModelStructure, m2: ModelStructure) -> ModelStructure:
    """M₁∩M₂: fibrations F₁ = F₂, weak equivalences W₁∩W₂, cofibrations ^☐(F∩W₁∩W₂).

    The result carries its verification status; on success it is also a right
    delocalization of both inputs.
    """
    _require_verified(m1, m2)
    if m1.fib != m2.fib:
        raise FibrationMismatchError("fibrations do not agree",
                                     witness=tuple((m1.fib - m2.fib).ids() + (m2.fib - m1.fib).ids()))
    weq = m1.weq & m2.weq
    fib = m1.fib
    cof = left_complement(fib & weq)
    result = verify(ModelStructure(m1.category, cof=cof, fib=fib, weq=weq))
    if result.verified:
        for m in (m1, m2):
            verdict = is_right_delocalization(result, m)
            if not verdict.verified:
                raise FinModelError(f"intersection does not delocalize its input: {verdict.message}",
                                    witness=verdict.witness)
    else:
        logger.warning(f"Right intersection on {m1.category.name} is not a model structure: "
                       f"{result.witness}")
    return result


# -- generator level ------------------------------------------------------------

def intersection_data(g1: GeneratingData, g2: GeneratingData) -> GeneratingData:
    """(I₁ ∪ I₂, J₁, W₁ ∩ W₂), no checks."""
    return GeneratingData(g1.category,
                          gen_cof=g1.gen_cof | g2.gen_cof,
                          gen_acyclic_cof=g1.gen_acyclic_cof,
                          weq=g1.weq & g2.weq)


@dataclass(frozen=True)
class GeneratorIntersection:
    """Intersected generating data with its recognition outcome and class-path comparison."""

    data: GeneratingData
    recognition: Recognition
    class_path: Optional[ModelStructure] = None
    notes: List[str] = field(default_factory=list)

    @property
    def structure(self) -> Optional[ModelStructure]:
        return self.recognition.structure

    @property
    def verified(self) -> bool:
        if not self.recognition.verified:
            return False
        return self.class_path is None or self.class_path.same_classes(self.structure)


def intersect_generators(g1: GeneratingData, g2: GeneratingData) -> GeneratorIntersection:
    """Run recognition on (I₁ ∪ I₂, J₁, W₁ ∩ W₂) and compare with the class-level intersection."""
    if g1.category is not g2.category and g1.category != g2.category:
        raise ClassMismatchError(
            f"generating data on different categories: {g1.category.name} and {g2.category.name}")
    fib1 = right_complement(g1.gen_acyclic_cof)
    fib2 = right_complement(g2.gen_acyclic_cof)
    if fib1 != fib2:
        raise FibrationMismatchError("fibrations do not agree: J₁^☐ ≠ J₂^☐",
                                     witness=_difference_witness(fib1, fib2))

    data = intersection_data(g1, g2)
    notes = []
    symmetric = GeneratingData(data.category, gen_cof=data.gen_cof,
                               gen_acyclic_cof=g2.gen_acyclic_cof, weq=data.weq)
    if right_complement(symmetric.gen_acyclic_cof) != right_complement(data.gen_acyclic_cof):
        notes.append("choosing J₂ instead of J₁ changes the fibrations")
    else:
        notes.append("choosing J₂ instead of J₁ gives the same fibrations")

    recognition = kan_recognition(data)
    class_path = None
    first, second = kan_recognition(g1), kan_recognition(g2)
    if first.verified and second.verified:
        class_path = right_intersect(first.structure, second.structure)
        if recognition.verified and not class_path.same_classes(recognition.structure):
            notes.append("generator path and class path disagree")
            logger.warning(f"Generator and class intersections disagree on {data.category.name}")
    else:
        notes.append("an input presentation is not recognized; class path skipped")

    logger.info(f"Generator intersection on {data.category.name}: {recognition.report.status}")
    return GeneratorIntersection(data=data, recognition=recognition,
                                 class_path=class_path, notes=notes)


def _equality_step(name: str, a: MorphismClass, b: MorphismClass) -> ConditionResult:
    if a == b:
        return ConditionResult(name=name, status="pass")
    return ConditionResult(name=name, status="fail", witness=_difference_witness(a, b))


def _inclusion_step(name: str, sub: MorphismClass, sup: MorphismClass) -> ConditionResult:
    if sub <= sup:
        return ConditionResult(name=name, status="pass")
    return ConditionResult(name=name, status="fail",
                           witness=(sub.category.label((sub - sup).first()),))


def _guarded(name: str, step: Callable[[], ConditionResult]) -> ConditionResult:
    try:
        return step()
    except FinModelError as e:
        return ConditionResult(name=name, status="error", message=str(e), witness=e.witness)


def proof_step_report(g1: GeneratingData, g2: GeneratingData) -> ConditionReport:
    """Evaluate each inclusion and equality used to prove the intersection theorem.

    Every step is an independent set check, so a broken pair shows exactly which steps fail.
    """
    I1, J1, W1 = g1.gen_cof, g1.gen_acyclic_cof, g1.weq
    I2, J2, W2 = g2.gen_cof, g2.gen_acyclic_cof, g2.weq
    data = intersection_data(g1, g2)
    I, J, W = data.gen_cof, data.gen_acyclic_cof, data.weq

    I1_fib, I2_fib, I_fib = right_complement(I1), right_complement(I2), right_complement(I)
    J1_fib, J2_fib, J_fib = right_complement(J1), right_complement(J2), right_complement(J)

    def weq_step() -> ConditionResult:
        name = "W has 2-out-of-3 and is retract-closed"
        verdict = two_out_of_three(W)
        if not verdict.verified:
            return ConditionResult(name=name, status="fail", message=verdict.message,
                                   witness=verdict.witness)
        closure = retract_closure(W)
        return _inclusion_step(name, closure, W)

    steps = [
        _guarded("W has 2-out-of-3 and is retract-closed", weq_step),
        _guarded("J₁-cell ⊆ W₁ ∩ ^☐(I₁^☐)",
                 lambda: _inclusion_step("J₁-cell ⊆ W₁ ∩ ^☐(I₁^☐)", cell_closure(J1),
                                         W1 & left_complement(I1_fib))),
        _guarded("J₁-cell ⊆ W₂ ∩ ^☐(I₂^☐)",
                 lambda: _inclusion_step("J₁-cell ⊆ W₂ ∩ ^☐(I₂^☐)", cell_closure(J1),
                                         W2 & left_complement(I2_fib))),
        _guarded("J-cell ⊆ W ∩ ^☐(I^☐)",
                 lambda: _inclusion_step("J-cell ⊆ W ∩ ^☐(I^☐)", cell_closure(J),
                                         W & left_complement(I_fib))),
        _equality_step("J^☐ = J₁^☐ = J₂^☐", J_fib | J1_fib | J2_fib, J_fib & J1_fib & J2_fib),
        _equality_step("I^☐ = I₁^☐ ∩ I₂^☐", I_fib, I1_fib & I2_fib),
        _inclusion_step("I₁^☐ ⊆ W₁ ∩ J₁^☐", I1_fib, W1 & J1_fib),
        _inclusion_step("I₂^☐ ⊆ W₂ ∩ J₂^☐", I2_fib, W2 & J2_fib),
        _inclusion_step("I^☐ ⊆ W ∩ J^☐", I_fib, W & J_fib),
        _inclusion_step("W₁ ∩ J^☐ ⊆ I₁^☐", W1 & J_fib, I1_fib),
        _inclusion_step("W₂ ∩ J^☐ ⊆ I₂^☐", W2 & J_fib, I2_fib),
        _inclusion_step("W ∩ J^☐ ⊆ I^☐", W & J_fib, I_fib),
    ]
    status = "verified" if all(s.passed for s in steps) else "refuted"
    return ConditionReport(title="proof steps", status=status, conditions=steps,
                           notes=["I = I₁ ∪ I₂, J = J₁, W = W₁ ∩ W₂"])
