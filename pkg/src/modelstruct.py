"""Weak factorization systems, model structures and Kan's recognition theorem."""

import dataclasses
import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

from .errors import CategoryError, ClassMismatchError, FinModelError
from .fincat import FiniteCategory, MorphismClass, retract_table
from .lifting import (cell_closure, left_complement, lifting_failure, lifts_against,
                      right_complement)
from .models import ConditionReport, ConditionResult, StructureSummary, Verdict

logger = logging.getLogger(__name__)

Factorization = Tuple[int, int, int]


def _same_category(category: FiniteCategory, *classes: MorphismClass) -> None:
    for cls in classes:
        if cls.category is not category and cls.category != category:
            raise ClassMismatchError(
                f"class on {cls.category.name} used with a structure on {category.name}")


@dataclass(frozen=True, eq=False)
class ModelStructure:
    """Cofibrations, fibrations and weak equivalences on one category."""

    category: FiniteCategory
    cof: MorphismClass
    fib: MorphismClass
    weq: MorphismClass
    status: str = "unverified"
    witness: Tuple[str, ...] = ()
    name: Optional[str] = None

    def __post_init__(self):
        _same_category(self.category, self.cof, self.fib, self.weq)
        if self.status not in ("unverified", "verified", "refuted"):
            raise ValueError(f"unknown structure status {self.status!r}")

    @property
    def verified(self) -> bool:
        return self.status == "verified"

    @property
    def acyclic_cof(self) -> MorphismClass:
        return self.cof & self.weq

    @property
    def acyclic_fib(self) -> MorphismClass:
        return self.fib & self.weq

    def key(self) -> Tuple[int, int, int]:
        """Canonical encoding (C, F, W) as bitsets; used for sorting and deduplication."""
        return (self.cof.bits, self.fib.bits, self.weq.bits)

    def same_classes(self, other: "ModelStructure") -> bool:
        return (self.cof == other.cof and self.fib == other.fib and self.weq == other.weq)

    def with_verdict(self, verdict: Verdict) -> "ModelStructure":
        return dataclasses.replace(self, status=verdict.status, witness=verdict.witness)

    def summary(self) -> StructureSummary:
        return StructureSummary(category=self.category.name, name=self.name,
                                cof=self.cof.ids(), fib=self.fib.ids(), weq=self.weq.ids(),
                                status=self.status, witness=self.witness)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ModelStructure):
            return NotImplemented
        return self.same_classes(other)

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return (f"ModelStructure({self.category.name!r}, C={self.cof.ids()}, "
                f"F={self.fib.ids()}, W={self.weq.ids()}, {self.status})")


@dataclass(frozen=True)
class GeneratingData:
    """Generating cofibrations I, generating acyclic cofibrations J and weak equivalences W."""

    category: FiniteCategory
    gen_cof: MorphismClass
    gen_acyclic_cof: MorphismClass
    weq: MorphismClass
    name: Optional[str] = None

    def __post_init__(self):
        _same_category(self.category, self.gen_cof, self.gen_acyclic_cof, self.weq)


# -- weak factorization systems ---------------------------------------------------

def factorization_table(category: FiniteCategory) -> Tuple[Tuple[Factorization, ...], ...]:
    """For each morphism f, every (z, l, r) with r∘l = f, sorted lexicographically."""
    def compute():
        T = category.composites
        rows: List[List[Factorization]] = [[] for _ in range(category.n_morphisms)]
        for l in range(category.n_morphisms):
            for r in range(category.n_morphisms):
                h = T[r][l]
                if h >= 0:
                    rows[h].append((category.cod[l], l, r))
        return tuple(tuple(sorted(row)) for row in rows)
    return category.cached("factorizations", compute)


def factor(f: int, L: MorphismClass, R: MorphismClass) -> Optional[Factorization]:
    """Least (z, l, r) with l ∈ L, r ∈ R and r∘l = f."""
    table = factorization_table(L.category)
    left, right = L.bits, L.bits_of(R)
    for z, l, r in table[f]:
        if left >> l & 1 and right >> r & 1:
            return (z, l, r)
    return None


def _unfactored(L: MorphismClass, R: MorphismClass) -> Optional[int]:
    table = factorization_table(L.category)
    left, right = L.bits, R.bits
    for f, row in enumerate(table):
        if not any(left >> l & 1 and right >> r & 1 for _, l, r in row):
            return f
    return None


def _retract_escape(S: MorphismClass) -> Optional[Tuple[int, int]]:
    """(f, g): a retract f of a member g that is missing from S."""
    table = retract_table(S.category)
    for g in S:
        missing = table[g] & ~S.bits
        if missing:
            return ((missing & -missing).bit_length() - 1, g)
    return None


def wfs_holds(L: MorphismClass, R: MorphismClass) -> bool:
    """Boolean form of :func:`is_wfs` without witness construction."""
    return (_unfactored(L, R) is None and lifts_against(L, R)
            and _retract_escape(L) is None and _retract_escape(R) is None)


def is_wfs(L: MorphismClass, R: MorphismClass) -> Verdict:
    """Check factorization, lifting and retract closure, reporting the first failing clause."""
    category = L.category
    L.bits_of(R)
    name = category.label

    f = _unfactored(L, R)
    if f is not None:
        return Verdict.refuted("factorization",
                               f"{name(f)} does not factor as r∘l with l in L and r in R",
                               witness=(name(f),))

    failure = lifting_failure(L, R)
    if failure is not None:
        l, r, top, bottom = failure
        return Verdict.refuted(
            "lifting",
            f"square ({name(top)}, {name(bottom)}) from {name(l)} to {name(r)} has no diagonal",
            witness=(name(l), name(r), name(top), name(bottom)))

    for side, cls in (("L", L), ("R", R)):
        escape = _retract_escape(cls)
        if escape is not None:
            f, g = escape
            return Verdict.refuted("retracts",
                                   f"{name(f)} is a retract of {name(g)} ∈ {side} but lies outside {side}",
                                   witness=(name(f), name(g)))
    return Verdict.ok("weak factorization system")


# -- model structures ---------------------------------------------------------

def two_out_of_three(W: MorphismClass) -> Verdict:
    """Check that any two of f, g, g∘f in W put the third in W."""
    category = W.category
    T = category.composites
    bits = W.bits
    for f in range(category.n_morphisms):
        for g in range(category.n_morphisms):
            h = T[g][f]
            if h < 0:
                continue
            count = (bits >> f & 1) + (bits >> g & 1) + (bits >> h & 1)
            if count == 2:
                triple = (category.label(f), category.label(g), category.label(h))
                return Verdict.refuted("2-out-of-3",
                                       f"exactly two of {triple[0]}, {triple[1]}, {triple[2]} are weak equivalences",
                                       witness=triple)
    return Verdict.ok("2-out-of-3")


def two_out_of_three_holds(category: FiniteCategory, bits: int) -> bool:
    T = category.composites
    for f in range(category.n_morphisms):
        row_f = bits >> f & 1
        for g in range(category.n_morphisms):
            h = T[g][f]
            if h >= 0 and row_f + (bits >> g & 1) + (bits >> h & 1) == 2:
                return False
    return True


def is_model_structure(m: ModelStructure) -> Verdict:
    """2-out-of-3 for W, then the two weak factorization systems (C∩W, F) and (C, F∩W)."""
    sub = two_out_of_three(m.weq)
    if not sub.verified:
        return Verdict.refuted("2-out-of-3", sub.message, witness=sub.witness, details=(sub,))
    sub = is_wfs(m.acyclic_cof, m.fib)
    if not sub.verified:
        return Verdict.refuted("wfs(C∩W, F)", sub.message, witness=sub.witness, details=(sub,))
    sub = is_wfs(m.cof, m.acyclic_fib)
    if not sub.verified:
        return Verdict.refuted("wfs(C, F∩W)", sub.message, witness=sub.witness, details=(sub,))
    return Verdict.ok("model structure")


def model_structure_holds(m: ModelStructure) -> bool:
    return (two_out_of_three_holds(m.category, m.weq.bits)
            and wfs_holds(m.acyclic_cof, m.fib) and wfs_holds(m.cof, m.acyclic_fib))


def verify(m: ModelStructure) -> ModelStructure:
    """Return m with its status set from a full axiom check."""
    verdict = is_model_structure(m)
    logger.debug(f"Structure on {m.category.name}: {verdict.status} {verdict.clause or ''}")
    return m.with_verdict(verdict)


def trivial_structures(category: FiniteCategory) -> List[ModelStructure]:
    """The distinct structures (C, W, F) among (all, isos, all), (all, all, isos), (isos, all, all)."""
    everything = category.all_morphisms()
    isos = category.isomorphisms()
    structures: List[ModelStructure] = []
    for cof, weq, fib in ((everything, isos, everything),
                          (everything, everything, isos),
                          (isos, everything, everything)):
        m = verify(ModelStructure(category, cof=cof, fib=fib, weq=weq))
        if not m.verified:
            raise CategoryError(
                f"trivial structure on {category.name} failed verification; "
                "the category tables are inconsistent", witness=m.witness)
        if m not in structures:
            structures.append(m)
    return structures


# -- cofibrant generation ------------------------------------------------------

def structure_from_generators(g: GeneratingData) -> ModelStructure:
    """The triple (C = ^☐(I^☐), F = J^☐, W) determined by generating data, unverified."""
    return ModelStructure(g.category,
                          cof=left_complement(right_complement(g.gen_cof)),
                          fib=right_complement(g.gen_acyclic_cof),
                          weq=g.weq, name=g.name)


def generators_of(m: ModelStructure) -> GeneratingData:
    """Present a structure by I = C and J = C∩W; on a finite category this always generates it."""
    return GeneratingData(m.category, gen_cof=m.cof, gen_acyclic_cof=m.acyclic_cof,
                          weq=m.weq, name=m.name)


def _first_outside(sub: MorphismClass, sup: MorphismClass) -> Tuple[str, ...]:
    extra = sub - sup
    first = extra.first()
    return () if first is None else (sub.category.label(first),)


def inclusion_result(name: str, sub: MorphismClass, sup: MorphismClass, description: str) -> ConditionResult:
    if sub <= sup:
        return ConditionResult(name=name, status="pass", message=description)
    return ConditionResult(name=name, status="fail", message=f"{description} fails",
                           witness=_first_outside(sub, sup))


@dataclass(frozen=True)
class Recognition:
    """Outcome of Kan's recognition theorem: the condition report and the induced structure."""

    report: ConditionReport
    structure: Optional[ModelStructure]

    @property
    def verified(self) -> bool:
        return self.report.verified


def _condition_weq(W: MorphismClass) -> ConditionResult:
    verdict = two_out_of_three(W)
    if not verdict.verified:
        return ConditionResult(name="i", status="fail", message=verdict.message,
                               witness=verdict.witness)
    escape = _retract_escape(W)
    if escape is not None:
        f, g = escape
        label = W.category.label
        return ConditionResult(name="i", status="fail",
                               message=f"W is not closed under retracts: {label(f)} is a retract of {label(g)}",
                               witness=(label(f), label(g)))
    return ConditionResult(name="i", status="pass",
                           message="W has 2-out-of-3 and is closed under retracts")


def kan_recognition(g: GeneratingData) -> Recognition:
    """Evaluate all six recognition conditions and, on success, the induced structure."""
    category = g.category
    I, J, W = g.gen_cof, g.gen_acyclic_cof, g.weq
    logger.info(f"Recognition on {category.name}: |I|={len(I)}, |J|={len(J)}, |W|={len(W)}")

    I_fib = right_complement(I)
    I_cof = left_complement(I_fib)
    J_fib = right_complement(J)

    conditions = [
        _condition_weq(W),
        ConditionResult(name="ii", status="trivial",
                        message="domains of I are small relative to I-cell: trivial (finite category)"),
        ConditionResult(name="iii", status="trivial",
                        message="domains of J are small relative to J-cell: trivial (finite category)"),
    ]

    try:
        J_cell = cell_closure(J)
        conditions.append(inclusion_result("iv", J_cell, W & I_cof, "J-cell ⊆ W ∩ ^☐(I^☐)"))
    except FinModelError as e:
        conditions.append(ConditionResult(name="iv", status="error", message=str(e), witness=e.witness))

    conditions.append(inclusion_result("v", I_fib, W & J_fib, "I^☐ ⊆ W ∩ J^☐"))

    first = W & I_cof
    second = W & J_fib
    J_cof = left_complement(J_fib)
    if first <= J_cof or second <= I_fib:
        conditions.append(ConditionResult(
            name="vi", status="pass",
            message="W ∩ ^☐(I^☐) ⊆ ^☐(J^☐) or W ∩ J^☐ ⊆ I^☐"))
    else:
        conditions.append(ConditionResult(
            name="vi", status="fail",
            message="neither W ∩ ^☐(I^☐) ⊆ ^☐(J^☐) nor W ∩ J^☐ ⊆ I^☐",
            witness=_first_outside(first, J_cof) + _first_outside(second, I_fib)))

    structure = None
    notes: List[str] = []
    if all(c.passed for c in conditions):
        structure = verify(structure_from_generators(g))
        if not structure.verified:
            conditions.append(ConditionResult(name="cross-check", status="fail",
                                              message="induced triple is not a model structure",
                                              witness=structure.witness))
        elif structure.acyclic_fib != I_fib:
            difference = (structure.acyclic_fib - I_fib) | (I_fib - structure.acyclic_fib)
            conditions.append(ConditionResult(name="cross-check", status="fail",
                                              message="acyclic fibrations F∩W differ from I^☐",
                                              witness=(category.label(difference.first()),)))
        else:
            conditions.append(ConditionResult(name="cross-check", status="pass",
                                              message="induced triple verified; F∩W = I^☐"))
        notes.append("smallness holds automatically for finite categories")

    status = "verified" if all(c.passed for c in conditions) else "refuted"
    failing = [c.name for c in conditions if not c.passed]
    if failing:
        logger.info(f"Recognition refuted at conditions {', '.join(failing)}")
    report = ConditionReport(title="recognition", status=status, conditions=conditions,
                             structure=structure.summary() if structure is not None else None,
                             notes=notes)
    return Recognition(report=report, structure=structure if status == "verified" else None)
