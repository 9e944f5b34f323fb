"""Data models for files read and reports written by the workbench."""

from typing import Annotated, Dict, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field


class MorphismSpec(BaseModel):
    """One declared morphism of a category file."""

    model_config = ConfigDict(extra="forbid")

    id: str
    dom: str
    cod: str


class CategoryFile(BaseModel):
    """A category given by objects, morphisms and a composition table."""

    model_config = ConfigDict(extra="forbid")

    kind: Literal["category"]
    name: str = "M"
    objects: List[str]
    morphisms: List[MorphismSpec] = []
    identities: Dict[str, str] = {}
    composition: List[Tuple[str, str, str]] = []


class PosetFile(BaseModel):
    """A poset given by elements and a generating relation."""

    model_config = ConfigDict(extra="forbid")

    kind: Literal["poset"]
    name: str = "P"
    elements: List[str]
    leq: List[Tuple[str, str]] = []


CategoryDocument = Annotated[Union[CategoryFile, PosetFile], Field(discriminator="kind")]


class StructureFile(BaseModel):
    """Cofibrations, fibrations and weak equivalences on a referenced category."""

    model_config = ConfigDict(extra="forbid")

    category: str
    name: Optional[str] = None
    cof: List[str]
    fib: List[str]
    weq: List[str]


class GeneratingFile(BaseModel):
    """Generating cofibrations, generating acyclic cofibrations and weak equivalences."""

    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    category: str
    name: Optional[str] = None
    gen_cof: List[str] = Field(alias="I")
    gen_acyclic_cof: List[str] = Field(alias="J")
    weq: List[str]


class Verdict(BaseModel):
    """Outcome of a verification, with the counterexample on refutation."""

    model_config = ConfigDict(frozen=True)

    status: Literal["verified", "refuted"]
    clause: Optional[str] = None
    message: str = ""
    witness: Tuple[str, ...] = ()
    details: Tuple["Verdict", ...] = ()

    @property
    def verified(self) -> bool:
        return self.status == "verified"

    @classmethod
    def ok(cls, message: str = "", details: Tuple["Verdict", ...] = ()) -> "Verdict":
        return cls(status="verified", message=message, details=details)

    @classmethod
    def refuted(cls, clause: str, message: str, witness: Tuple[str, ...] = (),
                details: Tuple["Verdict", ...] = ()) -> "Verdict":
        return cls(status="refuted", clause=clause, message=message,
                   witness=tuple(witness), details=details)


Verdict.model_rebuild()


class ConditionResult(BaseModel):
    """One named condition of a checklist report."""

    name: str
    status: Literal["pass", "fail", "trivial", "error"]
    message: str = ""
    witness: Tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return self.status in ("pass", "trivial")


class StructureSummary(BaseModel):
    """Serializable view of a model structure."""

    category: str
    name: Optional[str] = None
    cof: List[str]
    fib: List[str]
    weq: List[str]
    status: Literal["unverified", "verified", "refuted"]
    witness: Tuple[str, ...] = ()


class ConditionReport(BaseModel):
    """A checklist of conditions, optionally with the structure it produced."""

    title: str
    status: Literal["verified", "refuted"]
    conditions: List[ConditionResult] = []
    structure: Optional[StructureSummary] = None
    notes: List[str] = []

    @property
    def verified(self) -> bool:
        return self.status == "verified"


class QuiverNode(BaseModel):
    """A verified model structure as a quiver node."""

    index: int
    label: str
    cof: List[str]
    fib: List[str]
    weq: List[str]


class QuiverEdge(BaseModel):
    """A left or right Bousfield localization between two nodes."""

    source: int
    target: int
    kind: Literal["left", "right"]


class QuiverDump(BaseModel):
    """Machine-readable export of a Bousfield quiver."""

    category: str
    nodes: List[QuiverNode]
    edges: List[QuiverEdge]
    components: List[List[int]] = []


class StructureReport(BaseModel):
    """A model structure together with the verdict of the axiom check."""

    structure: StructureSummary
    verdict: Verdict


class CensusRow(BaseModel):
    """One enumerated structure with class sizes, used for tabular export."""

    index: int
    category: str
    cof_count: int
    fib_count: int
    weq_count: int
    cof: str
    fib: str
    weq: str


class CensusReport(BaseModel):
    """Every model structure on one category in canonical order."""

    category: str
    count: int
    structures: List[StructureSummary]


class IntersectionReport(BaseModel):
    """The right-intersected structure with its localization checks and proof-step replay."""

    structure: StructureSummary
    verdict: Verdict
    localizations: List[Verdict] = []
    proof_steps: Optional[ConditionReport] = None
    generators: Optional[ConditionReport] = None
    notes: List[str] = []


class DiagramReport(BaseModel):
    """Results of the named diagram checks on M^C."""

    category: str
    shape: str
    total_objects: int
    total_morphisms: int
    reports: List[ConditionReport]

    @property
    def verified(self) -> bool:
        return all(r.verified for r in self.reports)
