from typing import List
import logging

from .base_hypothesis import BaseHypothesis
from ..fincat import DiagramIndex
from ..modelstruct import ModelStructure
from ..models import ConditionResult

logger = logging.getLogger(__name__)


class ComponentClosureHypothesis(BaseHypothesis):
    """A morphism whose every component is a component of some member of the class is a member.

    ``kind="fibrations"`` is hypothesis (i), ``kind="weak equivalences"`` hypothesis (ii).
    """

    def __init__(self, index: DiagramIndex, structure: ModelStructure, kind: str = "fibrations"):
        super().__init__(index, structure)
        if kind not in ("fibrations", "weak equivalences"):
            raise ValueError(f"Unknown component class: {kind}")
        self.kind = kind
        self.name = "i" if kind == "fibrations" else "ii"

    def evaluate(self) -> List[ConditionResult]:
        cls = self.structure.fib if self.kind == "fibrations" else self.structure.weq
        components = self.index.component_union(cls)
        candidates = self.index.componentwise(components)
        logger.debug(f"{len(components)} component maps of {self.kind}, "
                     f"{len(candidates)} morphisms built from them")
        return [self.result(candidates, cls,
                            f"morphisms made of component maps of {self.kind} are {self.kind}")]
