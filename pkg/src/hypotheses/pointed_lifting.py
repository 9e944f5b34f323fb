from typing import List

from .base_hypothesis import BaseHypothesis
from ..lifting import left_complement
from ..models import ConditionResult


class PointedAcyclicityHypothesis(BaseHypothesis):
    """(iii) pointed maps with the left lifting property against all pointed fibrations are weak equivalences."""

    name = "iii"

    def evaluate(self) -> List[ConditionResult]:
        lifting = left_complement(self.pointed_fibrations()) & self.pointed_maps()
        return [self.result(lifting, self.structure.weq,
                            "pointed maps lifting against pointed fibrations are weak equivalences")]


class PointedLiftingHypothesis(BaseHypothesis):
    """(v) pointed weak equivalences lifting against pointed acyclic fibrations lift against all pointed fibrations."""

    name = "v"

    def evaluate(self) -> List[ConditionResult]:
        candidates = (left_complement(self.pointed_acyclic_fibrations())
                      & self.pointed_maps() & self.structure.weq)
        return [self.result(candidates, left_complement(self.pointed_fibrations()),
                            "pointed weak equivalences lifting against pointed acyclic fibrations "
                            "lift against all pointed fibrations")]
