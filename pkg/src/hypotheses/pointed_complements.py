from typing import List, Tuple
import logging

from .base_hypothesis import BaseHypothesis
from ..fincat import MorphismClass
from ..lifting import left_complement, right_complement
from ..models import ConditionResult

logger = logging.getLogger(__name__)


class PointedComplementsHypothesis(BaseHypothesis):
    """(iv) (^☐F⋆)^☐ = F⋆ and (^☐(F⋆∩W⋆))^☐ = F⋆∩W⋆ in the full pointed subcategory.

    Complements are taken inside the pointed subcategory. The ambient reading, with
    complements taken in M^C and restricted afterwards, is computed alongside and any
    divergence is reported in the message.
    """

    name = "iv"

    def _double_complements(self, cls: MorphismClass) -> Tuple[MorphismClass, MorphismClass]:
        pointed = self.pointed_subcategory()
        inside = right_complement(left_complement(cls, within=pointed), within=pointed)
        ambient = right_complement(left_complement(cls)) & pointed
        return inside, ambient

    def _equality(self, label: str, cls: MorphismClass) -> ConditionResult:
        inside, ambient = self._double_complements(cls)
        message = f"{label} is its own double complement"
        if ambient != inside:
            first = ((ambient - inside) | (inside - ambient)).first()
            message += f"; ambient reading differs at {cls.category.label(first)}"
            logger.info(f"Hypothesis (iv) readings diverge on {label} at {cls.category.label(first)}")
        else:
            message += "; ambient reading agrees"
        if inside == cls:
            return ConditionResult(name=self.name, status="pass", message=message)
        first = ((inside - cls) | (cls - inside)).first()
        return ConditionResult(name=self.name, status="fail", message=message,
                               witness=(cls.category.label(first),))

    def evaluate(self) -> List[ConditionResult]:
        return [
            self._equality("F⋆", self.pointed_fibrations()),
            self._equality("F⋆∩W⋆", self.pointed_acyclic_fibrations()),
        ]

    def readings_agree(self) -> bool:
        return all(inside == ambient for inside, ambient in
                   (self._double_complements(self.pointed_fibrations()),
                    self._double_complements(self.pointed_acyclic_fibrations())))
