"""Hypotheses of the induced-structure theorem as pluggable checks."""

from .base_hypothesis import BaseHypothesis
from .component_closure import ComponentClosureHypothesis
from .pointed_complements import PointedComplementsHypothesis
from .pointed_lifting import PointedAcyclicityHypothesis, PointedLiftingHypothesis

__all__ = [
    'BaseHypothesis',
    'ComponentClosureHypothesis',
    'PointedAcyclicityHypothesis',
    'PointedComplementsHypothesis',
    'PointedLiftingHypothesis'
]
