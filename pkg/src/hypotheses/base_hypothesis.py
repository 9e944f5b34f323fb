"""Base hypothesis class for the induced-structure checks on diagram categories."""

from abc import ABC, abstractmethod
from typing import List
import logging

from ..fincat import DiagramIndex, MorphismClass
from ..modelstruct import ModelStructure
from ..models import ConditionResult

logger = logging.getLogger(__name__)


class BaseHypothesis(ABC):
    """Base class for all hypotheses evaluated on a structure over M^C."""

    name = "?"

    def __init__(self, index: DiagramIndex, structure: ModelStructure):
        """Initialize the hypothesis with the diagram index and the structure on its total category."""
        self.index = index
        self.structure = structure
        self.hypothesis_type = self.__class__.__name__.replace('Hypothesis', '').lower()

    @abstractmethod
    def evaluate(self) -> List[ConditionResult]:
        """Evaluate the hypothesis exhaustively.

        Returns:
            List[ConditionResult]: One result per clause, witnesses attached on failure
        """
        pass

    # -- pointed subcategory ------------------------------------------------

    def pointed_subcategory(self) -> MorphismClass:
        """Morphisms of M^C between pointed (constant) diagrams."""
        return MorphismClass(self.index.total, self.index.pointed_subcategory_mask())

    def pointed_maps(self) -> MorphismClass:
        """The maps P(f) for f in M."""
        return MorphismClass(self.index.total, self.index.pointed_maps_mask())

    def pointed_fibrations(self) -> MorphismClass:
        return self.structure.fib & self.pointed_subcategory()

    def pointed_acyclic_fibrations(self) -> MorphismClass:
        return self.structure.acyclic_fib & self.pointed_subcategory()

    def result(self, sub: MorphismClass, sup: MorphismClass, message: str) -> ConditionResult:
        """Pass when sub ⊆ sup, else fail with the first morphism of sub outside sup."""
        if sub <= sup:
            return ConditionResult(name=self.name, status="pass", message=message)
        outside = (sub - sup).first()
        return ConditionResult(name=self.name, status="fail", message=f"{message} fails",
                               witness=(sub.category.label(outside),))

    # -- logging ------------------------------------------------------------

    def log_evaluation_start(self):
        """Log the start of hypothesis evaluation."""
        logger.info(f"Evaluating hypothesis ({self.name}) {self.hypothesis_type} "
                    f"on {self.index.total.name}...")

    def log_evaluation_complete(self, results: List[ConditionResult]):
        """Log the completion of hypothesis evaluation."""
        passed = sum(1 for r in results if r.passed)
        logger.info(f"Hypothesis ({self.name}): {passed}/{len(results)} clauses pass")

    def log_evaluation_error(self, error: Exception):
        """Log an error during hypothesis evaluation."""
        logger.error(f"Error evaluating hypothesis ({self.name}): {error}")

    def run(self) -> List[ConditionResult]:
        """Run the hypothesis and return its results.

        Returns:
            List[ConditionResult]: Clause results, a single error result on failure
        """
        try:
            self.log_evaluation_start()
            results = self.evaluate()
            self.log_evaluation_complete(results)
            return results
        except Exception as e:
            self.log_evaluation_error(e)
            return [ConditionResult(name=self.name, status="error", message=str(e),
                                    witness=getattr(e, "witness", ()))]
