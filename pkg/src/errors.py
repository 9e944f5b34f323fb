"""Exception hierarchy for the finite model category workbench."""

from typing import Optional, Sequence, Tuple


class FinModelError(ValueError):
    """Base class for every input or precondition error raised by the library."""

    def __init__(self, message: str, witness: Optional[Sequence[str]] = None):
        super().__init__(message)
        self.witness: Tuple[str, ...] = tuple(witness or ())


class CategoryError(FinModelError):
    """A category description violates a category law or references unknown ids."""


class PosetCycleError(CategoryError):
    """The reflexive-transitive closure of a relation is not antisymmetric."""


class CapExceededError(CategoryError):
    """A functor category would exceed the configured object cap."""


class FileFormatError(FinModelError):
    """A category or structure file could not be parsed."""

    def __init__(self, path: str, message: str, line: Optional[int] = None,
                 field: Optional[str] = None):
        location = path
        if line is not None:
            location += f":{line}"
        if field:
            location += f" [{field}]"
        super().__init__(f"{location}: {message}")
        self.path = path
        self.line = line
        self.field = field


class PushoutMissingError(FinModelError):
    """A cell closure needed a pushout the category does not have."""


class ProductMissingError(FinModelError):
    """A product required by the product adjoint does not exist."""


class ClassMismatchError(FinModelError):
    """Morphism classes or structures live on different categories."""


class UnverifiedStructureError(FinModelError):
    """An operation requiring a verified model structure received another one."""


class FibrationMismatchError(FinModelError):
    """Two structures were required to share their fibrations and do not."""


class HypothesisFailure(FinModelError):
    """A hypothesis of the induced-structure theorem does not hold."""


class RoundTripMismatchError(FinModelError):
    """The objectwise structure rebuilt from an induced structure differs from the original."""


class BudgetExceededError(FinModelError):
    """Enumeration would examine more candidates than the budget allows."""


class EnumerationIncompleteError(FinModelError):
    """A verified structure was found that enumeration did not produce."""


class InducedStructureError(FinModelError):
    """The classes induced on the base category do not form a model structure."""
