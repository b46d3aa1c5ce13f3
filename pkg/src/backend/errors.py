class LRVanishingError(Exception):
    """Base class for every error raised by the backend."""


class PartitionError(LRVanishingError, ValueError):
    """A partition could not be parsed or is not weakly decreasing."""


class TableauError(LRVanishingError, ValueError):
    """An edge-labeled tableau is structurally malformed."""


class DimensionError(LRVanishingError, ValueError):
    """A point does not have one coordinate per system variable."""


class PreconditionError(LRVanishingError, ValueError):
    """An operation was called outside of its documented domain."""


class BudgetExceededError(LRVanishingError):
    """A search or oracle computation exceeded its configured desk-scale cap."""


class ShiftInvarianceError(LRVanishingError, ArithmeticError):
    """A polynomial in Y changed under the uniform shift y_i -> y_i + t."""


class ExpansionError(LRVanishingError, ArithmeticError):
    """A factorial Schur expansion left a nonzero remainder."""


class SolverError(LRVanishingError, ArithmeticError):
    """A point returned by a feasibility oracle failed exact substitution."""
