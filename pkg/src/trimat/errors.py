"""Exception types shared across the package."""


class TrimatError(Exception):
    """Base class for all errors raised by trimat."""


class InputError(TrimatError, ValueError):
    """Malformed or out-of-contract input (wrong shape, non-finite, unsorted)."""


class DomainError(TrimatError, ValueError):
    """Argument outside the mathematical domain of the function."""


class BranchError(DomainError):
    """A root or branch value landed on the wrong side of a branch cut."""


class ConvergenceError(TrimatError, RuntimeError):
    """An iteration failed to reach its tolerance within its budget."""

    def __init__(self, message, last_iterate=None):
        super().__init__(message)
        self.last_iterate = last_iterate


class DegeneracyError(TrimatError, ArithmeticError):
    """Numerically rank-deficient or coincident configuration."""


class AccuracyError(TrimatError, ArithmeticError):
    """Quadrature could not certify the requested tolerance.

    Carries the best estimate and the error bound actually achieved.
    """

    def __init__(self, message, estimate, error_bound):
        super().__init__(message)
        self.estimate = estimate
        self.error_bound = error_bound


class BudgetError(TrimatError, ValueError):
    """Requested size exceeds a documented enumeration or table budget."""
