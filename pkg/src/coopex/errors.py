"""Exception types shared across the package."""


class CoopexError(Exception):
    """Base class for all package-specific errors."""


class ValidationError(CoopexError):
    """An object violates one of its structural invariants."""


class SizeGuardError(CoopexError):
    """Instance is too large for an enumeration-based routine."""


class InfeasibleScheduleError(CoopexError):
    """A schedule that was required to be feasible is not."""


class InvalidSchemeError(CoopexError):
    """A coding scheme violates the causality support condition."""


class PropertyViolationError(CoopexError):
    """A mathematical property that should always hold was violated.

    Raised when an internal cross-check fails; indicates a bug rather
    than bad user input.
    """
