"""Exception hierarchy shared by all toolkit modules."""


class GmidError(Exception):
    """Base class for all toolkit errors."""


class ValidationError(GmidError):
    """Malformed input: bad shapes, out-of-range structural parameters, bad JSON."""


class PreconditionError(GmidError):
    """Structurally valid input outside an operation's admissible domain."""


class OverflowGuardError(GmidError):
    """A computation would leave the double-precision exponent range."""


class NonConvergenceError(GmidError):
    """An iterative scheme failed to converge within its budget."""


class BoundaryZeroError(GmidError):
    """A contour walk passed through (or numerically onto) a zero."""


class TimeBudgetExceeded(GmidError):
    """A long-running request exceeded its wall-clock budget."""
