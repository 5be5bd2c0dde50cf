"""Exception hierarchy shared by all modules."""


class HypCurveError(Exception):
    """Base class for every error raised by the package."""


class DegenerateInputError(HypCurveError, ValueError):
    """Input is identically zero or otherwise too degenerate to process."""


class DomainError(HypCurveError, ValueError):
    """An argument lies outside the region where the operation is defined."""


class PreconditionError(HypCurveError, ValueError):
    """A documented precondition of the operation does not hold."""


class NumericError(HypCurveError, ArithmeticError):
    """An iterative computation failed to converge.

    ``best`` carries the best iterate found, when there is one.
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class TheoryViolationError(HypCurveError):
    """A computed object contradicts a proven structural property.

    In practice this signals a numerical classification failure.
    """


class ConsistencyError(HypCurveError):
    """Two computed quantities that must agree do not."""


class UnsupportedError(HypCurveError, NotImplementedError):
    """The requested kind of input is outside the supported scope."""
