"""Exception hierarchy shared by all lqdepth modules."""


class DepthError(Exception):
    """Base class for every error raised by lqdepth."""


class SingularCovariance(DepthError, ValueError):
    """The sample covariance is not positive definite."""


class RankDeficient(DepthError, ValueError):
    """A constraint matrix does not have full row rank."""


class Infeasible(DepthError):
    """A linear system or program has no feasible point."""


class DimensionMismatch(DepthError, ValueError):
    """Query points and data cloud live in different dimensions."""


class SolverFailure(DepthError, RuntimeError):
    """A numerical engine did not return a usable answer."""


class ConvergenceFailure(SolverFailure):
    """The convex engine hit its iteration cap.

    The best iterate found so far is kept on the exception so that callers
    can still inspect or use it.
    """

    def __init__(self, message, best_p=None, best_value=None, iterations=None):
        super().__init__(message)
        self.best_p = best_p
        self.best_value = best_value
        self.iterations = iterations


class ParseError(DepthError, ValueError):
    """Malformed CSV input. ``row`` is 1-based and counts the header."""

    def __init__(self, message, row=None):
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)
        self.row = row
