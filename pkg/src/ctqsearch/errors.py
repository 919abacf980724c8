"""Exception types shared across the package."""


class CtqSearchError(Exception):
    """Base class for all package errors."""


class InvalidProblemError(CtqSearchError, ValueError):
    """Raised when a search problem or schedule is ill-posed (e.g. N < 2)."""


class ValidationError(CtqSearchError, ValueError):
    """Raised when an argument violates a documented precondition."""


class PoleError(CtqSearchError, ValueError):
    """Gamma function evaluated at a non-positive integer.

    The offending integer is stored in ``pole``.
    """

    def __init__(self, pole: int):
        self.pole = pole
        super().__init__(f"gamma pole at z = {pole}")


class AccuracyError(CtqSearchError, ArithmeticError):
    """Requested accuracy could not be reached.

    ``best`` holds the best value obtained, ``estimate`` its estimated error.
    """

    def __init__(self, message, best=None, estimate=None):
        self.best = best
        self.estimate = estimate
        super().__init__(message)


class IntegrationError(CtqSearchError, RuntimeError):
    """ODE integration failed; ``t_fail`` is the time where the step collapsed."""

    def __init__(self, message, t_fail=None):
        self.t_fail = t_fail
        super().__init__(message)


class DegenerateSolutionError(CtqSearchError, ArithmeticError):
    """Coefficient denominator vanished while solving for analytic amplitudes."""
