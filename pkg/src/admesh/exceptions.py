"""Exception types raised by the admesh package."""


class AdmeshError(Exception):
    """Base class for all package errors."""


class UnsupportedOrder(AdmeshError, ValueError):
    pass


class DegenerateNodes(AdmeshError, ValueError):
    pass


class NonpositiveG(AdmeshError, ArithmeticError):
    """g(y) <= 0 (or not finite) at an abscissa the solver needed."""

    def __init__(self, y, value):
        super().__init__(f"g({y!r}) = {value!r} is not positive")
        self.y = y
        self.value = value


class NoBracket(AdmeshError, RuntimeError):
    pass


class UnknownProblem(AdmeshError, KeyError):
    pass


class BadParam(AdmeshError, ValueError):
    pass


class StepLimitExceeded(AdmeshError, RuntimeError):
    pass


class MissingDerivative(AdmeshError, ValueError):
    pass


class LevelBracketFail(AdmeshError, RuntimeError):
    pass


class UnknownFormat(AdmeshError, ValueError):
    pass


class NoSignChange(UserWarning):
    """BISEC found G(y_hi) < 0; the step returned the right endpoint."""
