"""Exception types raised across the package."""


class TCSimError(Exception):
    """Base class for all errors raised by tcsim."""


class InvalidParams(TCSimError, ValueError):
    pass


class DegenerateLimitUnstable(TCSimError, ArithmeticError):
    """Small-argument series for the envelope failed to converge."""


class NoSteadyState(TCSimError, ValueError):
    pass


class SizeLimitExceeded(TCSimError, ValueError):
    pass


class InconsistentCoefficients(TCSimError, ValueError):
    """Coefficient vector cannot be prepared by the circuit."""


class NaNInput(TCSimError, ValueError):
    pass


class IndexOutOfRange(TCSimError, IndexError):
    pass


class ZeroLinewidth(TCSimError, ValueError):
    pass


class StepTooLarge(TCSimError, ArithmeticError):
    """Integrator self-check failed; the step size is too coarse."""


class BackendUnavailable(TCSimError, ValueError):
    pass
