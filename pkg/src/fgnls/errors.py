"""Exception hierarchy shared by the analytic and numerical modules."""


class FGNLSError(Exception):
    """Base class for all errors raised by the package."""


class ConfigError(FGNLSError):
    pass


class GenericityViolation(FGNLSError, ValueError):
    """L/pi is (numerically) an integer; the resonant case is not handled."""


class DegenerateGap(FGNLSError, ValueError):
    def __init__(self, j, value=None):
        self.j = j
        self.value = value
        msg = f"alpha_{j}*beta_{j} vanishes (|alpha beta| = {value!r})"
        super().__init__(msg)


class ModeCollision(FGNLSError, ValueError):
    pass


class SingularReducedMatrix(FGNLSError, ArithmeticError):
    pass


class NonrecurrentMode(FGNLSError, ArithmeticError):
    def __init__(self, j, speed):
        self.j = j
        self.speed = speed
        super().__init__(f"mode {j} has non-positive recurrence speed w1 = {speed!r}")


class TooManyModes(FGNLSError, ValueError):
    pass


class ThetaUnderflow(FGNLSError, ArithmeticError):
    pass


class NumericalError(FGNLSError, ArithmeticError):
    """Failure of the direct integrator."""


class BlowupDetected(NumericalError):
    pass


class NonfiniteField(NumericalError):
    pass


class CoincidentBoundaries(UserWarning):
    """Two transition times of different modes coincide; they were merged."""
