"""Exception types raised by the simulation library."""


class EHDError(Exception):
    """Base class for all library errors."""


class InvalidInputError(EHDError, ValueError):
    """An argument is outside the domain of the operation."""


class DegenerateDataError(EHDError, ValueError):
    """Calibration samples cannot determine the fitted coefficients."""


class SingularMassMatrixError(EHDError, ArithmeticError):
    """The 2x2 mass matrix determinant fell below the configured floor."""

    def __init__(self, det, t=None, theta1=None, theta2=None):
        self.det = det
        self.t = t
        where = ""
        if t is not None:
            where = f" at t={t!r} s (theta1={theta1!r}, theta2={theta2!r})"
        super().__init__(f"singular mass matrix, det={det!r}{where}")


class DivergenceError(EHDError, ArithmeticError):
    """The integrated state became NaN or infinite."""

    def __init__(self, t):
        self.t = t
        super().__init__(f"integration diverged (non-finite state) at t={t!r} s")


class InvalidStepError(EHDError, ValueError):
    """The fixed step does not resolve both phases of the drive waveform."""


class InsufficientDataError(EHDError, ValueError):
    """A trajectory is too short for the requested analysis."""


class ConfigError(EHDError, ValueError):
    """A configuration file could not be parsed or failed validation."""

    def __init__(self, message, key=None, line=None, source=None):
        self.key = key
        self.line = line
        self.source = source
        where = source or ""
        if line is not None:
            where += f"{':' if where else ''}line {line}"
        prefix = f"{where}: " if where else ""
        if key is not None:
            prefix += f"{key}: "
        super().__init__(prefix + message)
