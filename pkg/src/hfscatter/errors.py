"""Exception types raised across the workbench."""


class ScatterError(Exception):
    """Base class for every error raised by hfscatter."""


class RangeError(ScatterError, ValueError):
    """Argument outside the validated range of a numerical routine."""


class ResolutionError(ScatterError):
    """Grid too coarse for the requested frequency."""


class SingularSystemError(ScatterError):
    """Discrete integral equation is numerically singular or failed to converge."""

    def __init__(self, message, condition=None):
        super().__init__(message)
        self.condition = condition


class GridMismatchError(ScatterError):
    pass


class MismatchError(ScatterError):
    pass


class DegenerateBandError(ScatterError):
    """Band node at or beyond the 2*lambda resolution limit."""


class StiffnessError(ScatterError):
    """Radial integrator could not meet its tolerance."""


class ThresholdError(ScatterError):
    """Mode index or Laplace variable below the K*lambda threshold."""


class MonotonicityError(ScatterError):
    """Potential difference is not nonnegative."""


class ConfigError(ScatterError):
    def __init__(self, message, field=None, line=None):
        super().__init__(message)
        self.field = field
        self.line = line
