"""hfscatter: a desk-scale workbench for high-frequency inverse scattering in 2D.

Modules: specfun (Bessel/Hankel, Debye, Robin coefficients), numerics
(potentials, angular grids, transform oracles), forward (Lippmann-Schwinger
solver and far fields), borninv (band reconstruction and stability records),
nearfield (unit-disk Robin problem), nearboundary (near-boundary potentials),
cli and suites.
"""

from .errors import (ConfigError, DegenerateBandError, GridMismatchError, MismatchError, MonotonicityError,
                     RangeError, ResolutionError, ScatterError, SingularSystemError, StiffnessError,
                     ThresholdError)

__version__ = "0.1.0"

__all__ = [
    "ConfigError", "DegenerateBandError", "GridMismatchError", "MismatchError", "MonotonicityError",
    "RangeError", "ResolutionError", "ScatterError", "SingularSystemError", "StiffnessError", "ThresholdError",
]
