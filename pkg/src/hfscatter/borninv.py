"""High-frequency recovery of the low-frequency band of qhat from far-field
data, and the two sides of the corresponding stability estimate."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from . import specfun
from .errors import DegenerateBandError, RangeError
from .forward import FarField
from .numerics import FourierSamples, Potential, fourier_oracle, polar_band_nodes

ETA_FLOOR = 1e-5


def direction_pair(xi, lam):
    """The two (theta, omega) unit-vector pairs with lam (theta - omega) = xi.

    theta = eta + xi/(2 lam), omega = eta - xi/(2 lam), eta perpendicular to xi
    with |eta| = sqrt(1 - |xi/(2 lam)|^2); one pair per sense of eta.
    """
    xi = np.asarray(xi, dtype=float)
    half = xi / (2.0 * lam)
    nh = float(np.hypot(*half))
    if nh >= 1.0:
        raise DegenerateBandError(f"|xi| = {2 * lam * nh:.6g} is not below 2*lambda")
    r = math.sqrt((1.0 - nh) * (1.0 + nh))
    if r < ETA_FLOOR:
        raise DegenerateBandError(f"|eta| = {r:.2e} too close to the 2*lambda limit")
    perp = np.array([-half[1], half[0]]) / nh if nh > 0 else np.array([0.0, 1.0])
    out = []
    for sense in (1.0, -1.0):
        eta = sense * r * perp
        out.append((eta + half, eta - half))
    return out


def _angle(v):
    return math.atan2(v[1], v[0]) % (2 * math.pi)


@dataclass
class BandSpec:
    epsilon: float
    alpha: float
    xi_nodes: np.ndarray
    weights: np.ndarray
    lam: float

    def __post_init__(self):
        if not 0 < self.epsilon < 2:
            raise RangeError("epsilon must lie in (0, 2)")
        if not self.alpha > 2:
            raise RangeError("alpha must exceed the dimension 2")
        lim = (2 - self.epsilon) * self.lam
        if np.any(np.hypot(self.xi_nodes[:, 0], self.xi_nodes[:, 1]) >= lim):
            raise RangeError("band node outside |xi| < (2 - epsilon) lambda")

    @classmethod
    def polar(cls, lam, epsilon=0.2, alpha=3.0, n_radial=24, n_angle=48):
        xis, w = polar_band_nodes((2 - epsilon) * lam, n_radial, n_angle)
        return cls(epsilon, alpha, xis, w, lam)


def _interp_periodic(ff: FarField, theta, omega):
    """Bilinear interpolation of a FarField matrix in (theta, omega), periodic."""
    def locate(grid, ang):
        step = 2 * math.pi / grid.size
        s = (ang % (2 * math.pi)) / step
        i = int(math.floor(s)) % grid.size
        return i, (i + 1) % grid.size, s - math.floor(s)

    i0, i1, ti = locate(ff.theta, theta)
    j0, j1, tj = locate(ff.omega, omega)
    A = ff.amplitudes
    return ((1 - ti) * (1 - tj) * A[i0, j0] + ti * (1 - tj) * A[i1, j0]
            + (1 - ti) * tj * A[i0, j1] + ti * tj * A[i1, j1])


Amplitude = Union[FarField, Callable]


def recover_fourier_band(source: Amplitude, band: BandSpec) -> FourierSamples:
    """qhat(xi) ~ -a(theta, omega)/c with lam (theta - omega) = xi, averaged over both eta senses.

    The scattered-wave integral of the exact relation is dropped.  A FarField
    source is interpolated bilinearly in both angles (error O(step^2)); a
    callable source is evaluated exactly at the required angles.
    """
    lam = band.lam
    if isinstance(source, FarField):
        if source.lam != lam:
            raise RangeError("far field and band use different frequencies")
        amp = lambda t, o: _interp_periodic(source, t, o)  # noqa: E731
    else:
        amp = source
    c = specfun.far_field_constant(lam)
    vals = np.empty(len(band.xi_nodes), dtype=complex)
    for k, xi in enumerate(band.xi_nodes):
        acc = 0.0
        for th, om in direction_pair(xi, lam):
            acc += complex(amp(_angle(th), _angle(om)))
        vals[k] = -0.5 * acc / c
    return FourierSamples(band.xi_nodes, vals, "born-far", lam, (2 - band.epsilon) * lam)


@dataclass
class StabilityRecord:
    lam: float
    lhs: float
    data_term: float
    remainder_term: float

    def __post_init__(self):
        for v in (self.lhs, self.data_term, self.remainder_term):
            if not (np.isfinite(v) and v >= 0):
                raise RangeError("stability record entries must be finite and nonnegative")

    @property
    def ratio(self):
        den = self.data_term + self.remainder_term
        return self.lhs / den if den > 0 else 0.0

    def row(self):
        return self.lam, self.lhs, self.data_term, self.remainder_term, self.ratio


def weighted_band_integral(diff: Potential, band: BandSpec) -> float:
    """int_{|xi| <= (2-eps) lam} <xi>^{-alpha} |qhat(xi)|^2 dxi on the band nodes."""
    vals = fourier_oracle(diff, band.xi_nodes).values
    rho2 = np.sum(band.xi_nodes ** 2, axis=1)
    terms = band.weights * (1 + rho2) ** (-0.5 * band.alpha) * np.abs(vals) ** 2
    return float(np.sum(np.sort(terms)))


def stability_record(q1: Potential, q2: Potential, lam: float, band: BandSpec,
                     ff_diff_norm_sq: float) -> StabilityRecord:
    diff = q1.minus(q2)
    lhs = weighted_band_integral(diff, band)
    return StabilityRecord(lam, lhs, lam**3 * ff_diff_norm_sq, diff.sup_norm() ** 2 / lam**2)
