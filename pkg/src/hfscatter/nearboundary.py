"""Potentials supported near the boundary of the unit disk: mode measurements,
the Laplace-transform bound and the monotone-case Fourier bound."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import specfun
from .borninv import StabilityRecord
from .errors import MonotonicityError, RangeError, ThresholdError
from .nearfield import NearFieldDiag, operator_norm_diff, radial_solve, v_norm
from .numerics import FourierSamples, Potential, fourier_oracle, laplace_oracle, polar_band_nodes


@dataclass(frozen=True)
class NearBoundaryConfig:
    kappa: float = 2.0
    big_k: float = 2.0
    lambda0: float = 10.0
    zeta0: Optional[float] = None

    def __post_init__(self):
        if self.kappa <= 0 or self.big_k < 1 or self.lambda0 <= 0:
            raise RangeError("need kappa > 0, K >= 1, lambda0 > 0")
        if self.zeta0 is None:
            object.__setattr__(self, "zeta0", 3.0 * self.big_k * self.lambda0)

    def shell(self, lam):
        return 1.0 - self.kappa / lam, 1.0

    def check_support(self, Q: Potential, lam):
        lo, _ = self.shell(lam)
        if Q.r_hi > Q.r_lo and (Q.r_lo < lo or Q.r_hi > 1.0):
            raise RangeError(f"support [{Q.r_lo:.4g}, {Q.r_hi:.4g}] not inside the shell ({lo:.4g}, 1)")

    def mode_threshold(self, lam):
        return int(math.ceil(self.big_k * lam))


def pair_constant(Q1: Potential, Q2: Potential):
    """C_{q1,q2} = max(|q1|_inf, |q2|_inf, |q1|_inf |q2|_inf)."""
    a, b = Q1.sup_norm(), Q2.sup_norm()
    return max(a, b, a * b)


@dataclass
class ModeMeasurement:
    n: int
    m: int
    boundary_value: complex
    volume_value: complex
    bound: float

    @property
    def residual(self):
        return abs(self.boundary_value - self.volume_value)


def _z_weighted_norm(diff: Potential, lam, n):
    """||(q1 - q2) z_n e^{in theta}||_{L2(B)} by radial Gauss-Legendre."""
    r, w = diff.radial_quadrature(48, max_step=0.01)
    la, sg = specfun.log_bessel_j_array(n, lam * r)
    z0 = specfun.z_coeff(n, 1.0, lam)
    # z_n(r) = J_n(lam r) / D with |D| = |J_n(lam)| / |z_n(1)|
    logD = specfun.log_bessel_j(n, lam)[0] - z0.log_abs
    zabs = np.exp(la - logD)
    return math.sqrt(2 * math.pi * float(np.sum(w * (diff.profile(r) * zabs) ** 2 * r)))


def _z_product_integral(diff: Potential, lam, n, m):
    r, w = diff.radial_quadrature(48, max_step=0.01)
    zn = _z_on(r, n, lam)
    zm = zn if m == n else _z_on(r, m, lam)
    return 2 * math.pi * complex(np.sum(w * diff.profile(r) * zn * zm * r))


def _z_on(r, n, lam):
    outer = specfun.bessel_j_log_sequence(n + 1, lam)
    a, b, ref = outer.pair(n)
    dz = lam * ((n / lam) * a - b - 1j * a)
    la, sg = specfun.log_bessel_j_array(n, lam * r)
    return sg * np.exp(la - ref) / dz


def mode_measurement(d1: NearFieldDiag, d2: NearFieldDiag, Q1: Potential, Q2: Potential,
                     cfg: NearBoundaryConfig, n: int, m: int) -> ModeMeasurement:
    """Boundary pairing of the modes n, -m against its leading z_n z_m volume term.

    boundary_value = -int (N1 - N2) e^{in theta} e^{-im theta} dtheta, which by
    the exact boundary identity equals int (q1 - q2) u1 u2 dx, and
    volume_value = 2 pi delta_{nm} int (Q1 - Q2) z_n z_m r dr.  The difference
    is bounded by Cauchy-Schwarz on the three v-terms,
    ||(q1-q2) z_n|| ||v2_m|| + ||(q1-q2) z_m|| ||v1_n|| + |q1-q2|_inf ||v1_n|| ||v2_m||.
    """
    lam = d1.lam
    k = cfg.mode_threshold(lam)
    if n < k or m < k:
        raise ThresholdError(f"modes (n={n}, m={m}) below K*lambda = {k}")
    if lam < cfg.lambda0:
        raise ThresholdError(f"lambda={lam} below lambda0={cfg.lambda0}")
    if n != m:
        return ModeMeasurement(n, m, 0j, 0j, 0.0)
    bnd = -2 * math.pi * (d1.mu(n) - d2.mu(n))
    diff = Q1.minus(Q2)
    if diff.r_hi <= diff.r_lo:
        return ModeMeasurement(n, m, bnd, 0j, 0.0)
    vol = _z_product_integral(diff, lam, n, m)
    v1 = 0.0 if Q1.is_zero() else v_norm(Q1, lam, n)
    v2 = 0.0 if Q2.is_zero() else v_norm(Q2, lam, m)
    zn = _z_weighted_norm(diff, lam, n)
    zm = zn if m == n else _z_weighted_norm(diff, lam, m)
    bound = zn * v2 + zm * v1 + diff.sup_norm() * v1 * v2
    return ModeMeasurement(n, m, bnd, vol, bound)


@dataclass
class LaplaceRecord:
    lam: float
    t: float
    n: int
    m: int
    laplace_value: float
    nearfield_term: float
    remainder_term: float

    @property
    def ratio(self):
        den = self.nearfield_term + self.remainder_term
        return self.laplace_value / den if den > 0 else 0.0

    def row(self):
        return self.lam, self.t, self.laplace_value, self.nearfield_term, self.remainder_term, self.ratio


def t_realization(t):
    """(n, m) with n + m = t: n = m = t/2 for even t, ((t-1)/2, (t+1)/2) for odd t."""
    t = int(round(t))
    return (t // 2, t // 2) if t % 2 == 0 else ((t - 1) // 2, (t + 1) // 2)


def laplace_bound_check(d1: NearFieldDiag, d2: NearFieldDiag, Q1: Potential, Q2: Potential,
                        cfg: NearBoundaryConfig, t: float) -> LaplaceRecord:
    lam = d1.lam
    if t < 2 * cfg.big_k * lam:
        raise ThresholdError(f"t={t} below 2*K*lambda = {2 * cfg.big_k * lam}")
    for Q in (Q1, Q2):
        cfg.check_support(Q, lam)
    diff = Q1.minus(Q2)
    lap = 2 * math.pi * laplace_oracle(diff, t) if diff.r_hi > diff.r_lo else 0.0
    nf = lam**2 * operator_norm_diff(d1, d2).norm
    rem = pair_constant(Q1, Q2) / lam**2 * diff.sup_norm()
    n, m = t_realization(t)
    return LaplaceRecord(lam, t, n, m, abs(lap), nf, rem)


def _check_monotone(Qdiff: Potential):
    if Qdiff.r_hi > Qdiff.r_lo:
        r = Qdiff.mesh(20001)
        if np.min(Qdiff.profile(r)) < -1e-12:
            raise MonotonicityError("potential difference is negative somewhere (q1 >= q2 violated)")


@dataclass
class MonotoneBound:
    bound: float
    samples: FourierSamples
    oracle: np.ndarray

    @property
    def holds(self):
        return bool(np.all(np.abs(self.oracle) <= self.bound))

    @property
    def slack(self):
        """bound / max |qhat| over the sampled nodes."""
        top = float(np.max(np.abs(self.oracle), initial=0.0))
        return self.bound / top if top > 0 else math.inf


def monotone_fourier_bound(Qdiff: Potential, cfg: NearBoundaryConfig, lam: float, xis) -> MonotoneBound:
    """|qhat(xi)| <= 2 pi e^{zeta0 kappa/lam} L(T(r Q))(zeta0), for every xi."""
    _check_monotone(Qdiff)
    cfg.check_support(Qdiff, lam)
    xis = np.atleast_2d(np.asarray(xis, float))
    L = laplace_oracle(Qdiff, cfg.zeta0) if Qdiff.r_hi > Qdiff.r_lo else 0.0
    bound = 2 * math.pi * math.exp(cfg.zeta0 * cfg.kappa / lam) * L
    oracle = fourier_oracle(Qdiff, xis).values
    samples = FourierSamples(xis, np.full(len(xis), bound, dtype=complex), "laplace-monotone-bound", lam)
    return MonotoneBound(bound, samples, oracle)


def theorem_disk_record(Q1: Potential, Q2: Potential, cfg: NearBoundaryConfig, lam: float, big_k_of_lam: float,
                        d1: Optional[NearFieldDiag] = None, d2: Optional[NearFieldDiag] = None,
                        n_radial=48, n_angle=96) -> StabilityRecord:
    """lhs = int_{|xi| <= K(lam)} |qhat1 - qhat2|^2; data = K^2 lam^4 |N1 - N2|^2;
    remainder = K^2 C_{q1,q2}^2 lam^-4 |q1 - q2|_inf^2."""
    from .nearfield import near_field_diag

    if big_k_of_lam < lam:
        raise ThresholdError("K(lambda) must be >= lambda")
    diff = Q1.minus(Q2)
    _check_monotone(diff)
    for Q in (Q1, Q2):
        cfg.check_support(Q, lam)
    d1 = d1 or near_field_diag(Q1, lam)
    d2 = d2 or near_field_diag(Q2, lam)
    xis, w = polar_band_nodes(big_k_of_lam, n_radial, n_angle)
    vals = fourier_oracle(diff, xis).values if diff.r_hi > diff.r_lo else np.zeros(len(xis))
    lhs = float(np.sum(np.sort(w * np.abs(vals) ** 2)))
    K2 = big_k_of_lam**2
    data = K2 * lam**4 * operator_norm_diff(d1, d2).norm ** 2
    rem = K2 * pair_constant(Q1, Q2) ** 2 / lam**4 * diff.sup_norm() ** 2
    return StabilityRecord(lam, lhs, data, rem)


def v_norm_profile(Q: Potential, lam: float, orders):
    """||v_n||_{L2(B)} for each requested order."""
    return np.array([v_norm(Q, lam, n) for n in orders])


def robin_check(Q: Potential, lam: float, n: int) -> float:
    return radial_solve(Q, lam, n).robin_residual
