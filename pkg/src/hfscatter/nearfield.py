"""Robin problem on the unit disk for radial potentials.

Mode n with Robin data e^{in theta}:

    Delta u + lam^2 u - Q u = 0 in B,   (d_r - i lam) u = e^{in theta} on r = 1,

has u = u_n(r) e^{in theta} and the near-field operator N_q(lam) acts
diagonally, N_q e^{in theta} = mu_n e^{in theta}, mu_n = u_n(1).

For two potentials and Robin data f_1, f_2 the exact boundary identity is

    int_B (q1 - q2) u1 u2 dx = - int_{dB} f2 (N_q1 - N_q2) f1 dsigma.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from . import radial, specfun
from .errors import MismatchError, RangeError
from .numerics import AngularGrid, Potential, angular_fourier_coeffs

ROBIN_GATE = 1e-9


def default_nmax(lam):
    return int(math.ceil(12 * lam))


def _check_disk(Q: Potential):
    if not Q.is_radial:
        raise RangeError("near-field operators are only diagonal for radial potentials")
    if Q.r_hi > 1.0:
        raise RangeError("potential must be supported in the closed unit disk")


@dataclass
class RadialSolution:
    lam: float
    n: int
    mesh: np.ndarray
    u: np.ndarray
    trace: complex
    dtrace: complex
    _sol: object = None
    _den: complex = 1.0

    @property
    def robin_residual(self):
        return abs(self.dtrace - 1j * self.lam * self.trace - 1.0)

    def __call__(self, r):
        """u_n(r) (Robin normalised) at arbitrary radii."""
        if self._sol is None:
            return np.asarray(specfun_z(self.n, np.asarray(r, float), self.lam))
        U, _ = self._sol.values(np.asarray(r, float))
        return U / self._den


def specfun_z(n, r, lam):
    r = np.atleast_1d(r)
    return np.array([specfun.z_coeff(n, float(x), lam).value if x > 0 else
                     (specfun.z_coeff(n, 1e-300, lam).value if n == 0 else 0.0) for x in r])


def radial_solve(Q: Potential, lam: float, n: int, mesh=None) -> RadialSolution:
    """Mode solution normalised by the Robin condition (d_r - i lam) u_n(1) = 1."""
    _check_disk(Q)
    m = abs(int(n))
    mesh = np.linspace(0.0, 1.0, 201) if mesh is None else np.asarray(mesh, float)
    if Q.is_zero():
        trace = specfun.z_coeff(m, 1.0, lam).value
        dtrace = specfun.z_coeff_dr(m, 1.0, lam)
        return RadialSolution(lam, m, mesh, specfun_z(m, mesh, lam), trace, dtrace)
    sol = radial.solve_regular(Q, lam, m, r_end=1.0, dense=True)
    den = sol.du_end - 1j * lam * sol.u_end
    out = RadialSolution(lam, m, mesh, np.zeros(mesh.shape, complex), sol.u_end / den, sol.du_end / den,
                         sol, den)
    out.u = out(mesh)
    if out.robin_residual > ROBIN_GATE:
        raise RangeError(f"Robin normalisation failed for n={m}")
    return out


@dataclass
class NearFieldDiag:
    lam: float
    nmax: int
    mu_nonneg: np.ndarray

    def mu(self, n):
        return self.mu_nonneg[abs(int(n))]

    @property
    def orders(self):
        return np.arange(-self.nmax, self.nmax + 1)

    def full(self):
        """mu_n for n = -nmax..nmax."""
        return self.mu_nonneg[np.abs(self.orders)]

    def rows(self):
        for n in self.orders:
            v = self.mu(n)
            yield self.lam, int(n), v.real, v.imag


def near_field_diag(Q: Potential, lam: float, nmax: Optional[int] = None) -> NearFieldDiag:
    _check_disk(Q)
    nmax = default_nmax(lam) if nmax is None else int(nmax)
    if nmax < math.ceil(2 * lam):
        raise RangeError("nmax must be at least ceil(2 lambda)")
    if Q.is_zero():
        return NearFieldDiag(lam, nmax, specfun.z_coeff_sequence(nmax, 1.0, lam))
    mu = np.empty(nmax + 1, dtype=complex)
    for n in range(nmax + 1):
        mu[n] = radial.robin_trace(radial.solve_regular(Q, lam, n, r_end=1.0), lam)
    return NearFieldDiag(lam, nmax, mu)


@dataclass
class NormDiff:
    norm: float
    n_star: int
    tail: float


def operator_norm_diff(d1: NearFieldDiag, d2: NearFieldDiag) -> NormDiff:
    """sup_n |mu1_n - mu2_n| (exact L2 operator norm for diagonal operators) and the tail entry."""
    if d1.lam != d2.lam or d1.nmax != d2.nmax:
        raise MismatchError("near-field diagonals differ in lambda or nmax")
    diff = np.abs(d1.mu_nonneg - d2.mu_nonneg)
    k = int(np.argmax(diff))
    return NormDiff(float(diff[k]), k, float(diff[-1]))


# -- boundary identity -------------------------------------------------------


def _volume_nodes(Q1: Potential, Q2: Potential, per=48):
    diff = Q1.minus(Q2)
    if diff.r_hi <= diff.r_lo:
        return diff, np.zeros(0), np.zeros(0)
    r, w = diff.radial_quadrature(per, max_step=0.02)
    return diff, r, w


@dataclass
class GreenIdentityRecord:
    volume: complex
    boundary: complex

    @property
    def residual(self):
        return abs(self.volume - self.boundary)

    @property
    def relative(self):
        s = abs(self.volume) + abs(self.boundary)
        return self.residual / s if s > 0 else 0.0


def green_identity_residual(Q1: Potential, Q2: Potential, lam: float, n: int, m: int) -> GreenIdentityRecord:
    """Both sides for Robin data f1 = e^{in theta}, f2 = e^{-im theta}.

    volume   = int (Q1 - Q2) u1 u2 dx, the angular factor 2 pi delta_{nm} applied exactly;
    boundary = -int f2 (N1 - N2) f1 dsigma = -2 pi delta_{nm} (mu1_n - mu2_n).
    The two sides come from different computations: radial quadrature of the
    mode solutions versus their boundary traces.
    """
    if n != m:
        return GreenIdentityRecord(0j, 0j)
    s1 = radial_solve(Q1, lam, n)
    s2 = radial_solve(Q2, lam, m)
    diff, r, w = _volume_nodes(Q1, Q2)
    vol = 2 * math.pi * complex(np.sum(w * diff.profile(r) * s1(r) * s2(r) * r)) if r.size else 0j
    bnd = -2 * math.pi * (s1.trace - s2.trace)
    return GreenIdentityRecord(vol, bnd)


def v_norm(Q: Potential, lam: float, n: int) -> float:
    """||u_n e^{in theta} - z_n e^{in theta}||_{L2(B)}."""
    m = abs(int(n))
    sol = radial.solve_regular(Q, lam, m, r_end=1.0, dense=True)
    den = sol.du_end - 1j * lam * sol.u_end
    # core: Q = 0 there, u_n and z_n are both multiples of J_n(lam r)
    r_c = sol.r_core
    if sol.k_core != lam:
        raise RangeError("v_norm expects a potential-free core")
    outer = specfun.bessel_j_log_sequence(m + 1, lam)
    a, b, ref = outer.pair(m)
    dz = lam * ((m / lam) * a - b - 1j * a)          # z_n = J_n(lam r) e^{-ref} / dz
    x = lam * r_c
    inner = specfun.bessel_j_log_sequence(m + 1, x)
    ja, jb, jref = inner.pair(m)
    jp = (m / x) * ja - jb
    # int_0^rc J_n(lam r)^2 r dr = rc^2/2 [J'^2 + (1 - n^2/x^2) J^2], scaled by e^{2 jref}
    core_int = 0.5 * r_c * r_c * (jp * jp + (1 - (m / x) ** 2) * ja * ja)
    # u_n = J_n e^{-log_scale} / den and z_n = J_n e^{-ref} / dz on the core
    cu = math.exp(jref - sol.log_scale) / den
    cz = math.exp(jref - ref) / dz
    core = abs(cu - cz) ** 2 * max(core_int, 0.0)
    # shell: quadrature of |u_n - z_n|^2 r
    rq, wq = Q.radial_quadrature(48, max_step=0.01)
    if Q.r_hi < 1.0:
        x2, w2 = np.polynomial.legendre.leggauss(48)
        rq = np.concatenate([rq, 0.5 * (1 - Q.r_hi) * (x2 + 1) + Q.r_hi])
        wq = np.concatenate([wq, 0.5 * (1 - Q.r_hi) * w2])
    U, _ = sol.values(rq)
    la, sg = specfun.log_bessel_j_array(m, lam * rq)
    z = sg * np.exp(la - ref) / dz
    shell = float(np.sum(wq * np.abs(U / den - z) ** 2 * rq))
    return math.sqrt(2 * math.pi * (core + shell))


# -- plane-wave probing -----------------------------------------------------------


def _probe_order(lam):
    return int(math.ceil(lam + 10 * lam ** (1 / 3) + 20))


@lru_cache(maxsize=16)
def _robin_data_modes(Q: Potential, lam: float, nmax: int):
    """Robin data of the full-space scattering solution, radial factor per |n|, and mu_n."""
    R = np.empty(nmax + 1, dtype=complex)
    mu = np.empty(nmax + 1, dtype=complex)
    for n in range(nmax + 1):
        if Q.is_zero():
            j, dj = specfun.bessel_j(n, lam), specfun.bessel_j_prime(n, lam)
            R[n] = lam * dj - 1j * lam * j
            mu[n] = specfun.z_coeff(n, 1.0, lam).value
            continue
        sol = radial.solve_regular(Q, lam, n, r_end=1.0)
        alpha = radial.interior_amplitude(sol, lam)
        R[n] = alpha * (sol.du_end - 1j * lam * sol.u_end)
        mu[n] = radial.robin_trace(sol, lam)
    return R, mu


@dataclass
class ProbeRecord:
    lam: float
    xi: np.ndarray
    estimate: complex
    theta1: float
    theta2: float


def probe_fourier_nearfield(Q1: Potential, Q2: Potential, lam: float, xi) -> ProbeRecord:
    """qhat(xi) of q1 - q2 from the boundary pairing of two scattering solutions.

    u_j = phi_{q_j}(., theta_j) with theta_1 + theta_2 = -xi/lam, so that
    int q e^{i lam x.(theta_1 + theta_2)} = qhat(xi).  The estimate is
    -int f2 (N1 - N2) f1 dsigma; the scattered-wave volume terms are dropped.
    The full-space fields are the exact partial-wave solutions of the forward
    module; their Robin traces are expanded with angular_fourier_coeffs.
    """
    _check_disk(Q1)
    _check_disk(Q2)
    xi = np.asarray(xi, dtype=float)
    rho = float(np.hypot(*xi))
    if rho > 2 * lam:
        raise RangeError("probe frequency must satisfy |xi| <= 2 lambda")
    # theta_1 + theta_2 = -xi/lam: symmetric about -xi/|xi|
    base = math.atan2(-xi[1], -xi[0]) if rho > 0 else 0.0
    half = math.acos(min(1.0, rho / (2 * lam)))
    t1, t2 = base + half, base - half
    nmax = _probe_order(lam)
    R1, mu1 = _robin_data_modes(Q1, lam, nmax)
    R2, mu2 = _robin_data_modes(Q2, lam, nmax)
    grid = AngularGrid(2 * nmax + 2)
    ns = np.arange(-nmax, nmax + 1)
    th = grid.nodes

    def robin_samples(R, omega):
        coef = (1j ** np.abs(ns)) * np.exp(-1j * ns * omega) * R[np.abs(ns)]
        return np.exp(1j * np.outer(th, ns)) @ coef

    a = angular_fourier_coeffs(robin_samples(R1, t1), nmax, grid) / (2 * math.pi)
    b = angular_fourier_coeffs(robin_samples(R2, t2), nmax, grid) / (2 * math.pi)
    dmu = (mu1 - mu2)[np.abs(ns)]
    est = -2 * math.pi * complex(np.sum(b[::-1] * dmu * a))
    return ProbeRecord(lam, xi, est, t1, t2)


def probe_stability_record(Q1: Potential, Q2: Potential, lam: float, d1: Optional[NearFieldDiag] = None,
                           d2: Optional[NearFieldDiag] = None, data_power: int = 0, n_radial=48, n_angle=96):
    """Band functional for near-field data:
    lhs = int_{|xi| <= 2 lam} |qhat1 - qhat2|^2, data = lam^data_power |N1 - N2|^2,
    remainder = lam^-2 |q1 - q2|_inf^2.

    data_power = 0 is the functional as usually stated; data_power = 4 accounts
    for the Robin data of plane waves having size ~lam on the boundary.
    """
    from .borninv import StabilityRecord
    from .numerics import fourier_oracle, polar_band_nodes

    d1 = d1 or near_field_diag(Q1, lam)
    d2 = d2 or near_field_diag(Q2, lam)
    diff = Q1.minus(Q2)
    xis, w = polar_band_nodes(2 * lam, n_radial, n_angle)
    vals = fourier_oracle(diff, xis).values if diff.r_hi > diff.r_lo else np.zeros(len(xis))
    lhs = float(np.sum(np.sort(w * np.abs(vals) ** 2)))
    data = lam**data_power * operator_norm_diff(d1, d2).norm ** 2
    rem = diff.sup_norm() ** 2 / lam**2
    return StabilityRecord(lam, lhs, data, rem)
