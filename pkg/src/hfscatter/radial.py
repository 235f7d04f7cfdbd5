"""Regular solutions of the radial mode equation

    u'' + u'/r + (lam^2 - n^2/r^2 - Q(r)) u = 0

shared by the full-space partial-wave solver and the unit-disk Robin problem.

The solution is exactly a Bessel function on the potential-free (or constant)
core and is continued across the support by DOP853.  With u = r^n w the
integrated quantity w obeys w'' + (2n+1) w'/r + (lam^2 - Q) w = 0, which stays
O(1) across thin shells even for n >> lam; a running log-scale absorbs the
remaining growth.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from . import specfun
from .errors import RangeError, StiffnessError
from .numerics import Potential

ODE_RTOL = 2.5e-14   # just above the 100*eps floor solve_ivp accepts
SERIES_START = 1e-5


@dataclass
class _Segment:
    lo: float
    hi: float
    sol: object
    log_scale: float


@dataclass
class RegularSolution:
    """U(r) = exp(log_scale) * (u_end, du_end) at r = r_end, with U = J_n(k_core r) on the core."""

    n: int
    lam: float
    r_core: float
    k_core: float
    r_end: float
    u_end: float
    du_end: float
    log_scale: float
    segments: list = field(default_factory=list)

    @property
    def log_derivative(self):
        return self.du_end / self.u_end

    def values(self, r):
        """U(r), U'(r) on [0, r_end] divided by exp(log_scale)."""
        r = np.asarray(r, dtype=float)
        u = np.zeros_like(r)
        du = np.zeros_like(r)
        m = self.n
        core = r <= self.r_core
        if np.any(core & (r > 0)):
            rc = r[core & (r > 0)]
            x = self.k_core * rc
            la, sg = specfun.log_bessel_j_array(m, x)
            la1, sg1 = specfun.log_bessel_j_array(m + 1, x)
            j = sg * np.exp(la - self.log_scale)
            j1 = sg1 * np.exp(la1 - self.log_scale)
            u[core & (r > 0)] = j
            du[core & (r > 0)] = self.k_core * ((m / x) * j - j1)
        if np.any(core & (r == 0)):
            u[core & (r == 0)] = math.exp(-self.log_scale) if m == 0 else 0.0
            du[core & (r == 0)] = 0.5 * self.k_core * math.exp(-self.log_scale) if m == 1 else 0.0
        for seg in self.segments:
            sel = (r > seg.lo) & (r <= seg.hi) & ~core
            if not np.any(sel):
                continue
            rs = r[sel]
            w, dw = seg.sol(rs)
            with np.errstate(divide="ignore"):
                fac = np.exp(m * np.log(rs) + seg.log_scale - self.log_scale)
            u[sel] = fac * w
            du[sel] = fac * (dw + m * w / rs)
        return u, du


def _core(Q: Potential, lam, m):
    """Core radius and wavenumber on which Q is constant."""
    if Q.r_hi <= Q.r_lo:
        return None, lam
    if Q.r_lo > 0:
        return Q.r_lo, lam
    a, b = Q.intervals[0]
    probe = Q.profile(np.linspace(a, b, 65))
    qc = float(probe[0])
    if np.ptp(probe) <= 1e-14 * max(1.0, abs(qc)):
        r_core = b
    else:
        qc = float(Q.profile(np.array([0.0]))[0])
        r_core = SERIES_START
    k2 = lam * lam - qc
    if k2 <= 0:
        raise RangeError("evanescent core (lambda^2 <= Q(0)) is not supported")
    return r_core, math.sqrt(k2)


def solve_regular(Q: Potential, lam: float, n: int, r_end: float = 1.0, dense=False) -> RegularSolution:
    m = abs(int(n))
    if lam <= 0:
        raise RangeError("lambda must be > 0")
    r_core, k = _core(Q, lam, m)
    if r_core is None or r_core >= r_end:
        r_core = r_end
    x = k * r_core
    seq = specfun.bessel_j_log_sequence(m + 1, x)
    a, b, ref = seq.pair(m)
    # w = U / r^n,  w' = (U' - n U / r) / r^n = -k J_{n+1}(k r) / r^n
    w0 = np.array([a, -k * b])
    log_scale = ref - m * math.log(r_core)
    segments = []
    lo = r_core
    edges = (Q.r_lo, Q.r_hi) if Q.smooth else (Q.r_lo, *Q.breaks, Q.r_hi)
    cuts = sorted({c for c in edges if r_core < c < r_end} | {r_end})
    lam2 = lam * lam
    at = Q.at
    q_lo, q_hi = Q.r_lo, Q.r_hi

    def rhs(r, y):
        qv = at(r) if q_lo <= r <= q_hi else 0.0
        return [y[1], -(2 * m + 1) * y[1] / r - (lam2 - qv) * y[0]]

    y = w0
    for hi in cuts:
        if hi <= lo:
            continue
        s = max(abs(y[0]), abs(y[1]) / max(lam, m / hi, 1.0))
        y = y / s
        log_scale += math.log(s)
        sol = solve_ivp(rhs, (lo, hi), y, method="DOP853", rtol=ODE_RTOL, atol=1e-14 * ODE_RTOL,
                        dense_output=dense)
        if not sol.success:
            raise StiffnessError(f"radial integrator failed (n={m}, lambda={lam}): {sol.message}")
        if dense:
            segments.append(_Segment(lo, hi, sol.sol, log_scale))
        y = sol.y[:, -1]
        lo = hi
    # back to u = r^n w at r_end, renormalised to O(1)
    u_end = y[0]
    du_end = y[1] + m * y[0] / r_end
    log_scale += m * math.log(r_end)
    s = max(abs(u_end), abs(du_end) / max(lam, 1.0))
    out = RegularSolution(m, lam, r_core, k, r_end, u_end / s, du_end / s, log_scale + math.log(s))
    out.segments = segments
    return out


def robin_trace(sol: RegularSolution, lam):
    """mu = U(1) / (U'(1) - i lam U(1)) for a solution ending at r = 1."""
    return sol.u_end / (sol.du_end - 1j * lam * sol.u_end)


def scattering_coefficient(sol: RegularSolution, lam):
    """s_n with exterior i^n (J_n + s_n H_n) matched to U at r_end."""
    m, x = sol.n, lam * sol.r_end
    j, dj = specfun.bessel_j(m, x), specfun.bessel_j_prime(m, x)
    h, dh = specfun.hankel1(m, x), specfun.hankel1_prime(m, x)
    u, du = sol.u_end, sol.du_end
    return -(du * j - lam * u * dj) / (du * h - lam * u * dh)


def interior_amplitude(sol: RegularSolution, lam):
    """alpha with interior radial factor alpha * U (scaled), exterior J + s H."""
    m, x = sol.n, lam * sol.r_end
    h, dh = specfun.hankel1(m, x), specfun.hankel1_prime(m, x)
    return (2j / (math.pi * sol.r_end)) / (lam * sol.u_end * dh - sol.du_end * h)
