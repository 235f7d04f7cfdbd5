"""Full-space scattering: Lippmann-Schwinger Nystrom solver, far fields,
scattering matrix, partial-wave oracle and the volume/far-field identity.

Convention: the total field solves (D^2 - lam^2 + q) u = 0, i.e.
Delta u + lam^2 u - q u = 0, and

    u + int G(x, y) q(y) u(y) dy = u_in,   G = (i/4) H0(lam |x - y|).

The scattering amplitude is a(theta, omega) = -c int q u e^{-i lam theta.y} dy
with c = specfun.far_field_constant(lam).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.fft as sfft
from scipy.sparse.linalg import LinearOperator, gmres

from . import parallel, radial, specfun
from .errors import GridMismatchError, RangeError, ResolutionError, SingularSystemError
from .numerics import AngularGrid, Potential, fourier_oracle, sample_on_grid

GMRES_RTOL = 1e-12
RESIDUAL_GATE = 1e-10
POINTS_PER_WAVELENGTH = 10


# -- kernel ----------------------------------------------------------------------


def cell_kernel_integral(lam, h):
    """int over the square cell [-h/2, h/2]^2 of (i/4) H0(lam |y|) dy.

    Polar coordinates about the centre; the radial integral is closed form,
    int_0^rho H0(lam r) r dr = rho H1(lam rho)/lam + 2i/(pi lam^2).
    """
    x, w = np.polynomial.legendre.leggauss(32)
    phi = 0.125 * math.pi * (x + 1)
    rho = 0.5 * h / np.cos(phi)
    inner = rho * specfun.hankel1(1, lam * rho) / lam + 2j / (math.pi * lam * lam)
    octant = 0.125 * math.pi * np.sum(w * inner)
    return 0.25j * 8.0 * octant


class GridOperator:
    """x -> x + K (q x) restricted to the support nodes, K applied by FFT."""

    def __init__(self, q: Potential, lam: float):
        if q.is_radial:
            raise RangeError("the Nystrom solver needs a grid potential")
        self.q, self.lam = q, lam
        n = q.values.shape[0]
        h = q.spacing
        self.n, self.h = n, h
        self.P = sfft.next_fast_len(2 * n - 1)
        d = np.arange(n) * h
        rr = np.hypot(d[:, None], d[None, :])
        rr[0, 0] = 1.0
        quad = 0.25j * h * h * specfun.hankel1(0, lam * rr.ravel()).reshape(n, n)
        quad[0, 0] = cell_kernel_integral(lam, h)
        ker = np.zeros((self.P, self.P), dtype=complex)
        ker[:n, :n] = quad
        ker[self.P - n + 1:, :n] = quad[1:][::-1]
        ker[:n, self.P - n + 1:] = quad[:, 1:][:, ::-1]
        ker[self.P - n + 1:, self.P - n + 1:] = quad[1:, 1:][::-1, ::-1]
        self.kernel_hat = sfft.fft2(ker, workers=parallel.workers())
        self.qv = np.asarray(q.values, dtype=float)
        self.support = np.flatnonzero(self.qv.ravel())
        self.q_support = self.qv.ravel()[self.support]

    def convolve(self, density):
        """K applied to a full-grid density (values already multiplied by q)."""
        pad = np.zeros((self.P, self.P), dtype=complex)
        pad[: self.n, : self.n] = density.reshape(self.n, self.n)
        out = sfft.ifft2(sfft.fft2(pad, workers=parallel.workers()) * self.kernel_hat,
                         workers=parallel.workers())
        return out[: self.n, : self.n].ravel()

    def _apply_support(self, x):
        full = np.zeros(self.n * self.n, dtype=complex)
        full[self.support] = self.q_support * x
        return x + self.convolve(full)[self.support]

    def solve(self, rhs_full):
        """Solve u + K q u = rhs; returns the full-grid u and the relative residual."""
        m = self.support.size
        if m == 0:
            return rhs_full.astype(complex), 0.0
        b = rhs_full[self.support]
        A = LinearOperator((m, m), matvec=self._apply_support, dtype=complex)
        x, info = gmres(A, b, rtol=GMRES_RTOL, atol=0.0, restart=200, maxiter=2000)
        res = float(np.linalg.norm(A.matvec(x) - b) / np.linalg.norm(b))
        if info != 0 or res > RESIDUAL_GATE:
            raise SingularSystemError(
                f"integral equation not solved to tolerance (info={info}, residual={res:.2e})", condition=None)
        full = np.zeros(self.n * self.n, dtype=complex)
        full[self.support] = self.q_support * x
        u = rhs_full - self.convolve(full)
        u[self.support] = x
        return u, res


def _check_resolution(q: Potential, lam):
    if q.spacing > 2 * math.pi / (POINTS_PER_WAVELENGTH * lam):
        raise ResolutionError(
            f"grid spacing {q.spacing:.4g} exceeds 2*pi/(10*lambda) = {2 * math.pi / (10 * lam):.4g}")


# -- total field -----------------------------------------------------------------


@dataclass
class TotalField:
    lam: float
    omega: float
    axis: np.ndarray
    phi: np.ndarray
    phi_in: np.ndarray
    residual: float
    weights_q: np.ndarray

    @property
    def phi_scat(self):
        return self.phi - self.phi_in

    def scat_l2_support(self):
        """||phi_scat||_{L2(supp q)} by the grid rule."""
        h = self.axis[1] - self.axis[0]
        mask = self.weights_q != 0
        return float(math.sqrt(h * h * np.sum(np.abs(self.phi_scat[mask]) ** 2)))


def _plane_wave(axis, lam, omega):
    X, Y = np.meshgrid(axis, axis, indexing="ij")
    return np.exp(1j * lam * (X * math.cos(omega) + Y * math.sin(omega)))


def solve_ls(q: Potential, lam: float, omega: float, operator: Optional[GridOperator] = None) -> TotalField:
    """Scattering solution for incident direction omega on the potential's grid."""
    if lam <= 0:
        raise RangeError("lambda must be > 0")
    _check_resolution(q, lam)
    op = operator or GridOperator(q, lam)
    inc = _plane_wave(q.axis, lam, omega)
    u, res = op.solve(inc.ravel())
    n = q.values.shape[0]
    return TotalField(lam, omega, q.axis, u.reshape(n, n), inc, res, np.asarray(q.values))


def solve_herglotz(q: Potential, lam: float, grid: AngularGrid, g, operator: Optional[GridOperator] = None):
    """Total field for the incident Herglotz wave sum_k w_k g_k e^{i lam x.omega_k}."""
    _check_resolution(q, lam)
    op = operator or GridOperator(q, lam)
    X, Y = np.meshgrid(q.axis, q.axis, indexing="ij")
    dirs = grid.directions
    inc = np.zeros_like(X, dtype=complex)
    for (c, s), wk, gk in zip(dirs, grid.weights, np.asarray(g)):
        if gk != 0:
            inc += wk * gk * np.exp(1j * lam * (X * c + Y * s))
    u, res = op.solve(inc.ravel())
    return u.reshape(X.shape), inc, res


# -- far field -------------------------------------------------------------------


@dataclass
class FarField:
    lam: float
    theta: AngularGrid
    omega: AngularGrid
    amplitudes: np.ndarray
    method: str = "nystrom"

    def rows(self):
        for i, t in enumerate(self.theta.nodes):
            for j, o in enumerate(self.omega.nodes):
                a = self.amplitudes[i, j]
                yield self.lam, t, o, a.real, a.imag

    def reciprocity_defect(self):
        """max |a(theta, omega) - a(-omega, -theta)| (requires theta grid == omega grid)."""
        if self.theta != self.omega:
            raise GridMismatchError("reciprocity needs identical theta and omega grids")
        p = self.theta.antipode
        A = self.amplitudes
        return float(np.max(np.abs(A - A[np.ix_(p, p)].T)))

    def operator_norm_sq(self):
        """||a||^2 over the angular product grid (trapezoid in both angles)."""
        W = np.outer(self.theta.weights, self.omega.weights)
        return float(np.sum(W * np.abs(self.amplitudes) ** 2))


def _radial_mode_coefficients(Q: Potential, lam: float):
    """s_n, n = 0..N, for a radial potential (exact ODE modes)."""
    R = Q.r_hi
    if R <= Q.r_lo:
        return np.zeros(1, dtype=complex)
    nmax = int(math.ceil(lam * R + 8 * (lam * R) ** (1 / 3) + 20))
    out = np.empty(nmax + 1, dtype=complex)
    for n in range(nmax + 1):
        out[n] = radial.scattering_coefficient(radial.solve_regular(Q, lam, n, r_end=R), lam)
    return out


def mode_far_field(s_coeffs, lam, theta: AngularGrid, omega: AngularGrid, method):
    """a(theta, omega) = sqrt(2/(pi lam)) e^{-i pi/4} sum_n s_|n| e^{in(theta - omega)}."""
    pref = math.sqrt(2 / (math.pi * lam)) * np.exp(-0.25j * math.pi)
    diff = theta.nodes[:, None] - omega.nodes[None, :]
    A = s_coeffs[0] * np.ones_like(diff, dtype=complex)
    for n in range(1, len(s_coeffs)):
        A += 2.0 * s_coeffs[n] * np.cos(n * diff)
    return FarField(lam, theta, omega, pref * A, method)


def far_field(q: Potential, lam: float, theta: AngularGrid, omega: AngularGrid,
              operator: Optional[GridOperator] = None) -> FarField:
    """Scattering amplitudes on the product grid.

    Grid potentials go through the Nystrom solver, one solve per incident
    direction.  Radial potentials use the exact mode expansion.
    """
    if q.is_radial:
        return mode_far_field(_radial_mode_coefficients(q, lam), lam, theta, omega, "modes")
    _check_resolution(q, lam)
    op = operator or GridOperator(q, lam)
    h = q.spacing
    X, Y = np.meshgrid(q.axis, q.axis, indexing="ij")
    sup = op.support
    xs, ys = X.ravel()[sup], Y.ravel()[sup]
    c = specfun.far_field_constant(lam)
    dirs_t = theta.directions
    E = np.exp(-1j * lam * (np.outer(dirs_t[:, 0], xs) + np.outer(dirs_t[:, 1], ys)))
    dens = np.empty((sup.size, omega.size), dtype=complex)
    for j, om in enumerate(omega.nodes):
        u, _ = op.solve(np.exp(1j * lam * (X * math.cos(om) + Y * math.sin(om))).ravel())
        dens[:, j] = op.q_support * u[sup]
    return FarField(lam, theta, omega, -c * h * h * (E @ dens), "nystrom")


def born_far_field(q: Potential, lam: float, theta, omega):
    """-c qhat(lam (theta - omega)); angles may be arrays of equal shape."""
    theta = np.asarray(theta, dtype=float)
    omega = np.asarray(omega, dtype=float)
    xi = lam * np.stack([np.cos(theta) - np.cos(omega), np.sin(theta) - np.sin(omega)], axis=-1)
    vals = fourier_oracle(q, xi.reshape(-1, 2)).values.reshape(theta.shape)
    out = -specfun.far_field_constant(lam) * vals
    return out.item() if out.ndim == 0 else out


def born_far_field_grid(q: Potential, lam, theta: AngularGrid, omega: AngularGrid) -> FarField:
    T, O = np.meshgrid(theta.nodes, omega.nodes, indexing="ij")
    return FarField(lam, theta, omega, born_far_field(q, lam, T, O), "born")


# -- scattering matrix -------------------------------------------------------


@dataclass
class ScatteringMatrixGrid:
    lam: float
    grid: AngularGrid
    matrix: np.ndarray

    def unitarity_defect(self):
        S = self.matrix
        return float(np.max(np.abs(S.conj().T @ S - np.eye(S.shape[0]))))

    def reciprocity_defect(self):
        """max |S^T - P S P| with P the direction reversal theta -> -theta."""
        p = self.grid.antipode
        S = self.matrix
        return float(np.max(np.abs(S.T - S[np.ix_(p, p)])))


def scattering_matrix(ff: FarField) -> ScatteringMatrixGrid:
    if ff.theta != ff.omega:
        raise GridMismatchError("scattering matrix needs identical theta and omega grids")
    k = specfun.smatrix_constant(ff.lam)
    S = np.eye(ff.theta.size, dtype=complex) + k * ff.amplitudes * ff.omega.weights[None, :]
    return ScatteringMatrixGrid(ff.lam, ff.theta, S)


# -- partial-wave oracle ------------------------------------------------------


def partial_wave_coefficients(q0: float, a: float, lam: float, nmax: Optional[int] = None):
    """s_n, n = 0..nmax, for q0 on [0, a]: exterior i^n (J_n + s_n H_n)."""
    if lam * lam <= q0:
        raise RangeError("partial-wave oracle needs lambda^2 > q0 (propagative interior)")
    if nmax is None:
        nmax = int(math.ceil(lam * a + 8 * (lam * a) ** (1 / 3) + 20))
    k = math.sqrt(lam * lam - q0)
    s = np.empty(nmax + 1, dtype=complex)
    for n in range(nmax + 1):
        jk, djk = specfun.bessel_j(n, k * a), specfun.bessel_j_prime(n, k * a)
        jl, djl = specfun.bessel_j(n, lam * a), specfun.bessel_j_prime(n, lam * a)
        hl, dhl = specfun.hankel1(n, lam * a), specfun.hankel1_prime(n, lam * a)
        s[n] = -(k * djk * jl - lam * jk * djl) / (k * djk * hl - lam * jk * dhl)
    return s


def partial_wave_origin_value(q0: float, a: float, lam: float) -> complex:
    """Total field at the origin for q0 on [0, a] (only n = 0 survives)."""
    k = math.sqrt(lam * lam - q0)
    jk, djk = specfun.bessel_j(0, k * a), specfun.bessel_j_prime(0, k * a)
    hl, dhl = specfun.hankel1(0, lam * a), specfun.hankel1_prime(0, lam * a)
    return -(2j / (math.pi * a)) / (k * djk * hl - lam * jk * dhl)


def partial_wave_oracle(q: Potential, lam: float, theta: AngularGrid, omega: AngularGrid) -> FarField:
    if not q.is_radial or q.label != "piecewise" or q.r_lo != 0.0:
        raise RangeError("partial-wave oracle expects a single radial layer q0 on [0, a]")
    q0, a = q.params["q0"], q.params["a"]
    return mode_far_field(partial_wave_coefficients(q0, a, lam), lam, theta, omega, "partial-wave")


# -- volume / far-field identity -----------------------------------------------


@dataclass
class IdentityRecord:
    lhs: complex
    rhs: complex
    spacing: float

    @property
    def residual(self):
        return abs(self.lhs - self.rhs)

    @property
    def relative(self):
        scale = abs(self.lhs) + abs(self.rhs)
        return self.residual / scale if scale > 0 else 0.0


def integral_identity_check(q1: Potential, q2: Potential, lam: float, g1, g2, grid: AngularGrid,
                            n_half: int) -> IdentityRecord:
    """Both sides of int (q1 - q2) u1 u2 = K int g2(-theta) ((A1 - A2) g1)(theta) dtheta.

    u_j is the Herglotz superposition with density g_j, solved on a grid with
    n_half cells per half-axis.  The right side uses the exact radial mode far
    fields, so the residual measures the Nystrom discretisation error.
    K = specfun.identity_constant(lam).
    """
    if not (q1.is_radial and q2.is_radial):
        raise RangeError("integral_identity_check expects radial potentials (grid sampled internally)")
    g1 = np.asarray(g1, dtype=complex)
    g2 = np.asarray(g2, dtype=complex)
    R = max(q1.r_hi, q2.r_hi, 1e-3)
    hw = R * n_half / (n_half - 2)
    p1 = sample_on_grid(q1, n_half, hw)
    p2 = sample_on_grid(q2, n_half, hw)
    h = p1.spacing
    u1, _, _ = solve_herglotz(p1, lam, grid, g1)
    u2, _, _ = solve_herglotz(p2, lam, grid, g2)
    lhs = complex(h * h * np.sum((p1.values - p2.values) * u1 * u2))
    A = far_field(q1, lam, grid, grid).amplitudes - far_field(q2, lam, grid, grid).amplitudes
    w = grid.weights
    g2_rev = g2[grid.antipode]
    rhs = complex(specfun.identity_constant(lam) * np.sum(w * g2_rev * (A @ (w * g1))))
    return IdentityRecord(lhs, rhs, h)


class ModeAmplitude:
    """Callable a(theta, omega) from radial mode coefficients (exact at any angles)."""

    def __init__(self, s_coeffs, lam):
        self.s = np.asarray(s_coeffs, dtype=complex)
        self.lam = lam
        self.pref = math.sqrt(2 / (math.pi * lam)) * np.exp(-0.25j * math.pi)

    def __call__(self, theta, omega):
        d = np.asarray(theta, dtype=float) - np.asarray(omega, dtype=float)
        n = np.arange(1, self.s.size)
        tot = self.s[0] + 2.0 * np.tensordot(np.cos(np.multiply.outer(d, n)), self.s[1:], axes=([-1], [0]))
        return self.pref * tot

    def grid(self, theta: AngularGrid, omega: AngularGrid) -> FarField:
        return mode_far_field(self.s, self.lam, theta, omega, "modes")

    @property
    def bandwidth(self):
        return self.s.size - 1


def mode_amplitude(q: Potential, lam: float) -> ModeAmplitude:
    if not q.is_radial:
        raise RangeError("mode amplitudes need a radial potential")
    return ModeAmplitude(_radial_mode_coefficients(q, lam), lam)
