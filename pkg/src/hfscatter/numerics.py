"""Potentials, angular grids and direct-quadrature transform oracles.

Fourier convention, fixed for the whole package:

    qhat(xi) = int q(x) exp(-i xi . x) dx.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import integrate
from scipy.interpolate import PchipInterpolator

from . import specfun
from .errors import RangeError, ResolutionError

XI_LIMIT = 1.0e3

RADIAL = "radial"
GRID = "grid"


# -- potentials --------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Potential:
    """A compactly supported real potential.

    Radial kind: ``profile(r)`` vectorised, supported on ``[r_lo, r_hi]`` with
    interior breakpoints ``breaks`` where the profile may jump or kink.
    Grid kind: ``values`` on the uniform (2N+1)^2 grid over ``[-half_width, half_width]^2``.
    """

    kind: str
    support_radius: float
    bound_m: float
    profile: Optional[Callable] = None
    r_lo: float = 0.0
    r_hi: float = 0.0
    breaks: tuple = ()
    smooth: bool = True
    values: Optional[np.ndarray] = None
    half_width: float = 0.0
    label: str = "custom"
    params: dict = field(default_factory=dict)
    scalar: Optional[Callable] = None

    def __post_init__(self):
        if self.kind == RADIAL:
            if not (0.0 <= self.r_lo <= self.r_hi):
                raise RangeError("radial support must satisfy 0 <= r_lo <= r_hi")
            r = self.mesh(4001)
            v = np.asarray(self.profile(r), dtype=float)
            if not np.all(np.isfinite(v)):
                raise RangeError("radial profile is not finite on its support")
            if np.max(np.abs(v), initial=0.0) > self.bound_m * (1 + 1e-12) + 1e-300:
                raise RangeError("profile exceeds declared bound M")
        elif self.kind == GRID:
            vals = self.values
            if vals is None or vals.ndim != 2 or vals.shape[0] != vals.shape[1] or vals.shape[0] % 2 == 0:
                raise RangeError("grid potential needs a (2N+1)x(2N+1) array")
            if np.iscomplexobj(vals) or not np.all(np.isfinite(vals)):
                raise RangeError("grid values must be real and finite")
            x1 = self.axis
            rr = np.hypot(x1[:, None], x1[None, :])
            if np.any(vals[rr > self.support_radius] != 0.0):
                raise RangeError("grid values do not vanish outside the declared support")
            if np.max(np.abs(vals), initial=0.0) > self.bound_m:
                raise RangeError("grid values exceed declared bound M")
            vals.setflags(write=False)
        else:
            raise RangeError(f"unknown potential kind {self.kind!r}")

    # radial helpers
    def at(self, r: float) -> float:
        """Q(r) for a float r inside the support (fast path for integrators)."""
        if self.scalar is not None:
            return self.scalar(r)
        return float(self.profile(np.array([r]))[0])

    @property
    def is_radial(self):
        return self.kind == RADIAL

    @property
    def intervals(self):
        pts = [self.r_lo, *sorted(b for b in self.breaks if self.r_lo < b < self.r_hi), self.r_hi]
        return [(a, b) for a, b in zip(pts[:-1], pts[1:]) if b > a]

    def mesh(self, n):
        if self.r_hi <= self.r_lo:
            return np.array([self.r_lo])
        return np.linspace(self.r_lo, self.r_hi, n)

    def __call__(self, r):
        """Q(r), zero outside the support (radial kind only)."""
        if not self.is_radial:
            raise RangeError("pointwise profile is only defined for radial potentials")
        r = np.asarray(r, dtype=float)
        inside = (r >= self.r_lo) & (r <= self.r_hi)
        out = np.zeros_like(r)
        if np.any(inside):
            out[inside] = self.profile(r[inside])
        return out

    def radial_quadrature(self, per_interval=64, max_step=None):
        """Gauss-Legendre nodes and weights for dr over the support."""
        x, w = np.polynomial.legendre.leggauss(per_interval)
        rs, ws = [], []
        for a, b in self.intervals:
            pieces = 1 if max_step is None else max(1, int(math.ceil((b - a) / max_step)))
            edges = np.linspace(a, b, pieces + 1)
            for lo, hi in zip(edges[:-1], edges[1:]):
                rs.append(0.5 * (hi - lo) * x + 0.5 * (hi + lo))
                ws.append(0.5 * (hi - lo) * w)
        if not rs:
            return np.zeros(0), np.zeros(0)
        return np.concatenate(rs), np.concatenate(ws)

    # grid helpers
    @property
    def n_half(self):
        return (self.values.shape[0] - 1) // 2

    @property
    def spacing(self):
        return self.half_width / self.n_half

    @property
    def axis(self):
        n = (self.values.shape[0] - 1) // 2
        return np.linspace(-self.half_width, self.half_width, 2 * n + 1)

    # norms
    def sup_norm(self):
        if self.is_radial:
            r = self.mesh(20001)
            return float(np.max(np.abs(self.profile(r)), initial=0.0))
        return float(np.max(np.abs(self.values), initial=0.0))

    def l1_norm(self):
        return self._lp(1)

    def l2_norm(self):
        return math.sqrt(self._lp(2))

    def _lp(self, p):
        if self.is_radial:
            r, w = self.radial_quadrature(64, max_step=0.05)
            return float(2 * math.pi * np.sum(w * np.abs(self.profile(r)) ** p * r))
        return float(self.spacing**2 * np.sum(np.abs(self.values) ** p))

    def is_zero(self):
        return self.sup_norm() == 0.0

    # algebra (radial kind)
    def scaled(self, t):
        if not self.is_radial:
            return grid_potential(t * self.values, self.half_width, self.support_radius, label=f"{t}*{self.label}")
        prof, sc = self.profile, self.scalar
        return Potential(RADIAL, self.support_radius, abs(t) * self.bound_m, lambda r: t * prof(r),
                         self.r_lo, self.r_hi, self.breaks, self.smooth, label=f"{t}*{self.label}",
                         scalar=None if sc is None else (lambda r: t * sc(r)))

    def minus(self, other: "Potential") -> "Potential":
        """Pointwise difference self - other, same kind."""
        if self.kind != other.kind:
            raise RangeError("cannot subtract potentials of different kinds")
        if not self.is_radial:
            if self.values.shape != other.values.shape or self.half_width != other.half_width:
                raise RangeError("grid potentials live on different grids")
            return grid_potential(self.values - other.values, self.half_width,
                                  max(self.support_radius, other.support_radius),
                                  label=f"{self.label}-{other.label}")
        parts = [p for p in (self, other) if p.r_hi > p.r_lo]
        if not parts:
            return zero_radial()
        lo = min(p.r_lo for p in parts)
        hi = max(p.r_hi for p in parts)
        brk = sorted({b for p in parts for b in (*p.breaks, p.r_lo, p.r_hi)} - {lo, hi})
        a, b = self, other

        def prof(r):
            return a(r) - b(r)

        def scalar(r):
            return ((a.at(r) if a.r_lo <= r <= a.r_hi else 0.0)
                    - (b.at(r) if b.r_lo <= r <= b.r_hi else 0.0))

        sup = float(np.max(np.abs(prof(np.linspace(lo, hi, 20001)))))
        for edge in brk:
            sup = max(sup, float(np.max(np.abs(prof(np.array([edge * (1 - 1e-15), edge, edge * (1 + 1e-15)]))))))
        return Potential(RADIAL, hi, sup, prof, lo, hi, tuple(brk), a.smooth and b.smooth,
                         label=f"{a.label}-{b.label}", scalar=scalar)


def zero_radial():
    return Potential(RADIAL, 0.0, 0.0, lambda r: np.zeros_like(np.asarray(r, dtype=float)), 0.0, 0.0,
                     label="zero")


def grid_potential(values, half_width, support_radius, label="grid"):
    vals = np.array(values, dtype=float)
    return Potential(GRID, float(support_radius), float(np.max(np.abs(vals), initial=0.0)),
                     values=vals, half_width=float(half_width), label=label)


# -- builtin families ----------------------------------------------------------


def piecewise_constant(q0, a, inner=0.0):
    """q0 on [inner, a], zero elsewhere."""
    if not 0 <= inner < a:
        raise RangeError("piecewise-constant layer needs 0 <= inner < a")
    q0 = float(q0)
    return Potential(RADIAL, float(a), abs(q0), lambda r: np.full_like(np.asarray(r, dtype=float), q0),
                     float(inner), float(a), smooth=False, label="piecewise",
                     params={"q0": q0, "a": a, "inner": inner})


def _bump_shape(s):
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    m = np.abs(s) < 1.0
    out[m] = np.exp(1.0 - 1.0 / (1.0 - s[m] ** 2))
    return out


def smooth_bump(amplitude, r_hi, r_lo=None):
    """amplitude * exp(1 - 1/(1 - s^2)), s the affine map of [r_lo, r_hi] onto [-1, 1].

    ``r_lo`` defaults to ``-r_hi``, which centres the bump at the origin.
    """
    r_hi = float(r_hi)
    r_lo = -r_hi if r_lo is None else float(r_lo)
    if not r_lo < r_hi:
        raise RangeError("bump interval is empty")
    c, hw = 0.5 * (r_lo + r_hi), 0.5 * (r_hi - r_lo)
    amp = float(amplitude)

    def prof(r):
        return amp * _bump_shape((np.asarray(r, dtype=float) - c) / hw)

    def scalar(r):
        s = (r - c) / hw
        return amp * math.exp(1.0 - 1.0 / (1.0 - s * s)) if abs(s) < 1.0 else 0.0

    lo = max(r_lo, 0.0)
    brk = (c,) if lo < c < r_hi else ()
    return Potential(RADIAL, r_hi, abs(amp), prof, lo, r_hi, brk, True, label="bump",
                     params={"amplitude": amp, "r_lo": r_lo, "r_hi": r_hi}, scalar=scalar)


def near_boundary_bump(kappa, lam, amplitude=1.0):
    """Bump supported in the shell 1 - kappa/lam < r < 1."""
    r_lo = 1.0 - kappa / lam
    if r_lo <= 0:
        raise RangeError("near-boundary shell escapes the unit disk (kappa >= lambda)")
    p = smooth_bump(amplitude, 1.0, r_lo)
    return Potential(RADIAL, 1.0, p.bound_m, p.profile, p.r_lo, p.r_hi, p.breaks, True,
                     label="near-boundary", params={"kappa": kappa, "lambda": lam, "amplitude": amplitude},
                     scalar=p.scalar)


def tabulated_profile(r_nodes, q_nodes, label="tabulated"):
    """Monotone cubic (PCHIP) interpolation of sampled Q; no extrapolation."""
    r = np.asarray(r_nodes, dtype=float)
    q = np.asarray(q_nodes, dtype=float)
    if r.ndim != 1 or r.shape != q.shape or r.size < 2 or np.any(np.diff(r) <= 0):
        raise RangeError("tabulated profile needs strictly increasing nodes")
    if r[0] < 0 or r[-1] > 1:
        raise RangeError("tabulated profile must lie in [0, 1]")
    interp = PchipInterpolator(r, q, extrapolate=False)
    return Potential(RADIAL, float(r[-1]), float(np.max(np.abs(q))), lambda x: interp(x),
                     float(r[0]), float(r[-1]), tuple(r[1:-1]), True, label=label)


def _disk_cell_fraction(x1, h, r_in, r_out, sub):
    """Fraction of each square cell inside the annulus r_in <= |x| <= r_out."""
    n = x1.size
    X, Y = np.meshgrid(x1, x1, indexing="ij")
    rc = np.hypot(X, Y)
    half_diag = h / math.sqrt(2.0)
    frac = ((rc >= r_in) & (rc <= r_out)).astype(float)
    edge = (np.abs(rc - r_out) < half_diag) | ((r_in > 0) & (np.abs(rc - r_in) < half_diag))
    offs = (np.arange(sub) + 0.5) / sub - 0.5
    ox, oy = np.meshgrid(offs * h, offs * h, indexing="ij")
    idx = np.argwhere(edge)
    for i, j in idx:
        rr = np.hypot(x1[i] + ox, x1[j] + oy)
        frac[i, j] = np.mean((rr >= r_in) & (rr <= r_out))
    assert frac.shape == (n, n)
    return frac


def sample_on_grid(q: Potential, n_half, half_width=None, sub=64):
    """Grid-kind sample of a radial potential on a (2 n_half + 1)^2 grid.

    Smooth profiles are point sampled.  Profiles with jumps are sampled by cell
    averages (area fractions for the constant pieces) so that the interface
    position is not quantised to the grid.
    """
    if not q.is_radial:
        raise RangeError("sample_on_grid expects a radial potential")
    R = q.r_hi if q.r_hi > 0 else 1.0
    if half_width is None:
        half_width = R * n_half / (n_half - 2)
    x1 = np.linspace(-half_width, half_width, 2 * n_half + 1)
    h = x1[1] - x1[0]
    X, Y = np.meshgrid(x1, x1, indexing="ij")
    rr = np.hypot(X, Y)
    if q.smooth:
        vals = q(rr)
        support = q.r_hi
    else:
        vals = np.zeros_like(rr)
        for a, b in q.intervals:
            mid = 0.5 * (a + b)
            level = float(q(np.array([mid]))[0])
            if np.ptp(q(np.linspace(a, b, 65))) > 1e-14 * max(1.0, abs(level)):
                raise RangeError("cell averaging only supports piecewise-constant jump profiles")
            vals += level * _disk_cell_fraction(x1, h, a, b, sub)
        support = q.r_hi + h / math.sqrt(2.0)
        vals[rr > support] = 0.0
    if support > half_width:
        raise RangeError("grid box does not contain the support")
    return grid_potential(vals, half_width, support, label=f"grid({q.label})")


def builtin_potentials(name, **params) -> Potential:
    """Factory for the named families used by the configuration files."""
    name = name.replace("_", "-").lower()
    if name == "zero":
        return zero_radial()
    if name == "piecewise":
        return piecewise_constant(params.get("q0", 1.0), params.get("a", 0.5), params.get("inner", 0.0))
    if name == "bump":
        return smooth_bump(params.get("amplitude", 1.0), params.get("r_hi", params.get("a", 0.5)),
                           params.get("r_lo"))
    if name == "near-boundary":
        return near_boundary_bump(params["kappa"], params["lambda"], params.get("amplitude", 1.0))
    if name == "grid":
        base = builtin_potentials(**params["base"])
        return sample_on_grid(base, int(params["n_half"]), params.get("half_width"))
    raise RangeError(f"unknown potential family {name!r}")


# -- angular grids ------------------------------------------------------------


@dataclass(frozen=True)
class AngularGrid:
    size: int

    def __post_init__(self):
        if self.size < 8 or self.size % 2:
            raise RangeError("angular grid size must be an even integer >= 8")

    @property
    def nodes(self):
        return 2.0 * math.pi * np.arange(self.size) / self.size

    @property
    def weights(self):
        return np.full(self.size, 2.0 * math.pi / self.size)

    @property
    def directions(self):
        t = self.nodes
        return np.stack([np.cos(t), np.sin(t)], axis=-1)

    @property
    def antipode(self):
        """Index of -theta_i (the direction reversed)."""
        return (np.arange(self.size) + self.size // 2) % self.size

    @property
    def reflection(self):
        """Index of the node at angle -theta_i."""
        return (-np.arange(self.size)) % self.size


def angular_fourier_coeffs(samples, k_max, grid: Optional[AngularGrid] = None):
    """c_k = int f e^{-ik theta} dtheta for |k| <= k_max, trapezoid rule.

    Returns an array indexed by k + k_max.
    """
    f = np.asarray(samples)
    grid = grid or AngularGrid(f.shape[-1])
    if f.shape[-1] != grid.size:
        raise RangeError("samples do not match the angular grid")
    if k_max > grid.size // 2 - 1:
        raise RangeError(f"k_max={k_max} aliases on a {grid.size}-point grid")
    ks = np.arange(-k_max, k_max + 1)
    E = np.exp(-1j * np.outer(grid.nodes, ks))
    return (f * grid.weights) @ E


# -- oracles ---------------------------------------------------------------------


@dataclass
class FourierSamples:
    xis: np.ndarray
    values: np.ndarray
    method: str
    lam: Optional[float] = None
    band_limit: Optional[float] = None

    def hermitian_defect(self):
        """max |value(-xi) - conj(value(xi))| over nodes whose negative is present."""
        key = {tuple(np.round(x, 12)): v for x, v in zip(self.xis, self.values)}
        worst = 0.0
        for x, v in zip(self.xis, self.values):
            w = key.get(tuple(np.round(-x, 12)))
            if w is not None:
                worst = max(worst, abs(w - np.conj(v)))
        return worst

    def rows(self):
        for (x, y), v in zip(self.xis, self.values):
            yield x, y, v.real, v.imag, self.method


def _radial_qhat(q: Potential, rho):
    if q.r_hi <= q.r_lo:
        return 0.0
    step = math.pi / max(rho, 1.0)
    r, w = q.radial_quadrature(24, max_step=min(step, 0.05))
    return 2.0 * math.pi * float(np.sum(w * q.profile(r) * specfun.bessel_j(0, rho * r) * r))


def fourier_oracle(q: Potential, xis) -> FourierSamples:
    """Ground-truth qhat by direct quadrature (no fast transforms)."""
    xis = np.atleast_2d(np.asarray(xis, dtype=float))
    rho = np.hypot(xis[:, 0], xis[:, 1])
    if np.any(rho > XI_LIMIT):
        raise RangeError(f"|xi| beyond validated range {XI_LIMIT:g}")
    if q.is_radial:
        cache = {}
        vals = []
        for p in rho:
            key = round(float(p), 12)   # polar nodes repeat |xi| up to rounding
            if key not in cache:
                cache[key] = _radial_qhat(q, key)
            vals.append(cache[key])
        return FourierSamples(xis, np.asarray(vals, dtype=complex), "oracle")
    h = q.spacing
    if np.max(rho, initial=0.0) * h > 2 * math.pi / 10:
        raise ResolutionError("grid too coarse for the requested frequency (< 10 points per wavelength)")
    x1 = q.axis
    vals = np.empty(len(xis), dtype=complex)
    for k, (a, b) in enumerate(xis):
        ex = np.exp(-1j * a * x1)
        ey = np.exp(-1j * b * x1)
        vals[k] = h * h * (ex @ q.values @ ey)
    return FourierSamples(xis, vals, "oracle")


def laplace_oracle(Q: Potential, t) -> float:
    """int_0^1 Q(r) exp(-t (1 - r)) r dr by adaptive Gauss-Kronrod per smooth piece."""
    if not Q.is_radial:
        raise RangeError("laplace_oracle needs a radial potential")
    if t < 0:
        raise RangeError("t must be >= 0")
    total = 0.0
    for a, b in Q.intervals:
        val, _ = integrate.quad(lambda r: float(Q.profile(np.array([r]))[0]) * math.exp(-t * (1 - r)) * r,
                                a, b, epsabs=0.0, epsrel=1e-12, limit=200)
        total += val
    return total


def polar_band_nodes(radius, n_radial=24, n_angle=48):
    """Polar quadrature of the disk |xi| <= radius: Gauss-Legendre in rho, uniform in angle.

    Angles are offset by half a step and n_angle is even, so the node set is
    closed under negation.  Returns (xis, weights) with weights including rho.
    """
    if n_angle % 2:
        raise RangeError("n_angle must be even")
    x, w = np.polynomial.legendre.leggauss(n_radial)
    rho = 0.5 * radius * (x + 1)
    wr = 0.5 * radius * w * rho
    phi = 2 * math.pi * (np.arange(n_angle) + 0.5) / n_angle
    P, F = np.meshgrid(rho, phi, indexing="ij")
    W = np.repeat(wr[:, None], n_angle, axis=1) * (2 * math.pi / n_angle)
    xis = np.stack([P.ravel() * np.cos(F.ravel()), P.ravel() * np.sin(F.ravel())], axis=-1)
    return xis, W.ravel()


def loglog_slope(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Least-squares slope of log y against log x."""
    return float(np.polyfit(np.log(np.asarray(xs, float)), np.log(np.asarray(ys, float)), 1)[0])
