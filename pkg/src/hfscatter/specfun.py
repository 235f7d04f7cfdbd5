"""Bessel, Hankel and derived special functions for integer order and real argument.

Evaluation regimes:

* power series for ``x <= max(12, n/2)``;
* Miller backward recurrence, normalised with ``J_0 + 2 sum J_2k = 1``, elsewhere;
* ``Y_0``/``Y_1`` from the Neumann series built on the same backward sweep for
  ``x < 25`` and from the Hankel large-argument expansion beyond, followed by
  upward recurrence in the order.

Debye asymptotics are provided as cross-checks only.  All routines accept a
scalar or a numpy array for ``x`` and a Python integer for ``n``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import RangeError

EULER_GAMMA = 0.57721566490153286061

MAX_ORDER = 10**6
MAX_ARG = 1.0e6

_SERIES_FLOOR = 12.0
_ASYMPTOTIC_SEED = 25.0
_RESCALE = 1.0e250
_LOG_RESCALE = math.log(_RESCALE)


def _check(n, x, allow_zero=True):
    if abs(int(n)) != abs(n) or abs(n) > MAX_ORDER:
        raise RangeError(f"order {n} outside validated range |n| <= {MAX_ORDER}")
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise RangeError("non-finite argument")
    if np.any(x > MAX_ARG):
        raise RangeError(f"argument beyond validated range x <= {MAX_ARG:g}")
    if allow_zero:
        if np.any(x < 0):
            raise RangeError("negative argument")
    elif np.any(x <= 0):
        raise RangeError("argument must be > 0 (branch cut along ]-inf, 0])")
    return int(n), x


def _miller_start(n, xmax):
    start = int(max(n, xmax) + 30 + 10.0 * xmax ** (1.0 / 3.0))
    return start + (start % 2)


def _series_j(n, x):
    """Power series for J_n, n >= 0, vectorised over x > 0."""
    half = 0.5 * x
    log_t0 = n * np.log(half) - math.lgamma(n + 1)
    q = -(half * half)
    term = np.ones_like(x)
    total = np.ones_like(x)
    k = 0
    while True:
        k += 1
        term = term * q / (k * (n + k))
        total = total + term
        if np.all(np.abs(term) <= 1e-17 * np.abs(total)) or k > 400:
            break
    return np.exp(log_t0) * total


def _miller(n, x, want_y=False):
    """Backward recurrence sweep for x > 0 (array).

    Returns J_n(x) and, when ``want_y``, the normalised Neumann sums needed for
    Y_0 and Y_1.
    """
    start = _miller_start(n, float(np.max(x)))
    b_hi = np.zeros_like(x)
    b = np.full_like(x, 1e-30)
    norm = np.zeros_like(x)
    jn = np.zeros_like(x)
    s0 = np.zeros_like(x)
    s1 = np.zeros_like(x)
    if start == n:
        jn = b.copy()
    for k in range(start, 0, -1):
        b_lo = (2.0 * k / x) * b - b_hi
        j = k - 1
        if j == n:
            jn = b_lo.copy()
        if j == 0:
            norm = norm + b_lo
        elif j % 2 == 0:
            norm = norm + 2.0 * b_lo
            if want_y:
                m = j // 2
                s0 = s0 + (-1.0) ** m * b_lo / m
        elif want_y:
            m = (j - 1) // 2
            if m == 0:
                s1 = s1 - b_lo
            else:
                s1 = s1 + (-1.0) ** (m + 1) * (1.0 / m + 1.0 / (m + 1)) * b_lo
        b_hi, b = b, b_lo
        big = np.abs(b) > _RESCALE
        if np.any(big):
            f = np.where(big, 1.0 / _RESCALE, 1.0)
            b, b_hi, norm, jn, s0, s1 = (v * f for v in (b, b_hi, norm, jn, s0, s1))
    if not want_y:
        return jn / norm
    j0 = b / norm
    j1 = b_hi / norm
    return jn / norm, j0, j1, s0 / norm, s1 / norm


def _hankel_asymptotic(nu, x):
    """Large-argument expansion of J_nu, Y_nu (nu in {0, 1}) for x >= 25."""
    mu = 4.0 * nu * nu
    p = np.ones_like(x)
    qq = np.zeros_like(x)
    term = np.ones_like(x)
    prev = np.full_like(x, np.inf)
    for k in range(1, 200):
        term = term * (mu - (2 * k - 1) ** 2) / (k * 8.0 * x)
        mag = np.abs(term)
        live = mag < prev
        if not np.any(live & (mag > 1e-18)):
            break
        contrib = np.where(live, term, 0.0)
        if k % 4 == 1:
            qq = qq + contrib
        elif k % 4 == 2:
            p = p - contrib
        elif k % 4 == 3:
            qq = qq - contrib
        else:
            p = p + contrib
        prev = np.where(live, mag, 0.0)
    chi = x - (0.5 * nu + 0.25) * math.pi
    amp = np.sqrt(2.0 / (math.pi * x))
    c, s = np.cos(chi), np.sin(chi)
    return amp * (p * c - qq * s), amp * (p * s + qq * c)


def _j_nonneg(n, x):
    out = np.empty_like(x)
    zero = x == 0
    out[zero] = 1.0 if n == 0 else 0.0
    series = (~zero) & (x <= max(_SERIES_FLOOR, 0.5 * n))
    if np.any(series):
        out[series] = _series_j(n, x[series])
    rest = ~(zero | series)
    if np.any(rest):
        out[rest] = _miller(n, x[rest])
    return out


def _y01(x):
    y0 = np.empty_like(x)
    y1 = np.empty_like(x)
    small = x < _ASYMPTOTIC_SEED
    if np.any(small):
        xs = x[small]
        _, j0, j1, s0, s1 = _miller(0, xs, want_y=True)
        lg = np.log(0.5 * xs) + EULER_GAMMA
        y0[small] = (2.0 / math.pi) * (lg * j0 - 2.0 * s0)
        y1[small] = -(2.0 / math.pi) * (j0 / xs - lg * j1) + (2.0 / math.pi) * s1
    if np.any(~small):
        xl = x[~small]
        y0[~small] = _hankel_asymptotic(0, xl)[1]
        y1[~small] = _hankel_asymptotic(1, xl)[1]
    return y0, y1


def _y_nonneg(n, x):
    y0, y1 = _y01(x)
    if n == 0:
        return y0
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(1, n):
            y0, y1 = y1, (2.0 * k / x) * y1 - y0
    if not np.all(np.isfinite(y1)):
        raise RangeError(f"Y_{n} overflows at the requested argument")
    return y1


def _scalar_out(x_in, arr):
    return arr.item() if np.ndim(x_in) == 0 else arr


def bessel_j(n, x):
    """J_n(x) for integer n and real x >= 0; J_{-n} = (-1)^n J_n."""
    n, xa = _check(n, x)
    xa = np.atleast_1d(xa).astype(float)
    sign = -1.0 if (n < 0 and n % 2) else 1.0
    return _scalar_out(x, sign * _j_nonneg(abs(n), xa))


def bessel_y(n, x):
    """Y_n(x) for integer n and x > 0; Y_{-n} = (-1)^n Y_n."""
    n, xa = _check(n, x, allow_zero=False)
    xa = np.atleast_1d(xa).astype(float)
    sign = -1.0 if (n < 0 and n % 2) else 1.0
    return _scalar_out(x, sign * _y_nonneg(abs(n), xa))


def hankel1(n, x):
    """H^(1)_n(x) = J_n(x) + i Y_n(x)."""
    return bessel_j(n, x) + 1j * bessel_y(n, x)


def bessel_j_prime(n, x):
    if n == 0:
        return -bessel_j(1, x)
    return 0.5 * (bessel_j(n - 1, x) - bessel_j(n + 1, x))


def bessel_y_prime(n, x):
    if n == 0:
        return -bessel_y(1, x)
    return 0.5 * (bessel_y(n - 1, x) - bessel_y(n + 1, x))


def hankel1_prime(n, x):
    return bessel_j_prime(n, x) + 1j * bessel_y_prime(n, x)


# -- log-scaled sequences ---------------------------------------------------


@dataclass(frozen=True)
class LogSequence:
    """J_k(x), k = 0..kmax, stored as sign * exp(logabs)."""

    x: float
    logabs: np.ndarray
    sign: np.ndarray

    def value(self, k):
        return float(self.sign[k] * math.exp(self.logabs[k])) if np.isfinite(self.logabs[k]) else 0.0

    def pair(self, k):
        """(J_k, J_{k+1}) divided by a common positive scale, and log of that scale."""
        ref = max(self.logabs[k], self.logabs[k + 1])
        a = self.sign[k] * math.exp(self.logabs[k] - ref)
        b = self.sign[k + 1] * math.exp(self.logabs[k + 1] - ref)
        return a, b, ref


def bessel_j_log_sequence(kmax, x):
    """log|J_k(x)| and sign for k = 0..kmax from one normalised Miller sweep."""
    kmax = int(kmax)
    _check(kmax, x)
    x = float(x)
    logabs = np.full(kmax + 1, -np.inf)
    sign = np.zeros(kmax + 1)
    if x == 0.0:
        logabs[0], sign[0] = 0.0, 1.0
        return LogSequence(x, logabs, sign)
    start = _miller_start(kmax + 1, x)
    mant = np.zeros(start + 1)
    scale = np.zeros(start + 1)
    b_hi, b = 0.0, 1e-30
    mant[start] = b
    shift = 0.0
    norm = 0.0
    for k in range(start, 0, -1):
        b_lo = (2.0 * k / x) * b - b_hi
        j = k - 1
        mant[j] = b_lo
        scale[j] = shift
        if j == 0:
            norm += b_lo
        elif j % 2 == 0:
            norm += 2.0 * b_lo
        b_hi, b = b, b_lo
        if abs(b) > _RESCALE:
            b /= _RESCALE
            b_hi /= _RESCALE
            norm /= _RESCALE
            shift += _LOG_RESCALE
    m = mant[: kmax + 1]
    with np.errstate(divide="ignore"):
        la = np.log(np.abs(m)) + scale[: kmax + 1] - shift - math.log(norm)
    return LogSequence(x, la, np.sign(m))


def log_bessel_j_array(n, x):
    """(log|J_n(x)|, sign) for one order n >= 0 and an array of x > 0."""
    n = abs(int(n))
    _, x = _check(n, x, allow_zero=False)
    x = np.atleast_1d(x).astype(float)
    start = _miller_start(n + 1, float(np.max(x)))
    b_hi = np.zeros_like(x)
    b = np.full_like(x, 1e-30)
    norm = np.zeros_like(x)
    shift = np.zeros_like(x)
    jn = np.zeros_like(x)
    jn_shift = np.zeros_like(x)
    for k in range(start, 0, -1):
        b_lo = (2.0 * k / x) * b - b_hi
        j = k - 1
        if j == n:
            jn = b_lo.copy()
            jn_shift = shift.copy()
        if j == 0:
            norm = norm + b_lo
        elif j % 2 == 0:
            norm = norm + 2.0 * b_lo
        b_hi, b = b, b_lo
        big = np.abs(b) > _RESCALE
        if np.any(big):
            f = np.where(big, 1.0 / _RESCALE, 1.0)
            b, b_hi, norm = b * f, b_hi * f, norm * f
            shift = shift + np.where(big, _LOG_RESCALE, 0.0)
    with np.errstate(divide="ignore"):
        la = np.log(np.abs(jn)) + jn_shift - shift - np.log(norm)
    return la, np.sign(jn)


def log_bessel_j(n, x):
    """(log|J_n(x)|, sign) without underflow for large n."""
    seq = bessel_j_log_sequence(abs(n), x)
    s = seq.sign[abs(n)]
    if n < 0 and n % 2:
        s = -s
    return float(seq.logabs[abs(n)]), float(s)


# -- Green function and the shared far-field constants ----------------------


def far_field_constant(lam):
    """(1/2i lam)(lam/2 pi i)^(1/2) on the branch fixed by the radiation condition.

    Equals the coefficient c in G(x, y) ~ c e^{i lam |x-y|} |x-y|^{-1/2} for the
    outgoing Green function ``green2d``; numerically (i/4) sqrt(2/(pi lam)) e^{-i pi/4}.
    """
    return np.exp(0.25j * math.pi) / (2.0 * math.sqrt(2.0 * math.pi * lam))


def smatrix_constant(lam):
    """(lam i / 2 pi)^(1/2), principal branch."""
    return math.sqrt(lam / (2.0 * math.pi)) * np.exp(0.25j * math.pi)


def identity_constant(lam):
    """Prefactor of the far-field pairing in the volume/far-field identity: -1/c."""
    return -1.0 / far_field_constant(lam)


def green2d(lam, x, y):
    """Outgoing free Green function (i/4) H0^(1)(lam |x - y|) in the plane.

    Solves (D^2 - lam^2) G = delta with D = -i grad; points are (..., 2) arrays.
    """
    if lam <= 0:
        raise RangeError("lambda must be > 0")
    d = np.asarray(x, dtype=float) - np.asarray(y, dtype=float)
    dist = np.sqrt(np.sum(d * d, axis=-1))
    if np.any(dist == 0):
        raise RangeError("green2d is singular at x == y")
    return 0.25j * hankel1(0, lam * dist)


# -- Debye asymptotics ------------------------------------------------------


@dataclass(frozen=True)
class DebyeParams:
    n: int
    alpha: float

    def __post_init__(self):
        if self.n < 1:
            raise RangeError("Debye order must be >= 1")
        if not self.alpha > 0:
            raise RangeError("alpha must be > 0")

    @classmethod
    def from_argument(cls, n, x):
        if not 0 < x < n:
            raise RangeError("Debye form needs 0 < x < n")
        return cls(int(n), math.acosh(n / x))

    @property
    def argument(self):
        return self.n / math.cosh(self.alpha)

    @property
    def exponent(self):
        """alpha - tanh(alpha); J_n decays like exp(-n * exponent)."""
        return self.alpha - math.tanh(self.alpha)


def _debye_guard(p):
    if p.alpha < 0.1:
        raise RangeError("alpha < 0.1: turning-point regime, Debye form not valid")


def debye_j(p: DebyeParams):
    _debye_guard(p)
    return math.exp(-p.n * p.exponent) / math.sqrt(2.0 * math.pi * p.n * math.tanh(p.alpha))


def debye_j_prime(p: DebyeParams):
    # leading term sqrt(sinh(2 alpha) / (4 pi n)) e^{-n(alpha - tanh alpha)}
    _debye_guard(p)
    return math.sqrt(math.sinh(2.0 * p.alpha) / (4.0 * math.pi * p.n)) * math.exp(-p.n * p.exponent)


# -- Robin coefficient z_n --------------------------------------------------


@dataclass(frozen=True)
class ZCoeff:
    value: complex
    log_abs: float


def _robin_denominator(seq, m, lam):
    """lam (J'_m(lam) - i J_m(lam)) as (unit-modulus phase, log modulus)."""
    a, b, ref = seq.pair(m)
    d = lam * ((m / lam) * a - b - 1j * a)
    mod = abs(d)
    assert mod > 0 and np.isfinite(mod), "Robin denominator vanished"
    return d / mod, ref + math.log(mod)


def z_coeff(n, r, lam):
    """z_n(r, lam) = J_|n|(lam r) / (lam (J'_|n|(lam) - i J_|n|(lam))), log-scaled."""
    if not 0 <= r <= 1:
        raise RangeError("r must lie in [0, 1]")
    if lam <= 0:
        raise RangeError("lambda must be > 0")
    m = abs(int(n))
    outer = bessel_j_log_sequence(m + 1, lam)
    phase, log_den = _robin_denominator(outer, m, lam)
    if r == 1.0:
        la, sg = outer.logabs[m], outer.sign[m]
    else:
        inner = bessel_j_log_sequence(m, lam * r)
        la, sg = inner.logabs[m], inner.sign[m]
    log_abs = float(la - log_den)
    if not np.isfinite(log_abs):
        return ZCoeff(0j, -math.inf)
    return ZCoeff(complex(sg * math.exp(log_abs) / phase), log_abs)


def z_coeff_dr(n, r, lam):
    """d/dr z_n(r, lam) = lam J'_|n|(lam r) / (lam (J'_|n|(lam) - i J_|n|(lam)))."""
    m = abs(int(n))
    outer = bessel_j_log_sequence(m + 1, lam)
    phase, log_den = _robin_denominator(outer, m, lam)
    inner = outer if r == 1.0 else bessel_j_log_sequence(m + 1, lam * r)
    if r == 0.0:
        num = lam * (0.5 if m == 1 else 0.0)
        return complex(num / (math.exp(log_den) * phase))
    a, b, ref = inner.pair(m)
    num = lam * ((m / (lam * r)) * a - b)
    return complex(num * math.exp(ref - log_den) / phase)


def z_coeff_sequence(nmax, r, lam):
    """Complex array z_n(r, lam), n = 0..nmax, from two Miller sweeps."""
    outer = bessel_j_log_sequence(nmax + 1, lam)
    inner = outer if r == 1.0 else bessel_j_log_sequence(nmax, lam * r)
    out = np.zeros(nmax + 1, dtype=complex)
    for m in range(nmax + 1):
        phase, log_den = _robin_denominator(outer, m, lam)
        la = inner.logabs[m] - log_den
        if np.isfinite(la):
            out[m] = inner.sign[m] * math.exp(la) / phase
    return out


def z_coeff_debye(n, r, lam):
    """Leading Debye prediction of z_n(r, lam) for n well above lam (cross-check only)."""
    m = abs(int(n))
    p1 = DebyeParams.from_argument(m, lam * r)
    p2 = DebyeParams.from_argument(m, lam)
    return debye_j(p1) / (lam * (debye_j_prime(p2) - 1j * debye_j(p2)))
