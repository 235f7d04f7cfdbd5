"""Independent reference values in extended precision (mpmath)."""

import mpmath as mp

mp.mp.dps = 40


def j(n, x):
    return float(mp.besselj(n, x))


def y(n, x):
    return float(mp.bessely(n, x))


def h1(n, x):
    return complex(mp.hankel1(n, x))


def jp(n, x):
    return float(mp.besselj(n, x, derivative=1))


def log_abs_j(n, x):
    return float(mp.log(abs(mp.besselj(n, x))))


def z_coeff(n, r, lam):
    n = abs(n)
    num = mp.besselj(n, lam * r)
    den = lam * (mp.besselj(n, lam, derivative=1) - 1j * mp.besselj(n, lam))
    return complex(num / den)


def disk_qhat(a, rho, q0=1.0):
    """Fourier transform of q0 * indicator(|x| < a) at |xi| = rho."""
    if rho == 0:
        return float(q0 * mp.pi * a * a)
    return float(q0 * 2 * mp.pi * a * mp.besselj(1, a * rho) / rho)


def shell_laplace(r0, t, q0=1.0):
    """int_{r0}^1 q0 e^{-t(1-r)} r dr."""
    return float(q0 * mp.quad(lambda r: mp.e ** (-t * (1 - r)) * r, [r0, 1]))


def disk_scattering_coeff(n, q0, a, lam):
    k = mp.sqrt(lam * lam - q0)
    jk, djk = mp.besselj(n, k * a), mp.besselj(n, k * a, derivative=1)
    jl, djl = mp.besselj(n, lam * a), mp.besselj(n, lam * a, derivative=1)
    hl, dhl = mp.hankel1(n, lam * a), mp.diff(lambda s: mp.hankel1(n, s), lam * a)
    return complex(-(k * djk * jl - lam * jk * djl) / (k * djk * hl - lam * jk * dhl))


def radial_qhat(profile, r_lo, r_hi, rho):
    """2 pi int Q(r) J0(rho r) r dr by mpmath quadrature (profile takes an mpf)."""
    return float(2 * mp.pi * mp.quad(lambda r: profile(r) * mp.besselj(0, rho * r) * r,
                                     mp.linspace(r_lo, r_hi, 9)))
