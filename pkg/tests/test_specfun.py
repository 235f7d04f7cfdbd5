import math

import numpy as np
import pytest

import oracles
from hfscatter import specfun
from hfscatter.errors import RangeError


def test_frozen_values():
    assert specfun.bessel_j(0, 1.0) == pytest.approx(0.765197686557967, abs=1e-14)
    assert specfun.bessel_y(0, 1.0) == pytest.approx(0.088256964215677, abs=1e-14)
    assert specfun.bessel_y(1, 1.0) == pytest.approx(-0.781212821300289, abs=1e-14)
    h = specfun.hankel1(0, 1.0)
    assert h.real == pytest.approx(0.765197686557967, abs=1e-14)
    assert h.imag == pytest.approx(0.088256964215677, abs=1e-14)


@pytest.mark.parametrize("n", [0, 1, 2, 5, 10, 30, 60])
@pytest.mark.parametrize("x", [1e-3, 0.5, 3.0, 11.9, 12.5, 24.0, 26.0, 80.0, 400.0])
def test_j_y_against_mpmath(n, x):
    jr, yr = oracles.j(n, x), oracles.y(n, x)
    assert specfun.bessel_j(n, x) == pytest.approx(jr, rel=1e-11, abs=1e-300)
    if abs(yr) < 1e250:
        assert specfun.bessel_y(n, x) == pytest.approx(yr, rel=1e-10)


@pytest.mark.parametrize("n,x", [(3, 2.0), (0, 7.5), (12, 40.0), (1, 100.0)])
def test_derivatives_and_hankel(n, x):
    assert specfun.bessel_j_prime(n, x) == pytest.approx(oracles.jp(n, x), rel=1e-10, abs=1e-14)
    h = specfun.hankel1(n, x)
    assert abs(h - oracles.h1(n, x)) <= 1e-10 * abs(h)
    assert specfun.bessel_j_prime(0, x) == pytest.approx(-specfun.bessel_j(1, x), rel=1e-13)


def test_vectorised_matches_scalar():
    xs = np.array([0.0, 0.3, 5.0, 30.0, 120.0])
    v = specfun.bessel_j(4, xs)
    assert v.shape == xs.shape
    for x, val in zip(xs, v):
        # the Miller start depends on max(x), so agreement is to rounding, not bitwise
        assert val == pytest.approx(specfun.bessel_j(4, float(x)), rel=1e-13, abs=1e-300)


def test_log_sequence_deep_underflow():
    seq = specfun.bessel_j_log_sequence(900, 40.0)
    for k in (0, 39, 100, 400, 900):
        assert seq.logabs[k] == pytest.approx(oracles.log_abs_j(k, 40.0), rel=1e-12, abs=1e-10)
    la, sg = specfun.log_bessel_j_array(500, np.array([10.0, 80.0]))
    assert la[0] == pytest.approx(oracles.log_abs_j(500, 10.0), rel=1e-12)


@pytest.mark.parametrize("n,r,lam", [(0, 1.0, 5.0), (3, 0.7, 20.0), (150, 0.97, 20.0), (400, 1.0, 80.0)])
def test_z_coeff_against_mpmath(n, r, lam):
    z = specfun.z_coeff(n, r, lam)
    ref = oracles.z_coeff(n, r, lam)
    assert abs(z.value - ref) <= 1e-10 * abs(ref)
    assert specfun.z_coeff(-n, r, lam).value == z.value


def test_z_coeff_satisfies_robin_condition():
    for n in (0, 5, 40):
        lam = 12.0
        z, dz = specfun.z_coeff(n, 1.0, lam).value, specfun.z_coeff_dr(n, 1.0, lam)
        assert abs(dz - 1j * lam * z - 1.0) < 1e-12


def test_z_coeff_sequence_matches_pointwise():
    seq = specfun.z_coeff_sequence(60, 0.95, 20.0)
    for n in (0, 20, 59):
        assert abs(seq[n] - specfun.z_coeff(n, 0.95, 20.0).value) <= 1e-12 * abs(seq[n])


def test_debye_error_shrinks_like_one_over_n():
    errs = []
    for n in (100, 200):
        p = specfun.DebyeParams.from_argument(n, n / 2)
        errs.append(abs(specfun.debye_j(p) / specfun.bessel_j(n, n / 2) - 1))
        assert errs[-1] <= 10 / n
    assert 1 / 1.5 <= errs[0] / errs[1] / 2 <= 1.5


def test_debye_derivative_leading_term():
    n = 200
    p = specfun.DebyeParams.from_argument(n, n / 2)
    assert specfun.debye_j_prime(p) == pytest.approx(specfun.bessel_j_prime(n, n / 2), rel=10 / n)


def test_debye_geometric_in_n():
    alpha = math.acosh(2.0)
    a = specfun.debye_j(specfun.DebyeParams(100, alpha))
    b = specfun.debye_j(specfun.DebyeParams(101, alpha))
    assert b / a == pytest.approx(math.exp(-(alpha - math.tanh(alpha))), rel=0.01)


def test_z_decay_matches_debye_ratio():
    lam = 20.0
    for r in (0.95, 0.98, 1.0):
        for n in (100, 150, 199):
            z0, z1 = specfun.z_coeff(n, r, lam).value, specfun.z_coeff(n + 1, r, lam).value
            d0, d1 = specfun.z_coeff_debye(n, r, lam), specfun.z_coeff_debye(n + 1, r, lam)
            assert abs(z1 / z0) == pytest.approx(abs(d1 / d0), rel=10 / n)


def test_green_function_is_outgoing():
    lam = 7.0
    c = specfun.far_field_constant(lam)
    for r in (200.0, 800.0):
        g = specfun.green2d(lam, np.array([r, 0.0]), np.zeros(2))
        assert abs(g / (c * np.exp(1j * lam * r) / math.sqrt(r)) - 1) < 2 / (lam * r)


def test_constants_relations():
    lam = 3.3
    c = specfun.far_field_constant(lam)
    assert specfun.identity_constant(lam) == pytest.approx(-1 / c)
    assert abs(c - 0.25j * math.sqrt(2 / (math.pi * lam)) * np.exp(-0.25j * math.pi)) < 1e-15


def test_hankel_asymptotic_deviation_is_order_one_over_x():
    xs = np.linspace(50, 500, 10)
    devs = []
    for x in xs:
        lead = math.sqrt(2 / (math.pi * x)) * np.exp(1j * (x - math.pi / 4))
        devs.append(abs(specfun.hankel1(0, x) / lead - 1) * x)
    assert max(devs) / min(devs) < 1.05


@pytest.mark.parametrize("bad", [lambda: specfun.bessel_j(2, -1.0), lambda: specfun.bessel_y(0, 0.0),
                                 lambda: specfun.bessel_j(2, 2e6), lambda: specfun.bessel_j(2.5, 1.0),
                                 lambda: specfun.debye_j(specfun.DebyeParams(10, 0.05)),
                                 lambda: specfun.z_coeff(3, 1.2, 4.0),
                                 lambda: specfun.green2d(2.0, np.zeros(2), np.zeros(2))])
def test_range_errors(bad):
    with pytest.raises(RangeError):
        bad()
