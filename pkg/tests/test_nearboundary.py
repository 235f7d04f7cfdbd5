import math

import numpy as np
import pytest

from hfscatter import nearboundary as nb
from hfscatter import nearfield as nf
from hfscatter import numerics as nm
from hfscatter.errors import MonotonicityError, RangeError, ThresholdError

CFG = nb.NearBoundaryConfig()
LAM = 20.0
Q = nm.near_boundary_bump(2.0, LAM)
H = Q.scaled(0.5)
Z = nm.zero_radial()


@pytest.fixture(scope="module")
def diags():
    return {k: nf.near_field_diag(v, LAM) for k, v in (("q", Q), ("h", H), ("z", Z))}


def test_defaults():
    assert (CFG.kappa, CFG.big_k, CFG.lambda0, CFG.zeta0) == (2.0, 2.0, 10.0, 60.0)
    assert CFG.mode_threshold(LAM) == 40
    with pytest.raises(RangeError):
        CFG.check_support(nm.smooth_bump(1.0, 1.0, 0.5), LAM)


def test_mode_measurement_identity(diags):
    for n in (40, 60):
        m = nb.mode_measurement(diags["q"], diags["z"], Q, Z, CFG, n, n)
        assert m.residual <= m.bound
        assert abs(m.volume_value) > 10 * m.residual


def test_mode_measurement_orthogonality_and_trivial(diags):
    m = nb.mode_measurement(diags["q"], diags["h"], Q, H, CFG, 40, 41)
    assert m.boundary_value == 0 and m.volume_value == 0
    m = nb.mode_measurement(diags["q"], diags["q"], Q, Q, CFG, 45, 45)
    assert m.boundary_value == 0 and m.volume_value == 0


def test_mode_measurement_threshold(diags):
    with pytest.raises(ThresholdError):
        nb.mode_measurement(diags["q"], diags["z"], Q, Z, CFG, 39, 39)


def test_laplace_bound(diags):
    r = nb.laplace_bound_check(diags["q"], diags["z"], Q, Z, CFG, 80.0)
    assert r.laplace_value == pytest.approx(2 * math.pi * nm.laplace_oracle(Q, 80.0))
    assert r.nearfield_term == pytest.approx(LAM ** 2 * nf.operator_norm_diff(diags["q"], diags["z"]).norm)
    assert r.remainder_term == pytest.approx(1.0 / LAM ** 2)
    assert (r.n, r.m) == (40, 40)
    assert nb.laplace_bound_check(diags["q"], diags["q"], Q, Q, CFG, 90.0).laplace_value == 0
    with pytest.raises(ThresholdError):
        nb.laplace_bound_check(diags["q"], diags["z"], Q, Z, CFG, 79.0)


def test_t_realization():
    assert nb.t_realization(80) == (40, 40)
    assert nb.t_realization(81) == (40, 41)


def test_pair_constant():
    a, b = Q.scaled(3.0).sup_norm(), H.sup_norm()
    assert nb.pair_constant(Q.scaled(3.0), H) == pytest.approx(max(a, b, a * b))
    assert nb.pair_constant(Z, Z) == 0
    assert nb.pair_constant(H, Z) == pytest.approx(H.sup_norm())


def test_monotone_bound_holds_far_beyond_band():
    rho = np.linspace(0, 10 * LAM, 201)
    xis = np.stack([rho, 0.3 * rho], axis=-1) / math.hypot(1, 0.3)
    mb = nb.monotone_fourier_bound(Q, CFG, LAM, xis)
    assert mb.holds
    qhat0 = 2 * math.pi * nm.laplace_oracle(Q, 0.0)
    assert mb.bound >= qhat0
    L0 = nm.laplace_oracle(Q, 0.0)
    assert mb.slack == pytest.approx(math.exp(CFG.zeta0 * CFG.kappa / LAM) * nm.laplace_oracle(Q, 60.0) / L0,
                                     rel=1e-6)


def test_monotone_guards():
    with pytest.raises(MonotonicityError):
        nb.monotone_fourier_bound(H.minus(Q), CFG, LAM, [[0.0, 0.0]])
    mb = nb.monotone_fourier_bound(Q.minus(Q), CFG, LAM, [[1.0, 0.0]])
    assert mb.bound == 0 and mb.holds


def test_theorem_record(diags):
    r = nb.theorem_disk_record(Q, H, CFG, LAM, 2 * LAM, diags["q"], diags["h"])
    assert r.lhs > 0 and r.ratio > 0
    with pytest.raises(ThresholdError):
        nb.theorem_disk_record(Q, H, CFG, LAM, 0.5 * LAM, diags["q"], diags["h"])
    with pytest.raises(MonotonicityError):
        nb.theorem_disk_record(H, Q, CFG, LAM, 2 * LAM, diags["h"], diags["q"])


def test_laplace_decreasing_in_t():
    vals = [nm.laplace_oracle(Q, t) for t in (80, 120, 200)]
    assert vals[0] > vals[1] > vals[2] > 0
