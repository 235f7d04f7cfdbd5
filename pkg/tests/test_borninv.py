import math

import numpy as np
import pytest

from hfscatter import borninv as bi
from hfscatter import forward as fw
from hfscatter import numerics as nm
from hfscatter.errors import DegenerateBandError, RangeError


def test_direction_pair_geometry():
    lam = 5.0
    xi = np.array([3.0, -4.0])
    for th, om in bi.direction_pair(xi, lam):
        assert np.linalg.norm(th) == pytest.approx(1.0)
        assert np.linalg.norm(om) == pytest.approx(1.0)
        assert np.allclose(lam * (th - om), xi)


def test_direction_pair_degenerate():
    with pytest.raises(DegenerateBandError):
        bi.direction_pair([10.0, 0.0], 5.0)
    with pytest.raises(DegenerateBandError):
        bi.direction_pair([10.0 - 1e-12, 0.0], 5.0)


def test_band_spec_validation():
    with pytest.raises(RangeError):
        bi.BandSpec.polar(8.0, epsilon=0.0)
    with pytest.raises(RangeError):
        bi.BandSpec.polar(8.0, alpha=2.0)


def test_estimator_inverts_born_data_exactly():
    q = nm.smooth_bump(1.0, 0.5)
    lam = 8.0
    band = bi.BandSpec.polar(lam, n_radial=8, n_angle=16)
    est = bi.recover_fourier_band(lambda t, o: fw.born_far_field(q, lam, t, o), band)
    ref = nm.fourier_oracle(q, band.xi_nodes).values
    assert np.max(np.abs(est.values - ref)) < 1e-8
    assert est.method == "born-far"


def test_born_estimate_is_hermitian_for_real_potential():
    q = nm.smooth_bump(0.3, 0.5)
    lam = 8.0
    band = bi.BandSpec.polar(lam, n_radial=6, n_angle=12)
    est = bi.recover_fourier_band(lambda t, o: fw.born_far_field(q, lam, t, o), band)
    assert est.hermitian_defect() < 1e-12


def test_radial_estimate_depends_on_modulus_only():
    # exact data is not Hermitian (the imaginary part is second order), but it is rotation invariant
    q = nm.smooth_bump(0.3, 0.5)
    lam = 8.0
    band = bi.BandSpec.polar(lam, n_radial=6, n_angle=12)
    est = bi.recover_fourier_band(fw.mode_amplitude(q, lam), band)
    rho = np.round(np.hypot(*est.xis.T), 10)
    for r in np.unique(rho):
        v = est.values[rho == r]
        assert np.max(np.abs(v - v[0])) < 1e-10


def test_farfield_source_is_interpolated():
    q = nm.smooth_bump(0.1, 0.5)
    lam = 6.0
    amp = fw.mode_amplitude(q, lam)
    g = nm.AngularGrid(256)
    band = bi.BandSpec.polar(lam, n_radial=6, n_angle=12)
    a = bi.recover_fourier_band(amp, band).values
    b = bi.recover_fourier_band(amp.grid(g, g), band).values
    assert np.max(np.abs(a - b)) < 1e-2 * np.max(np.abs(a))
    with pytest.raises(RangeError):
        bi.recover_fourier_band(amp.grid(g, g), bi.BandSpec.polar(7.0, n_radial=4, n_angle=8))


def test_stability_record_scale_covariance():
    q = nm.smooth_bump(0.1, 0.5)
    lam = 8.0
    band = bi.BandSpec.polar(lam, n_radial=8, n_angle=16)
    g = nm.AngularGrid(64)
    r1 = bi.stability_record(q, nm.zero_radial(), lam, band, fw.born_far_field_grid(q, lam, g, g).operator_norm_sq())
    q2 = q.scaled(3.0)
    r2 = bi.stability_record(q2, nm.zero_radial(), lam, band,
                             fw.born_far_field_grid(q2, lam, g, g).operator_norm_sq())
    assert r2.lhs == pytest.approx(9 * r1.lhs, rel=1e-12)
    assert r2.remainder_term == pytest.approx(9 * r1.remainder_term, rel=1e-12)
    assert r2.data_term == pytest.approx(9 * r1.data_term, rel=1e-12)


def test_stability_record_rejects_negative_entries():
    with pytest.raises(RangeError):
        bi.StabilityRecord(8.0, -1.0, 1.0, 1.0)
    assert bi.StabilityRecord(8.0, 0.0, 0.0, 0.0).ratio == 0.0


def test_identical_pair_gives_zero_lhs():
    q = nm.smooth_bump(0.2, 0.5)
    band = bi.BandSpec.polar(8.0, n_radial=4, n_angle=8)
    assert bi.weighted_band_integral(q.minus(q), band) == 0.0
