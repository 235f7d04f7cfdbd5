import math

import numpy as np
import pytest

import oracles
from hfscatter import forward as fw
from hfscatter import numerics as nm
from hfscatter import specfun
from hfscatter.errors import GridMismatchError, RangeError, ResolutionError

DISK = nm.piecewise_constant(1.0, 0.5)


@pytest.fixture(scope="module")
def disk_grid_ff():
    g = nm.AngularGrid(32)
    return g, fw.far_field(nm.sample_on_grid(DISK, 60), 4.0, g, g)


def test_partial_wave_coefficients_against_mpmath():
    s = fw.partial_wave_coefficients(1.0, 0.5, 4.0, 10)
    for n in (0, 1, 4, 10):
        ref = oracles.disk_scattering_coeff(n, 1.0, 0.5, 4.0)
        assert abs(s[n] - ref) <= 1e-11 * max(abs(ref), 1e-300)


def test_mode_coefficients_are_unitary():
    s = fw._radial_mode_coefficients(nm.smooth_bump(2.0, 0.7), 6.0)
    assert np.max(np.abs(np.abs(1 + 2 * s) - 1)) < 1e-11


def test_radial_modes_match_partial_wave_oracle():
    g = nm.AngularGrid(24)
    a = fw.far_field(DISK, 4.0, g, g).amplitudes
    b = fw.partial_wave_oracle(DISK, 4.0, g, g).amplitudes
    assert np.max(np.abs(a - b)) < 1e-12 * np.max(np.abs(b))


def test_nystrom_matches_oracle(disk_grid_ff):
    g, ff = disk_grid_ff
    ref = fw.partial_wave_oracle(DISK, 4.0, g, g).amplitudes
    assert np.max(np.abs(ff.amplitudes - ref)) / np.max(np.abs(ref)) < 1e-3


def test_origin_value_against_closed_form():
    qg = nm.sample_on_grid(DISK, 80)
    tf = fw.solve_ls(qg, 4.0, 0.0)
    assert abs(tf.phi[80, 80] - fw.partial_wave_origin_value(1.0, 0.5, 4.0)) < 1e-4
    assert tf.residual < 1e-10


def test_scattering_matrix_structure(disk_grid_ff):
    g, ff = disk_grid_ff
    S = fw.scattering_matrix(ff)
    assert S.unitarity_defect() < 5e-3
    assert S.reciprocity_defect() <= S.unitarity_defect()
    assert ff.reciprocity_defect() < 1e-9


def test_reciprocity_needs_matching_grids():
    ff = fw.born_far_field_grid(DISK, 3.0, nm.AngularGrid(8), nm.AngularGrid(12))
    with pytest.raises(GridMismatchError):
        ff.reciprocity_defect()
    with pytest.raises(GridMismatchError):
        fw.scattering_matrix(ff)


def test_zero_potential_scatters_nothing():
    g = nm.AngularGrid(8)
    assert np.all(fw.far_field(nm.zero_radial(), 5.0, g, g).amplitudes == 0)
    z = nm.sample_on_grid(nm.piecewise_constant(0.0, 0.5), 20)
    tf = fw.solve_ls(z, 3.0, 0.2)
    assert np.all(tf.phi_scat == 0)


def test_born_residual_weak_potential():
    q = nm.smooth_bump(0.05, 0.5)
    lam = 10.0
    g = nm.AngularGrid(32)
    r = np.max(np.abs(fw.far_field(q, lam, g, g).amplitudes - fw.born_far_field_grid(q, lam, g, g).amplitudes))
    assert r <= 3 * lam ** -1.5 * q.l2_norm() ** 2


def test_born_value_uses_fourier_convention():
    q = nm.smooth_bump(1.0, 0.5)
    lam, th, om = 5.0, 0.4, 2.0
    xi = lam * np.array([math.cos(th) - math.cos(om), math.sin(th) - math.sin(om)])
    qh = nm.fourier_oracle(q, [xi]).values[0]
    assert fw.born_far_field(q, lam, th, om) == pytest.approx(-specfun.far_field_constant(lam) * qh)


def test_scattered_field_decays_like_inverse_lambda():
    q = nm.smooth_bump(0.1, 0.5)
    lams = [8.0, 16.0, 32.0]
    vals = []
    for lam in lams:
        h = 2 * math.pi / (16 * lam)
        tf = fw.solve_ls(nm.sample_on_grid(q, int(math.ceil(0.5 / h)) + 2), lam, 0.3)
        vals.append(tf.scat_l2_support())
    assert abs(nm.loglog_slope(lams, vals) + 1) <= 0.3
    assert max(v * lam / q.l2_norm() for v, lam in zip(vals, lams)) < 1.0


def test_volume_far_field_identity():
    g = nm.AngularGrid(32)
    g1 = np.exp(1j * g.nodes) + 0.5
    g2 = np.exp(-1j * g.nodes) + 0.2 * np.cos(2 * g.nodes)
    coarse = fw.integral_identity_check(DISK, nm.zero_radial(), 4.0, g1, g2, g, 40)
    fine = fw.integral_identity_check(DISK, nm.zero_radial(), 4.0, g1, g2, g, 80)
    assert abs(fine.lhs) > 1e-3
    assert fine.relative < 1e-3
    assert fine.residual < coarse.residual


def test_resolution_guard():
    qg = nm.sample_on_grid(DISK, 10)
    with pytest.raises(ResolutionError):
        fw.solve_ls(qg, 40.0, 0.0)
    with pytest.raises(RangeError):
        fw.GridOperator(DISK, 4.0)


def test_mode_amplitude_callable_matches_grid():
    amp = fw.mode_amplitude(nm.smooth_bump(1.0, 0.5), 6.0)
    g = nm.AngularGrid(16)
    A = amp.grid(g, g).amplitudes
    assert amp(g.nodes[3], g.nodes[7]) == pytest.approx(A[3, 7], rel=1e-12)
