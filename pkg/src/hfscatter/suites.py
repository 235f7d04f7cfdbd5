"""Verification suites: one per acceptance criterion plus a free-case smoke suite.

Each suite returns a SuiteResult with PASS/FAIL checks and the CSV tables it
produced.  Thresholds live in THRESHOLDS so tests and the CLI share them.
"""

from __future__ import annotations

import filecmp
import math
import tempfile
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Tuple

import numpy as np

from . import borninv, csvio, forward, nearboundary, nearfield, numerics, specfun
from .numerics import AngularGrid, loglog_slope

THRESHOLDS = {
    "specfun_tol": 1e-9,
    "debye_rel": 10.0,             # relative error <= 10/n
    "forward_rel": 1e-3,
    "smatrix_defect": 5e-3,
    "smatrix_shrink": 3.0,
    "smatrix_floor": 1e-12,        # defects at the solver tolerance count as converged
    "slope_lo": -1.4,
    "slope_hi": -0.6,
    "stability_factor": 2.0,
    "free_diag": 1e-10,
    "green_rel": 1e-8,
    "v_scaling_factor": 3.0,
    "tracking_factor": 3.0,
}


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class SuiteResult:
    name: str
    checks: List[Check] = field(default_factory=list)
    tables: Dict[str, Tuple[tuple, list]] = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def add(self, name, ok, detail=""):
        self.checks.append(Check(name, bool(ok), detail))

    def write(self, out_dir):
        out = Path(out_dir)
        return [csvio.write_csv(out / f"{self.name}_{key}.csv", header, rows)
                for key, (header, rows) in sorted(self.tables.items())]


def _in_window(s):
    return THRESHOLDS["slope_lo"] <= s <= THRESHOLDS["slope_hi"]


def _g(x):
    return f"{x:.3g}"


# -- 1 -----------------------------------------------------------------------


def suite_specfun() -> SuiteResult:
    res = SuiteResult("specfun")
    tol = THRESHOLDS["specfun_tol"]
    xs = [0.5, 1.0, 2.0, 5.0, 20.0, 100.0]
    rows = []
    w_err = r_err = 0.0
    parity_ok = True
    for x in xs:
        for n in range(0, 11):
            j, y = specfun.bessel_j(n, x), specfun.bessel_y(n, x)
            jp, yp = specfun.bessel_j_prime(n, x), specfun.bessel_y_prime(n, x)
            w = abs(j * yp - jp * y - 2 / (math.pi * x))
            w_err = max(w_err, w)
            rec = 0.0
            if n >= 1:
                a, b = specfun.bessel_j(n - 1, x), specfun.bessel_j(n + 1, x)
                rec = abs(a + b - 2 * n / x * j) / max(abs(a) + abs(b), 1e-300)
                r_err = max(r_err, rec)
            sgn = -1.0 if n % 2 else 1.0
            parity_ok &= specfun.bessel_j(-n, x) == sgn * j and specfun.bessel_y(-n, x) == sgn * y
            rows.append((x, n, j, y, w, rec))
    res.tables["grid"] = (("x", "n", "j", "y", "wronskian_err", "recurrence_rel"), rows)
    res.add("wronskian", w_err <= tol, f"max {_g(w_err)}")
    res.add("recurrence", r_err <= tol, f"max rel {_g(r_err)}")
    res.add("parity", parity_ok, "J_-n, Y_-n exact")
    drows = []
    for n in (100, 200):
        p = specfun.DebyeParams.from_argument(n, 0.5 * n)
        rel = abs(specfun.debye_j(p) / specfun.bessel_j(n, 0.5 * n) - 1)
        drows.append((n, p.alpha, rel))
        res.add(f"debye n={n}", rel <= THRESHOLDS["debye_rel"] / n, f"rel {_g(rel)} <= {_g(10 / n)}")
    res.tables["debye"] = (("n", "alpha", "rel_err"), drows)
    return res


# -- 2, 3 ----------------------------------------------------------------------


def _forward_case(n_half, lam=4.0, n_dir=64):
    q = numerics.piecewise_constant(1.0, 0.5)
    g = AngularGrid(n_dir)
    ref = forward.partial_wave_oracle(q, lam, g, g)
    ff = forward.far_field(numerics.sample_on_grid(q, n_half), lam, g, g)
    return q, g, ref, ff


def suite_forward_oracle() -> SuiteResult:
    res = SuiteResult("forward-oracle")
    _, _, ref, ff = _forward_case(100)
    err = float(np.max(np.abs(ff.amplitudes - ref.amplitudes)) / np.max(np.abs(ref.amplitudes)))
    res.tables["farfield"] = (csvio.FARFIELD_HEADER, list(ff.rows()))
    res.add("far_field vs partial_wave_oracle", err <= THRESHOLDS["forward_rel"], f"sup-rel {_g(err)} (201^2, N_dir=64)")
    return res


def suite_smatrix() -> SuiteResult:
    res = SuiteResult("smatrix")
    rows = []
    defects = []
    for n_half in (100, 200):
        _, _, _, ff = _forward_case(n_half)
        S = forward.scattering_matrix(ff)
        u, r = S.unitarity_defect(), S.reciprocity_defect()
        defects.append((u, r))
        rows.append((2 * n_half + 1, ff_spacing(n_half), u, r))
    res.tables["defects"] = (("points", "spacing", "unitarity", "reciprocity"), rows)
    (u1, r1), (u2, r2) = defects
    lim = THRESHOLDS["smatrix_defect"]
    res.add("unitarity <= 5e-3", u1 <= lim, _g(u1))
    res.add("reciprocity <= 5e-3", r1 <= lim, _g(r1))
    fl, k = THRESHOLDS["smatrix_floor"], THRESHOLDS["smatrix_shrink"]
    res.add("unitarity shrinks >= 3x", u2 <= u1 / k or u1 <= fl, f"{_g(u1)} -> {_g(u2)}")
    res.add("reciprocity shrinks >= 3x", r2 <= r1 / k or r1 <= fl,
            f"{_g(r1)} -> {_g(r2)}" + (" (at roundoff floor)" if r1 <= fl else ""))
    return res


def ff_spacing(n_half, radius=0.5):
    hw = radius * n_half / (n_half - 2)
    return 2 * hw / (2 * n_half)


# -- 4, 5 ----------------------------------------------------------------------

SWEEP_BORN = (8.0, 16.0, 32.0)


def _weak_bump():
    return numerics.smooth_bump(0.1, 0.5)


def suite_born_decay() -> SuiteResult:
    res = SuiteResult("born-decay")
    q = _weak_bump()
    L2 = q.l2_norm() ** 2
    g = AngularGrid(64)
    raw, scaled, rows = [], [], []
    for lam in SWEEP_BORN:
        ff = forward.far_field(q, lam, g, g)
        born = forward.born_far_field_grid(q, lam, g, g)
        r = float(np.max(np.abs(ff.amplitudes - born.amplitudes)))
        c = abs(specfun.far_field_constant(lam))
        raw.append(r)
        scaled.append(r / c)
        rows.append((lam, r, r / c, r * lam**1.5 / L2))
    res.tables["residual"] = (("lambda", "sup_residual", "qhat_scale_residual", "c_fit"), rows)
    s_raw, s_scaled = loglog_slope(SWEEP_BORN, raw), loglog_slope(SWEEP_BORN, scaled)
    cfit = [row[3] for row in rows]
    res.add("sup |a - born| slope in [-1.4, -0.6]", _in_window(s_raw),
            f"slope {s_raw:.3f}; lambda^-3/2 constant {', '.join(_g(c) for c in cfit)}; "
            f"qhat-scale slope {s_scaled:.3f}")
    return res


def suite_born_stability() -> SuiteResult:
    res = SuiteResult("born-stability")
    q, z = _weak_bump(), numerics.zero_radial()
    errs, recs, samples = [], [], []
    for lam in SWEEP_BORN:
        amp = forward.mode_amplitude(q, lam)
        nd = 2 * (amp.bandwidth + 2)
        g = AngularGrid(nd + nd % 2)
        band = borninv.BandSpec.polar(lam)
        est = borninv.recover_fourier_band(amp, band)
        ora = numerics.fourier_oracle(q, band.xi_nodes).values
        errs.append(float(np.max(np.abs(est.values - ora))))
        recs.append(borninv.stability_record(q, z, lam, band, amp.grid(g, g).operator_norm_sq()))
        if lam == SWEEP_BORN[0]:
            samples = list(est.rows())
    res.tables["stability"] = (csvio.STABILITY_HEADER, [r.row() for r in recs])
    res.tables["fourier"] = (csvio.FOURIER_HEADER, samples)
    base = recs[0].ratio
    rel = [r.ratio / base for r in recs]
    res.add("ratio <= 2 x baseline", max(rel) <= THRESHOLDS["stability_factor"],
            "ratio/baseline " + ", ".join(f"{x:.3f}" for x in rel))
    s = loglog_slope(SWEEP_BORN, errs)
    res.add("band error slope in [-1.4, -0.6]", _in_window(s), f"slope {s:.3f}")
    return res


# -- 6, 7 ----------------------------------------------------------------------


def _green_sample():
    z = numerics.zero_radial()
    b = numerics.near_boundary_bump(2.0, 20.0)
    return [(b, z), (b, b.scaled(0.5)), (numerics.smooth_bump(1.0, 0.8, 0.3), b)]


def suite_nearfield_exact() -> SuiteResult:
    res = SuiteResult("nearfield-exact")
    z = numerics.zero_radial()
    worst = 0.0
    diag_rows = []
    for lam in (5.0, 20.0, 80.0):
        d = nearfield.near_field_diag(z, lam)
        ref = np.array([specfun.z_coeff(n, 1.0, lam).value for n in range(d.nmax + 1)])
        worst = max(worst, float(np.max(np.abs(d.mu_nonneg - ref) / np.abs(ref))))
        if lam == 5.0:
            diag_rows = list(d.rows())
    res.tables["free_diag"] = (csvio.NEARFIELD_HEADER, diag_rows)
    res.add("free diagonal = z_n(1)", worst <= THRESHOLDS["free_diag"], f"max rel {_g(worst)}")
    rows = []
    worst = 0.0
    for k, (Q1, Q2) in enumerate(_green_sample()):
        for lam in (10.0, 20.0, 40.0):
            for n in (0, 7, 30):
                r = nearfield.green_identity_residual(Q1, Q2, lam, n, n)
                worst = max(worst, r.relative)
                rows.append((k, lam, n, r.volume.real, r.volume.imag, r.boundary.real, r.boundary.imag, r.relative))
    res.tables["green"] = (("pair", "lambda", "n", "re_volume", "im_volume", "re_boundary", "im_boundary",
                            "relative"), rows)
    res.add("Green identity 3x3x3", worst <= THRESHOLDS["green_rel"], f"max rel {_g(worst)}")
    return res


SWEEP_PROBE = (10.0, 20.0, 40.0)


def suite_probe() -> SuiteResult:
    res = SuiteResult("probe")
    q, z = numerics.smooth_bump(1.0, 0.6), numerics.zero_radial()
    ora = numerics.fourier_oracle(q, [[0.0, 0.0]]).values[0]
    errs, rows = [], []
    for lam in SWEEP_PROBE:
        pr = nearfield.probe_fourier_nearfield(q, z, lam, [0.0, 0.0])
        e = abs(pr.estimate - ora)
        errs.append(e)
        rows.append((lam, pr.estimate.real, pr.estimate.imag, ora.real, e))
    res.tables["probe"] = (("lambda", "re_estimate", "im_estimate", "oracle", "error"), rows)
    s = loglog_slope(SWEEP_PROBE, errs)
    res.add("qhat(0) error slope in [-1.4, -0.6]", _in_window(s), f"slope {s:.3f}")
    return res


# -- 8 - 11 --------------------------------------------------------------------

SWEEP_NB = (20.0, 40.0, 80.0)


def suite_v_scaling() -> SuiteResult:
    res = SuiteResult("v-scaling")
    cfg = nearboundary.NearBoundaryConfig()
    rows, vals = [], []
    for lam in SWEEP_NB:
        Q = numerics.near_boundary_bump(cfg.kappa, lam)
        k = cfg.mode_threshold(lam)
        orders = list(range(k, 3 * k + 1))
        v = nearboundary.v_norm_profile(Q, lam, orders)
        i = int(np.argmax(v))
        val = float(v[i]) * lam**2.5 / Q.sup_norm()
        vals.append(val)
        rows.append((lam, orders[i], float(v[i]), val))
    res.tables["vnorm"] = (("lambda", "n_star", "v_norm", "scaled"), rows)
    spread = max(vals) / min(vals)
    res.add("max ||v_n|| lambda^5/2 varies <= 3x", spread <= THRESHOLDS["v_scaling_factor"],
            f"values {', '.join(_g(v) for v in vals)}; spread {spread:.2f}; "
            f"fitted slope {loglog_slope(SWEEP_NB, vals):.2f}")
    return res


def suite_mode_identity() -> SuiteResult:
    res = SuiteResult("mode-identity")
    cfg = nearboundary.NearBoundaryConfig()
    z = numerics.zero_radial()
    rows = []
    ok, zero_ok = True, True
    for lam in (20.0, 40.0):
        Q = numerics.near_boundary_bump(cfg.kappa, lam)
        H = Q.scaled(0.5)
        d1 = nearfield.near_field_diag(Q, lam)
        diags = {"zero": (z, nearfield.near_field_diag(z, lam)), "half": (H, nearfield.near_field_diag(H, lam))}
        for name, (Q2, d2) in diags.items():
            for n in (math.ceil(2 * lam), math.ceil(3 * lam)):
                m = nearboundary.mode_measurement(d1, d2, Q, Q2, cfg, n, n)
                ok &= m.residual <= m.bound
                rows.append((lam, name, n, m.boundary_value.real, m.boundary_value.imag,
                             m.volume_value.real, m.volume_value.imag, m.residual, m.bound))
            off = nearboundary.mode_measurement(d1, d2, Q, Q2, cfg, math.ceil(2 * lam), math.ceil(2 * lam) + 1)
            zero_ok &= off.boundary_value == 0 and off.volume_value == 0
    res.tables["modes"] = (("lambda", "pair", "n", "re_boundary", "im_boundary", "re_volume", "im_volume",
                            "residual", "bound"), rows)
    worst = max(r[7] / r[8] for r in rows)
    res.add("residual <= assembled v-bound", ok, f"max residual/bound {worst:.3f}")
    res.add("n != m exact zero", zero_ok)
    return res


def suite_constant_tracking() -> SuiteResult:
    res = SuiteResult("constant-tracking")
    cfg = nearboundary.NearBoundaryConfig()
    z = numerics.zero_radial()
    lem, thm = [], []
    for lam in SWEEP_NB:
        Q = numerics.near_boundary_bump(cfg.kappa, lam)
        H = Q.scaled(0.5)
        d1, d0, dh = (nearfield.near_field_diag(x, lam) for x in (Q, z, H))
        lem.append(nearboundary.laplace_bound_check(d1, d0, Q, z, cfg, 2 * cfg.big_k * lam))
        thm.append(nearboundary.theorem_disk_record(Q, H, cfg, lam, 2 * lam, d1, dh))
    rows = [r.row() for r in lem] + [(r.lam, 2 * r.lam, r.lhs, r.data_term, r.remainder_term, r.ratio) for r in thm]
    res.tables["records"] = (csvio.RECORDS_HEADER, rows)
    k = THRESHOLDS["tracking_factor"]
    for name, recs in (("Laplace bound", lem), ("disk theorem", thm)):
        rel = [r.ratio / recs[0].ratio for r in recs]
        res.add(f"{name} ratio <= 3 x baseline", max(rel) <= k,
                "ratio/baseline " + ", ".join(f"{x:.3f}" for x in rel) + f"; two-sided spread {max(rel) / min(rel):.2f}")
    return res


def suite_monotone() -> SuiteResult:
    res = SuiteResult("monotone")
    cfg = nearboundary.NearBoundaryConfig()
    lam = 20.0
    Q = numerics.near_boundary_bump(cfg.kappa, lam)
    rho = np.linspace(0.0, 10 * lam, 401)
    phis = (0.0, 0.7, 2.1)
    xis = np.concatenate([np.stack([rho * math.cos(p), rho * math.sin(p)], axis=-1) for p in phis])
    mb = nearboundary.monotone_fourier_bound(Q, cfg, lam, xis)
    res.tables["fourier"] = (csvio.FOURIER_HEADER, list(mb.samples.rows()))
    res.tables["oracle"] = (csvio.FOURIER_HEADER,
                            [(x, y, v.real, v.imag, "oracle") for (x, y), v in zip(xis, mb.oracle)])
    res.add("bound >= |qhat| up to |xi| = 10 lambda", mb.holds, f"bound {_g(mb.bound)}, slack {mb.slack:.2f}")
    ts = [2 * cfg.big_k * lam * s for s in (1, 1.5, 2, 3)]
    lv = [numerics.laplace_oracle(Q, t) for t in ts]
    res.add("Laplace value decreasing in t", all(a > b for a, b in zip(lv, lv[1:])))
    return res


def suite_free_case() -> SuiteResult:
    res = SuiteResult("free-case")
    z = numerics.zero_radial()
    lam = 5.0
    g = AngularGrid(16)
    ff = forward.far_field(z, lam, g, g)
    res.tables["farfield"] = (csvio.FARFIELD_HEADER, list(ff.rows()))
    res.add("zero far field", float(np.max(np.abs(ff.amplitudes))) == 0.0)
    d = nearfield.near_field_diag(z, lam, 24)
    j0 = specfun.bessel_j(0, lam)
    ref = j0 / (lam * (specfun.bessel_j_prime(0, lam) - 1j * j0))
    res.tables["nearfield"] = (csvio.NEARFIELD_HEADER, list(d.rows()))
    res.add("free diagonal mu_0", abs(d.mu(0) - ref) <= 1e-12 * abs(ref), _g(abs(d.mu(0) - ref)))
    born = forward.born_far_field_grid(z, lam, g, g)
    res.add("zero Born amplitude", float(np.max(np.abs(born.amplitudes))) == 0.0)
    return res


def suite_determinism() -> SuiteResult:
    res = SuiteResult("determinism")
    with tempfile.TemporaryDirectory() as a, tempfile.TemporaryDirectory() as b:
        files = []
        for fn in (suite_free_case, suite_specfun, suite_monotone):
            files += [p.name for p in fn().write(a)]
            fn().write(b)
        same = all(filecmp.cmp(Path(a) / f, Path(b) / f, shallow=False) for f in files)
    res.add("repeated runs byte-identical", same, f"{len(files)} CSV files compared")
    return res


CRITERIA: Dict[str, Callable[[], SuiteResult]] = {
    "specfun": suite_specfun,
    "forward-oracle": suite_forward_oracle,
    "smatrix": suite_smatrix,
    "born-decay": suite_born_decay,
    "born-stability": suite_born_stability,
    "nearfield-exact": suite_nearfield_exact,
    "probe": suite_probe,
    "v-scaling": suite_v_scaling,
    "mode-identity": suite_mode_identity,
    "constant-tracking": suite_constant_tracking,
    "monotone": suite_monotone,
    "determinism": suite_determinism,
}
NUMBERED = {str(i + 1): name for i, name in enumerate(CRITERIA)}
SUITES = dict(CRITERIA, **{"free-case": suite_free_case})


def resolve(name: str) -> List[str]:
    key = name.lower().removeprefix("criterion-")
    if key == "all":
        return list(CRITERIA)
    if key in NUMBERED:
        return [NUMBERED[key]]
    if key in SUITES:
        return [key]
    raise KeyError(f"unknown suite {name!r}; choose from all, 1-12, {', '.join(SUITES)}")


def run(name: str) -> SuiteResult:
    t0 = time.perf_counter()
    out = SUITES[name]()
    out.seconds = time.perf_counter() - t0
    return out


def format_table(results: List[SuiteResult]) -> str:
    lines = []
    for r in results:
        for c in r.checks:
            tag = "PASS" if c.passed else "FAIL"
            lines.append(f"{tag}  {r.name:<18} {c.name:<40} {c.detail}")
    return "\n".join(lines)
