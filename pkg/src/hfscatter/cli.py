"""Command-line front end.

    hfscatter forward|nearfield|invert-born|nearfield-probe|nearboundary --config run.json --out results/
    hfscatter verify --suite all
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from . import borninv, csvio, forward, nearboundary, nearfield, numerics, parallel, suites
from .config import ExperimentConfig, load_config
from .errors import ConfigError, ScatterError


def _tag(lam):
    return f"{lam:g}".replace(".", "p")


def _far_field(cfg: ExperimentConfig, q, lam, g):
    method = cfg.method
    if method == "born":
        return forward.born_far_field_grid(q, lam, g, g)
    if method == "partial-wave":
        return forward.partial_wave_oracle(q, lam, g, g)
    if method == "nystrom" or (method == "auto" and not q.is_radial):
        grid_q = cfg.grid.embed(q, lam) if q.is_radial else q
        return forward.far_field(grid_q, lam, g, g)
    return forward.far_field(q, lam, g, g)


def cmd_forward(cfg: ExperimentConfig, out: Path):
    rows = []
    g = numerics.AngularGrid(cfg.angular.n_dir)
    for lam in cfg.lambdas:
        q, _ = cfg.pair(lam)
        rows.extend(_far_field(cfg, q, lam, g).rows())
    return [csvio.write_csv(out / "farfield.csv", csvio.FARFIELD_HEADER, rows)]


def cmd_nearfield(cfg: ExperimentConfig, out: Path):
    written = []
    for k, spec in enumerate(cfg.potentials, 1):
        rows = []
        for lam in cfg.lambdas:
            d = nearfield.near_field_diag(spec.build(lam, cfg.seed + k - 1), lam, cfg.nmax)
            rows.extend(d.rows())
        written.append(csvio.write_csv(out / f"nearfield_q{k}.csv", csvio.NEARFIELD_HEADER, rows))
    return written


def cmd_invert_born(cfg: ExperimentConfig, out: Path):
    written, recs = [], []
    for lam in cfg.lambdas:
        q1, q2 = cfg.pair(lam)
        band = borninv.BandSpec.polar(lam, cfg.band.epsilon, cfg.band.alpha, cfg.band.n_radial, cfg.band.n_angle)
        if cfg.method in ("auto", "modes") and q1.is_radial and q2.is_radial:
            a1, a2 = forward.mode_amplitude(q1, lam), forward.mode_amplitude(q2, lam)
            nd = 2 * (max(a1.bandwidth, a2.bandwidth) + 2)
            g = numerics.AngularGrid(max(nd, cfg.angular.n_dir))
            diff = forward.FarField(lam, g, g, a1.grid(g, g).amplitudes - a2.grid(g, g).amplitudes, "modes")
            source = lambda th, om: a1(th, om) - a2(th, om)  # noqa: E731
        else:
            g = numerics.AngularGrid(cfg.angular.n_dir)
            f1, f2 = _far_field(cfg, q1, lam, g), _far_field(cfg, q2, lam, g)
            diff = forward.FarField(lam, g, g, f1.amplitudes - f2.amplitudes, f1.method)
            source = diff
        est = borninv.recover_fourier_band(source, band)
        written.append(csvio.write_csv(out / f"fourier_lambda{_tag(lam)}.csv", csvio.FOURIER_HEADER, est.rows()))
        recs.append(borninv.stability_record(q1, q2, lam, band, diff.operator_norm_sq()))
    written.append(csvio.write_csv(out / "stability.csv", csvio.STABILITY_HEADER, [r.row() for r in recs]))
    return written


def cmd_nearfield_probe(cfg: ExperimentConfig, out: Path):
    probe_rows, stated, scaled = [], [], []
    for lam in cfg.lambdas:
        q1, q2 = cfg.pair(lam)
        diff = q1.minus(q2)
        xis = [x for x in cfg.xis if math.hypot(*x) <= 2 * lam]
        oracle = numerics.fourier_oracle(diff, xis).values if xis else []
        for xi, ora in zip(xis, oracle):
            pr = nearfield.probe_fourier_nearfield(q1, q2, lam, xi)
            probe_rows.append((lam, xi[0], xi[1], pr.estimate.real, pr.estimate.imag, ora.real, ora.imag))
        d1 = nearfield.near_field_diag(q1, lam, cfg.nmax)
        d2 = nearfield.near_field_diag(q2, lam, cfg.nmax)
        for power, dest in ((0, stated), (4, scaled)):
            r = nearfield.probe_stability_record(q1, q2, lam, d1, d2, data_power=power)
            dest.append((lam, 2 * lam, r.lhs, r.data_term, r.remainder_term, r.ratio))
    return [
        csvio.write_csv(out / "probe.csv", ("lambda", "xi_x", "xi_y", "re_estimate", "im_estimate",
                                            "re_oracle", "im_oracle"), probe_rows),
        csvio.write_csv(out / "records.csv", csvio.RECORDS_HEADER, stated),
        csvio.write_csv(out / "records_lambda4.csv", csvio.RECORDS_HEADER, scaled),
    ]


def cmd_nearboundary(cfg: ExperimentConfig, out: Path):
    nb = cfg.near_boundary
    nbc = nearboundary.NearBoundaryConfig(nb.kappa, nb.big_k, nb.lambda0, nb.zeta0)
    lap_rows, thm_rows, mode_rows = [], [], []
    for lam in cfg.lambdas:
        q1, q2 = cfg.pair(lam)
        d1 = nearfield.near_field_diag(q1, lam, cfg.nmax)
        d2 = nearfield.near_field_diag(q2, lam, cfg.nmax)
        ts = nb.t_values or [2 * nb.big_k * lam]
        for t in ts:
            lap_rows.append(nearboundary.laplace_bound_check(d1, d2, q1, q2, nbc, t).row())
        for n in (math.ceil(nb.big_k * lam), math.ceil(1.5 * nb.big_k * lam)):
            m = nearboundary.mode_measurement(d1, d2, q1, q2, nbc, n, n)
            mode_rows.append((lam, n, m.boundary_value.real, m.boundary_value.imag, m.volume_value.real,
                              m.volume_value.imag, m.residual, m.bound))
        try:
            r = nearboundary.theorem_disk_record(q1, q2, nbc, lam, nb.big_k_of_lambda * lam, d1, d2)
            thm_rows.append((lam, nb.big_k_of_lambda * lam, r.lhs, r.data_term, r.remainder_term, r.ratio))
        except ScatterError as exc:
            print(f"note: disk-theorem record skipped at lambda={lam:g}: {exc}", file=sys.stderr)
    return [
        csvio.write_csv(out / "laplace_records.csv", csvio.RECORDS_HEADER, lap_rows),
        csvio.write_csv(out / "theorem_records.csv", csvio.RECORDS_HEADER, thm_rows),
        csvio.write_csv(out / "modes.csv", ("lambda", "n", "re_boundary", "im_boundary", "re_volume", "im_volume",
                                            "residual", "bound"), mode_rows),
    ]


def cmd_verify(name: str, out):
    names = suites.resolve(name)
    results = []
    for n in names:
        r = suites.run(n)
        results.append(r)
        print(suites.format_table([r]) + f"   [{r.seconds:.1f} s]", flush=True)
        if out is not None:
            r.write(out)
    failed = [r.name for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} suites passed" + (f"; failed: {', '.join(failed)}" if failed else ""))
    return 1 if failed else 0


COMMANDS = {
    "forward": cmd_forward,
    "nearfield": cmd_nearfield,
    "invert-born": cmd_invert_born,
    "nearfield-probe": cmd_nearfield_probe,
    "nearboundary": cmd_nearboundary,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON experiment configuration")
    common.add_argument("--out", help="output directory (default: config 'output' or ./results)")
    common.add_argument("--threads", type=int, default=None,
                        help=f"worker threads, 0 = auto (default from ${parallel.ENV_VAR})")
    p = argparse.ArgumentParser(prog="hfscatter", description="2D Helmholtz inverse-scattering workbench",
                                parents=[common])
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    v = sub.add_parser("verify", parents=[common], help="run acceptance suites and print a PASS/FAIL table")
    v.add_argument("--suite", default="all", help="suite name, criterion number 1-12, or 'all'")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.threads is not None:
            parallel.set_threads(args.threads)
        if args.command == "verify":
            cfg = load_config(args.config) if args.config else None
            out = args.out or (cfg.output if cfg else None)
            return cmd_verify(args.suite, Path(out) if out else None)
        cfg = load_config(args.config)
        out = Path(args.out or cfg.output or "results")
        files = COMMANDS[args.command](cfg, out)
        csvio.write_meta(out / f"{args.command}_meta.json",
                         {"command": args.command, "seed": cfg.seed, "config": cfg.model_dump(mode="json")})
        for f in files:
            print(f)
        return 0
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ScatterError as exc:
        print(f"error in {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
