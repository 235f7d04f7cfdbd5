import json
import re

import pytest

from hfscatter import cli, csvio, parallel
from hfscatter.config import load_config, parse_config
from hfscatter.errors import ConfigError

NUM = re.compile(r"^-?\d(\.\d+)?(e[+-]\d+)?$|^0$")


def _write(tmp_path, cfg):
    p = tmp_path / "run.json"
    p.write_text(json.dumps(cfg, indent=2))
    return p


def test_unknown_field_names_field_and_line():
    text = '{\n  "lambdas": [4],\n  "grid": {"spacng": 0.01}\n}'
    with pytest.raises(ConfigError) as ei:
        parse_config(text)
    assert ei.value.field == "grid.spacng"
    assert ei.value.line == 3
    assert "unknown field" in str(ei.value)


@pytest.mark.parametrize("text,field", [
    ('{"angular": {"n_dir": 63}}', "angular.n_dir"),
    ('{"angular": {"n_dir": 6}}', "angular.n_dir"),
    ('{"lambdas": [4, 0.5]}', "lambdas"),
    ('{"grid": {"points_per_wavelength": 6}}', "grid.points_per_wavelength"),
    ('{"grid": {"points": 100}}', "grid"),
    ('{"potentials": [{"family": "cube"}]}', "potentials.0.family"),
])
def test_invalid_values(text, field):
    with pytest.raises(ConfigError) as ei:
        parse_config(text)
    assert ei.value.field == field


def test_invalid_json_reports_line():
    with pytest.raises(ConfigError) as ei:
        parse_config('{\n  "lambdas": [4,\n}')
    assert ei.value.line == 3


def test_defaults_and_missing_file(tmp_path):
    cfg = parse_config("{}")
    assert cfg.angular.n_dir == 64 and cfg.band.epsilon == 0.2 and cfg.near_boundary.big_k == 2
    with pytest.raises(ConfigError):
        load_config(tmp_path / "nope.json")
    assert cli.main(["forward", "--config", str(tmp_path / "nope.json"), "--out", str(tmp_path)]) == 2


def test_random_bump_is_seeded():
    spec = parse_config('{"potentials": [{"family": "random-bump", "amp_min": 0.5, "amp_max": 2}]}').potentials[0]
    assert spec.build(None, 7).sup_norm() == spec.build(None, 7).sup_norm()
    assert spec.build(None, 7).sup_norm() != spec.build(None, 8).sup_norm()


def _check_csv(path, header):
    text = path.read_bytes().decode()
    assert "\r" not in text
    hdr, rows = csvio.read_csv(path)
    assert tuple(hdr) == header
    assert rows
    for row in rows:
        for cell in row:
            if cell not in ("modes", "nystrom", "born", "partial-wave", "born-far") and NUM.match(cell):
                mant = cell.split("e")[0].lstrip("-").replace(".", "").lstrip("0")
                assert len(mant) <= 17
    return rows


def test_fmt_round_trips():
    for v in (0.1, 1 / 3, -2.5e-300, 123456789.123456789):
        assert float(csvio.fmt(v)) == v
    assert csvio.fmt(-0.0) == "0"
    assert csvio.fmt(3) == "3"


def test_forward_and_nearfield_commands(tmp_path, capsys):
    cfg = _write(tmp_path, {"lambdas": [3.0], "potentials": [{"family": "bump", "amplitude": 1.0, "r_hi": 0.5}],
                            "angular": {"n_dir": 8}, "method": "modes", "nmax": 20})
    out = tmp_path / "res"
    assert cli.main(["forward", "--config", str(cfg), "--out", str(out)]) == 0
    rows = _check_csv(out / "farfield.csv", csvio.FARFIELD_HEADER)
    assert len(rows) == 64
    assert cli.main(["nearfield", "--config", str(cfg), "--out", str(out)]) == 0
    rows = _check_csv(out / "nearfield_q1.csv", csvio.NEARFIELD_HEADER)
    assert [int(r[1]) for r in rows] == list(range(-20, 21))
    meta = json.loads((out / "forward_meta.json").read_text())
    assert meta["seed"] == 0 and meta["config"]["lambdas"] == [3.0]


def test_reruns_are_byte_identical(tmp_path):
    cfg = _write(tmp_path, {"lambdas": [8.0], "potentials": [{"family": "bump", "amplitude": 0.1, "r_hi": 0.5}],
                            "band": {"n_radial": 4, "n_angle": 8}, "angular": {"n_dir": 16}})
    a, b = tmp_path / "a", tmp_path / "b"
    assert cli.main(["invert-born", "--config", str(cfg), "--out", str(a)]) == 0
    assert cli.main(["invert-born", "--config", str(cfg), "--out", str(b), "--threads", "2"]) == 0
    names = sorted(p.name for p in a.iterdir())
    assert "stability.csv" in names and "fourier_lambda8.csv" in names
    for n in names:
        assert (a / n).read_bytes() == (b / n).read_bytes()
    _check_csv(a / "stability.csv", csvio.STABILITY_HEADER)
    _check_csv(a / "fourier_lambda8.csv", csvio.FOURIER_HEADER)


def test_computational_error_exit_code(tmp_path, capsys):
    cfg = _write(tmp_path, {"lambdas": [4.0], "potentials": [{"family": "bump", "amplitude": 1.0, "r_hi": 1.5}]})
    assert cli.main(["nearfield", "--config", str(cfg), "--out", str(tmp_path)]) == 3
    assert "nearfield" in capsys.readouterr().err


def test_verify_free_case(tmp_path, capsys):
    assert cli.main(["verify", "--suite", "free-case", "--out", str(tmp_path)]) == 0
    assert "PASS" in capsys.readouterr().out
    assert any(tmp_path.iterdir())
    assert cli.main(["verify", "--suite", "no-such-suite"]) == 2


def test_threads_flag_and_env(monkeypatch):
    try:
        monkeypatch.setenv(parallel.ENV_VAR, "3")
        parallel.set_threads(0)
        assert parallel.workers() == 3
        parallel.set_threads(2)
        assert parallel.workers() == 2
        with pytest.raises(ValueError):
            parallel.set_threads(-1)
    finally:
        parallel.set_threads(0)
