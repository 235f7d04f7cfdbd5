"""CSV output: header row, 17 significant digits, '\\n' line endings, atomic writes."""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

FARFIELD_HEADER = ("lambda", "theta", "omega", "re_a", "im_a")
FOURIER_HEADER = ("xi_x", "xi_y", "re_qhat", "im_qhat", "method")
STABILITY_HEADER = ("lambda", "lhs", "data_term", "remainder_term", "ratio")
NEARFIELD_HEADER = ("lambda", "n", "re_mu", "im_mu")
RECORDS_HEADER = ("lambda", "t_or_Klambda", "laplace_or_lhs", "nearfield_term", "remainder_term", "ratio")


def fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if v == 0.0:
            return "0"   # drop the sign of -0.0 so reruns cannot differ on it
        return "%.17g" % v
    return str(v)


def render(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def _atomic_write(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-", suffix=path.suffix)
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_csv(path, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    path = Path(path)
    _atomic_write(path, render(header, rows))
    return path


def write_meta(path, meta: dict) -> Path:
    """Run metadata (config echo, seed); no timestamps, so reruns are byte-identical."""
    path = Path(path)
    _atomic_write(path, json.dumps(meta, indent=2, sort_keys=True) + "\n")
    return path


def read_csv(path):
    with open(path, newline="") as fh:
        r = csv.reader(fh)
        header = next(r)
        return header, [row for row in r]
