"""Experiment configuration: one JSON document per run.

Unknown fields are rejected.  Validation failures raise ConfigError carrying
the dotted field path and, when it can be located, the line in the file.
"""

from __future__ import annotations

import json
import math
import re
from pathlib import Path
from typing import List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from .errors import ConfigError
from .numerics import Potential, builtin_potentials, sample_on_grid


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class PotentialSpec(_Strict):
    family: Literal["zero", "piecewise", "bump", "near-boundary", "random-bump"] = "zero"
    q0: Optional[float] = None
    a: Optional[float] = None
    inner: Optional[float] = None
    amplitude: Optional[float] = None
    r_lo: Optional[float] = None
    r_hi: Optional[float] = None
    kappa: Optional[float] = None
    # random-bump draws its amplitude uniformly from [amp_min, amp_max] with the run seed
    amp_min: Optional[float] = None
    amp_max: Optional[float] = None
    scale: float = 1.0

    def build(self, lam: Optional[float] = None, seed: int = 0) -> Potential:
        if self.family == "random-bump":
            import numpy as np

            lo = 0.0 if self.amp_min is None else self.amp_min
            hi = 1.0 if self.amp_max is None else self.amp_max
            amp = float(np.random.default_rng(seed).uniform(lo, hi))
            q = builtin_potentials("bump", amplitude=amp, r_hi=self.r_hi or 0.5, r_lo=self.r_lo)
        else:
            params = {k: v for k, v in self.model_dump(exclude={"family", "scale", "amp_min", "amp_max"}).items()
                      if v is not None}
            if self.family == "near-boundary":
                if lam is None:
                    raise ConfigError("near-boundary potentials need a wavenumber", "family")
                params.setdefault("kappa", 2.0)
                params["lambda"] = lam
            q = builtin_potentials(self.family, **params)
        return q if self.scale == 1.0 else q.scaled(self.scale)


class GridSpec(_Strict):
    points: Optional[int] = Field(default=None, ge=11)
    spacing: Optional[float] = Field(default=None, gt=0)
    points_per_wavelength: Optional[float] = Field(default=None, ge=10)

    @model_validator(mode="after")
    def _one_of(self):
        given = [x is not None for x in (self.points, self.spacing, self.points_per_wavelength)]
        if sum(given) > 1:
            raise ValueError("give only one of points, spacing, points_per_wavelength")
        if self.points is not None and self.points % 2 == 0:
            raise ValueError("points must be odd (grid symmetric about the origin)")
        return self

    def n_half(self, lam: float, radius: float) -> int:
        if self.points is not None:
            return (self.points - 1) // 2
        if self.spacing is not None:
            h = self.spacing
        else:
            ppw = self.points_per_wavelength or 10.0
            h = 2 * math.pi / (ppw * lam)
        return max(8, int(math.ceil(radius / h)) + 2)

    def embed(self, q: Potential, lam: float) -> Potential:
        return sample_on_grid(q, self.n_half(lam, max(q.r_hi, 1e-3)))


class AngularSpec(_Strict):
    n_dir: int = Field(default=64, ge=8)

    @field_validator("n_dir")
    @classmethod
    def _even(cls, v):
        if v % 2:
            raise ValueError("n_dir must be even")
        return v


class BandSpecConfig(_Strict):
    epsilon: float = Field(default=0.2, gt=0, lt=2)
    alpha: float = Field(default=3.0, gt=2)
    n_radial: int = Field(default=24, ge=4)
    n_angle: int = Field(default=48, ge=4)


class NearBoundarySpec(_Strict):
    kappa: float = Field(default=2.0, gt=0)
    big_k: float = Field(default=2.0, ge=1)
    lambda0: float = Field(default=10.0, gt=0)
    zeta0: Optional[float] = Field(default=None, gt=0)
    t_values: Optional[List[float]] = None
    big_k_of_lambda: float = Field(default=2.0, ge=1, description="K(lambda) = big_k_of_lambda * lambda")


class ExperimentConfig(_Strict):
    lambdas: List[float] = Field(default_factory=lambda: [4.0])
    potentials: List[PotentialSpec] = Field(default_factory=lambda: [PotentialSpec()], min_length=1, max_length=2)
    method: Literal["auto", "nystrom", "modes", "partial-wave", "born"] = "auto"
    grid: GridSpec = GridSpec()
    angular: AngularSpec = AngularSpec()
    band: BandSpecConfig = BandSpecConfig()
    near_boundary: NearBoundarySpec = NearBoundarySpec()
    nmax: Optional[int] = Field(default=None, ge=0)
    xis: List[List[float]] = Field(default_factory=lambda: [[0.0, 0.0]])
    seed: int = 0
    output: Optional[str] = None

    @field_validator("lambdas")
    @classmethod
    def _lams(cls, v):
        if not v:
            raise ValueError("at least one lambda is required")
        if any(x < 1 for x in v):
            raise ValueError("all lambda must be >= 1")
        return v

    @field_validator("xis")
    @classmethod
    def _xis(cls, v):
        if any(len(x) != 2 for x in v):
            raise ValueError("each xi must have two components")
        return v

    def pair(self, lam=None):
        q1 = self.potentials[0].build(lam, self.seed)
        q2 = self.potentials[1].build(lam, self.seed + 1) if len(self.potentials) > 1 else builtin_potentials("zero")
        return q1, q2


_KEY = re.compile(r'"([^"\\]+)"\s*:')


def _locate(text: str, loc) -> Optional[int]:
    """Line of the last string key of ``loc`` in the raw JSON text, if present."""
    names = [p for p in loc if isinstance(p, str)]
    if not names:
        return None
    target = names[-1]
    for i, line in enumerate(text.splitlines(), 1):
        for m in _KEY.finditer(line):
            if m.group(1) == target:
                return i
    return None


def parse_config(text: str) -> ExperimentConfig:
    try:
        raw = json.loads(text) if text.strip() else {}
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc.msg}", None, exc.lineno) from None
    if not isinstance(raw, dict):
        raise ConfigError("configuration must be a JSON object", None, 1)
    try:
        return ExperimentConfig.model_validate(raw)
    except ValidationError as exc:
        err = exc.errors()[0]
        loc = err.get("loc", ())
        field = ".".join(str(p) for p in loc) or None
        line = _locate(text, loc)
        kind = "unknown field" if err.get("type") == "extra_forbidden" else err.get("msg", "invalid value")
        where = f" (line {line})" if line else ""
        raise ConfigError(f"{kind}: {field}{where}", field, line) from None


def load_config(path) -> ExperimentConfig:
    if path is None:
        return ExperimentConfig()
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}", None, None) from None
    return parse_config(text)
