"""Experiment configuration: JSON parsing, validation, serialization.

Configs are plain JSON objects. The width sigma may be given directly or
through the shape factor "p_sigma" (the product p*sigma), whichever the
experiment tables state. Unknown keys are rejected rather than ignored so a
typo cannot silently fall back to a default.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, fields

import numpy as np

from .lattice import make_lattice
from .oracle import BandLimitedTestFunction, FrequencyBump
from .sampling import SamplingSpec, uniform_angles
from .wavelet import WaveletParams


class ConfigError(ValueError):
    """Invalid configuration; the message starts with the offending field path."""


IDENTITY = ((1.0, 0.0), (0.0, 1.0))


@dataclass(frozen=True)
class ExperimentConfig:
    p: float
    sigma: float
    rho: float
    num_angles: int
    angles: tuple | None = None
    shifts: tuple | None = None
    lattice_basis: tuple = IDENTITY
    grid: int = 256
    repetitions: int = 20
    seed: int = 0
    output_dir: str = "out"
    # window length for the frequency-cutoff bounds, in the covering command
    length: float = 1.0
    covering_resolution: int = 512
    # optional explicit test function for the identity oracle
    bumps: tuple | None = None
    tail_tol: float = 1e-4
    quad_grid: int = 16
    # probe frequency for single-matrix inspection
    omega: tuple = (0.0, 0.0)

    def __post_init__(self):
        _pos("p", self.p)
        _pos("sigma", self.sigma)
        _pos("rho", self.rho)
        _int_min("num_angles", self.num_angles, 1)
        if self.angles is not None and len(self.angles) != self.num_angles:
            raise ConfigError(
                f"angles: expected {self.num_angles} entries, got {len(self.angles)}"
            )
        if self.shifts is not None and len(self.shifts) != self.num_angles:
            raise ConfigError(
                f"shifts: expected {self.num_angles} entries, got {len(self.shifts)}"
            )
        _int_min("grid", self.grid, 1)
        _int_min("repetitions", self.repetitions, 1)
        if isinstance(self.seed, bool) or not isinstance(self.seed, int):
            raise ConfigError(f"seed: must be an integer, got {self.seed!r}")
        _pos("length", self.length)
        _int_min("covering_resolution", self.covering_resolution, 1)
        _pos("tail_tol", self.tail_tol)
        _int_min("quad_grid", self.quad_grid, 1)
        basis = np.asarray(self.lattice_basis, dtype=float)
        if basis.shape != (2, 2) or not np.isfinite(basis).all():
            raise ConfigError("lattice_basis: must be a finite 2x2 matrix")
        if abs(basis[0, 0] * basis[1, 1] - basis[0, 1] * basis[1, 0]) <= 1e-12:
            raise ConfigError("lattice_basis: singular")


def _pos(path: str, value) -> None:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{path}: must be a number, got {value!r}")
    if not (value > 0 and math.isfinite(value)):
        raise ConfigError(f"{path}: must be a positive finite number, got {value}")


def _int_min(path: str, value, low: int) -> None:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{path}: must be an integer, got {value!r}")
    if value < low:
        raise ConfigError(f"{path}: must be at least {low}, got {value}")


def _finite(path: str, value) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise ConfigError(f"{path}: must be a finite number, got {value!r}")
    return float(value)


def _pair(path: str, value) -> tuple:
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise ConfigError(f"{path}: must be a pair of numbers, got {value!r}")
    return (_finite(path + "[0]", value[0]), _finite(path + "[1]", value[1]))


def _parse_bump(path: str, raw) -> tuple:
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: must be an object with center, radius, coeff")
    extra = set(raw) - {"center", "radius", "coeff"}
    if extra:
        raise ConfigError(f"{path}: unknown key '{sorted(extra)[0]}'")
    if "center" not in raw or "radius" not in raw:
        raise ConfigError(f"{path}: center and radius are required")
    center = _pair(path + ".center", raw["center"])
    radius = _finite(path + ".radius", raw["radius"])
    if radius <= 0:
        raise ConfigError(f"{path}.radius: must be positive, got {radius}")
    coeff = raw.get("coeff", 1.0)
    if isinstance(coeff, (list, tuple)):
        coeff = _pair(path + ".coeff", coeff)
    else:
        coeff = (_finite(path + ".coeff", coeff), 0.0)
    return (center, radius, coeff)


_KEYS = {
    "p", "sigma", "p_sigma", "rho", "num_angles", "angles", "shifts",
    "lattice_basis", "grid", "repetitions", "seed", "output_dir", "L",
    "covering_resolution", "bumps", "tail_tol", "quad_grid", "omega",
}

# JSON key -> dataclass field where the two differ
_RENAME = {"L": "length"}


def parse_config(text) -> ExperimentConfig:
    """Parse and validate a JSON config document (text or already-loaded dict)."""
    if isinstance(text, (str, bytes)):
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"document: not valid JSON ({exc})") from None
    else:
        raw = text
    if not isinstance(raw, dict):
        raise ConfigError("document: top level must be a JSON object")
    for key in raw:
        if key not in _KEYS:
            raise ConfigError(f"{key}: unknown field")
    if "sigma" in raw and "p_sigma" in raw:
        raise ConfigError("p_sigma: cannot be combined with sigma")
    for name in ("p", "rho"):
        if name not in raw:
            raise ConfigError(f"{name}: required")
    if "num_angles" not in raw:
        raise ConfigError("num_angles: required")

    kw: dict = {}
    kw["p"] = _finite("p", raw["p"])
    if "sigma" in raw:
        kw["sigma"] = _finite("sigma", raw["sigma"])
    elif "p_sigma" in raw:
        shape = _finite("p_sigma", raw["p_sigma"])
        if shape <= 0:
            raise ConfigError(f"p_sigma: must be positive, got {shape}")
        if kw["p"] <= 0:
            raise ConfigError(f"p: must be positive, got {kw['p']}")
        kw["sigma"] = shape / kw["p"]
    else:
        raise ConfigError("sigma: required (directly or via p_sigma)")
    kw["rho"] = _finite("rho", raw["rho"])
    if not (isinstance(raw["num_angles"], int) and not isinstance(raw["num_angles"], bool)):
        raise ConfigError(f"num_angles: must be an integer, got {raw['num_angles']!r}")
    kw["num_angles"] = raw["num_angles"]

    if "angles" in raw:
        if not isinstance(raw["angles"], (list, tuple)):
            raise ConfigError("angles: must be a list")
        kw["angles"] = tuple(
            _finite(f"angles[{i}]", a) for i, a in enumerate(raw["angles"])
        )
    if "shifts" in raw:
        if not isinstance(raw["shifts"], (list, tuple)):
            raise ConfigError("shifts: must be a list of pairs")
        kw["shifts"] = tuple(
            _pair(f"shifts[{i}]", s) for i, s in enumerate(raw["shifts"])
        )
    if "lattice_basis" in raw:
        rows = raw["lattice_basis"]
        if not isinstance(rows, (list, tuple)) or len(rows) != 2:
            raise ConfigError("lattice_basis: must be two rows of two numbers")
        kw["lattice_basis"] = tuple(
            _pair(f"lattice_basis[{i}]", row) for i, row in enumerate(rows)
        )
    for name in ("grid", "repetitions", "seed", "covering_resolution", "quad_grid"):
        if name in raw:
            kw[name] = raw[name]
    if "output_dir" in raw:
        if not isinstance(raw["output_dir"], str):
            raise ConfigError(f"output_dir: must be a string, got {raw['output_dir']!r}")
        kw["output_dir"] = raw["output_dir"]
    if "L" in raw:
        kw["length"] = _finite("L", raw["L"])
    if "tail_tol" in raw:
        kw["tail_tol"] = _finite("tail_tol", raw["tail_tol"])
    if "bumps" in raw:
        if not isinstance(raw["bumps"], (list, tuple)):
            raise ConfigError("bumps: must be a list")
        kw["bumps"] = tuple(
            _parse_bump(f"bumps[{i}]", b) for i, b in enumerate(raw["bumps"])
        )
    if "omega" in raw:
        kw["omega"] = _pair("omega", raw["omega"])
    return ExperimentConfig(**kw)


def serialize_config(cfg: ExperimentConfig) -> str:
    """Inverse of parse_config: parse_config(serialize_config(cfg)) == cfg."""
    doc: dict = {}
    for f in fields(cfg):
        value = getattr(cfg, f.name)
        if value is None:
            continue
        key = "L" if f.name == "length" else f.name
        if f.name == "bumps":
            value = [
                {"center": list(c), "radius": r, "coeff": list(co)}
                for c, r, co in value
            ]
        elif f.name in ("angles", "omega"):
            value = list(value)
        elif f.name in ("shifts", "lattice_basis"):
            value = [list(row) for row in value]
        doc[key] = value
    return json.dumps(doc, indent=2)


def to_sampling_spec(cfg: ExperimentConfig) -> SamplingSpec:
    angles = np.asarray(cfg.angles, dtype=float) if cfg.angles is not None \
        else uniform_angles(cfg.num_angles)
    shifts = np.asarray(cfg.shifts, dtype=float) if cfg.shifts is not None else None
    return SamplingSpec(
        wavelet=WaveletParams(p=cfg.p, sigma=cfg.sigma),
        lattice=make_lattice(np.asarray(cfg.lattice_basis, dtype=float)),
        rho=cfg.rho,
        angles=angles,
        shifts=shifts,
    )


def to_test_function(cfg: ExperimentConfig) -> BandLimitedTestFunction:
    """Build the configured test function, or a default bump inside the ball."""
    if cfg.bumps is None:
        r = cfg.rho / 8.0
        return BandLimitedTestFunction(
            bumps=(FrequencyBump(center=(cfg.rho / 4.0, 0.0), radius=r, coeff=1.0),)
        )
    return BandLimitedTestFunction(
        bumps=tuple(
            FrequencyBump(center=c, radius=r, coeff=complex(co[0], co[1]))
            for c, r, co in cfg.bumps
        )
    )
