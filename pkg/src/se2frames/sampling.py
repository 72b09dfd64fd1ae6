"""Sampling configuration: wavelet, spatial lattice, angles, shifts."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lattice import Lattice2D
from .wavelet import TWO_PI, WaveletParams

# Two angles (as fractions of a turn) or two shifts (in lattice coordinates)
# closer than this, modulo the respective period, collide.
DISTINCT_TOL = 1e-9


def uniform_angles(n: int) -> np.ndarray:
    """n equispaced rotation angles 2 pi k / n, k = 0..n-1."""
    if n < 1:
        raise ValueError("need at least one angle")
    return TWO_PI * np.arange(n) / n


def _wrapped_collisions(frac: np.ndarray) -> bool:
    # frac: (n, d) fractional coordinates in [0, 1); collision when every
    # coordinate of a pair is within DISTINCT_TOL of 0 modulo 1
    d = np.abs(frac[:, None, :] - frac[None, :, :])
    d = np.minimum(d, 1.0 - d)
    close = (d < DISTINCT_TOL).all(axis=-1)
    np.fill_diagonal(close, False)
    return bool(close.any())


@dataclass(frozen=True)
class SamplingSpec:
    """Everything that defines the sampled system.

    shifts is an (N, 2) array pairing one spatial shift with each angle, or
    None to draw fresh uniform shifts per sweep repetition.
    """

    wavelet: WaveletParams
    lattice: Lattice2D
    rho: float
    angles: np.ndarray
    shifts: np.ndarray | None = None

    def __post_init__(self):
        if not (self.rho > 0 and np.isfinite(self.rho)):
            raise ValueError(f"rho must be positive, got {self.rho}")
        angles = np.asarray(self.angles, dtype=float).reshape(-1)
        if angles.size == 0:
            raise ValueError("need at least one angle")
        object.__setattr__(self, "angles", angles)
        if _wrapped_collisions((angles[:, None] / TWO_PI) % 1.0):
            raise ValueError("angles must be pairwise distinct modulo 2 pi")
        if self.shifts is not None:
            shifts = np.asarray(self.shifts, dtype=float)
            if shifts.shape != (angles.size, 2):
                raise ValueError(
                    f"shifts shape {shifts.shape} does not pair with {angles.size} angles"
                )
            object.__setattr__(self, "shifts", shifts)
            coords = shifts @ np.linalg.inv(self.lattice.basis).T
            if _wrapped_collisions(coords % 1.0):
                raise ValueError("shifts must be pairwise distinct modulo the lattice")

    @property
    def n_generators(self) -> int:
        return int(self.angles.size)
