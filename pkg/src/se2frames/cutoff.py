"""Covering-count frame bounds for the frequency-cutoff comparison system.

Replacing the Gaussian frequency profile by the indicator of a disc of
diameter L turns the frame question into counting: if every frequency in the
analysis ball of radius rho is covered by at least m and at most M of the
discs of radius L/2 centered at p*u(theta_k), the sampled energy is pinched
between m L^2 exp(-L^2 pi^2 sigma^2) and M L^2 times the signal energy, which
caps the condition number by (M/m) exp(L^2 pi^2 sigma^2).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lattice import TIE_TOL

_CHUNK_ELEMENTS = 1 << 23


@dataclass(frozen=True)
class CoveringCount:
    """Extreme covering multiplicities over the sampled ball."""

    m: int
    big_m: int
    resolution: int


@dataclass(frozen=True)
class CutoffBounds:
    """Energy pinch and condition-number cap from covering counts."""

    lower: float
    upper: float
    kappa_bound: float
    degenerate: bool


@dataclass(frozen=True)
class HeuristicReport:
    """Quick geometric necessary checks for a positive covering minimum."""

    origin_covered: bool
    rim_covered: bool

    def summary(self) -> str:
        yn = {True: "yes", False: "no"}
        return (
            f"origin covered (L >= 2p): {yn[self.origin_covered]}; "
            f"rim covered (rho < p + L/2): {yn[self.rim_covered]}"
        )


def covering_counts(p: float, length: float, rho: float, angles, resolution: int = 512) -> CoveringCount:
    """Min/max multiplicity of the open discs B(p*u_k, L/2) over B(0, rho).

    Sampled on a cell-centered polar grid (resolution radii x resolution
    angles), which never lands exactly on the origin, the rim, or tangency
    points; membership is open-ball with the shared tie exclusion.
    """
    if p <= 0 or length <= 0 or rho <= 0:
        raise ValueError("p, length (L) and rho must be positive")
    if resolution < 1:
        raise ValueError("resolution must be at least 1")
    angles = np.asarray(angles, dtype=float).reshape(-1)
    centers = p * np.stack([np.cos(angles), np.sin(angles)], axis=-1)  # (N, 2)
    r = rho * (np.arange(resolution) + 0.5) / resolution
    phi = 2.0 * np.pi * (np.arange(resolution) + 0.5) / resolution
    rr, pp = np.meshgrid(r, phi, indexing="ij")
    pts = np.stack([rr * np.cos(pp), rr * np.sin(pp)], axis=-1).reshape(-1, 2)
    half = length / 2.0
    thresh = half * half - 2.0 * half * TIE_TOL
    lo = np.iinfo(np.int64).max
    hi = 0
    step = max(1, _CHUNK_ELEMENTS // max(1, len(centers)))
    for start in range(0, len(pts), step):
        d2 = ((pts[start : start + step, None, :] - centers[None, :, :]) ** 2).sum(axis=-1)
        counts = (d2 < thresh).sum(axis=1)
        lo = min(lo, int(counts.min()))
        hi = max(hi, int(counts.max()))
    return CoveringCount(m=lo, big_m=hi, resolution=int(resolution))


def cutoff_frame_bounds(count: CoveringCount, length: float, sigma: float) -> CutoffBounds:
    """Energy bounds m L^2 e^(-L^2 pi^2 sigma^2) <= . <= M L^2 and their ratio."""
    if length <= 0 or sigma <= 0:
        raise ValueError("length (L) and sigma must be positive")
    damp = np.exp(-(length**2) * np.pi**2 * sigma**2)
    lower = count.m * length**2 * damp
    upper = count.big_m * length**2
    if count.m > 0:
        kappa = (count.big_m / count.m) / damp
        degenerate = False
    else:
        kappa = float("inf")
        degenerate = True
    return CutoffBounds(lower=float(lower), upper=float(upper), kappa_bound=float(kappa), degenerate=degenerate)


def heuristic_check(p: float, length: float, rho: float) -> HeuristicReport:
    """Necessary geometry for m > 0: discs must reach the origin and the rim.

    The origin is at distance p from every disc center, so it takes L >= 2p;
    the rim at radius rho stays reachable only while rho < p + L/2 (strict).
    """
    if p <= 0 or length <= 0 or rho <= 0:
        raise ValueError("p, length (L) and rho must be positive")
    return HeuristicReport(origin_covered=length >= 2.0 * p, rim_covered=rho < p + length / 2.0)
