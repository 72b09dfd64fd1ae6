"""Modulated-Gaussian generator and its angular (Calderon-type) energies.

The mother function is a plane-wave-modulated Gaussian, normalized so its
frequency profile peaks at 1:

    spatial:   (1 / (2 pi sigma^2)) exp(2 pi i p x1) exp(-|x|^2 / (2 sigma^2))
    frequency: exp(-2 pi^2 sigma^2 |xi - (p, 0)|^2)

Rotating by theta moves the frequency bump to p (cos theta, sin theta).
Summing |profile|^2 over angles gives the semidiscrete angular energy; its
continuum limit has a closed form through the modified Bessel function I0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * np.pi
# exp(x) overflows double precision beyond this; bessel_i0 signals it.
_EXP_MAX_ARG = float(np.log(np.finfo(float).max))
# Below this argument the power series wins; above, the scaled asymptotic one.
_I0_SPLIT = 15.0


@dataclass(frozen=True)
class WaveletParams:
    """Modulation frequency p > 0 and spatial width sigma > 0."""

    p: float
    sigma: float

    def __post_init__(self):
        if not (self.p > 0 and np.isfinite(self.p)):
            raise ValueError(f"p must be positive, got {self.p}")
        if not (self.sigma > 0 and np.isfinite(self.sigma)):
            raise ValueError(f"sigma must be positive, got {self.sigma}")


@dataclass(frozen=True)
class Generator:
    """One sampled generator: wavelet params, rotation angle, spatial shift."""

    params: WaveletParams
    theta: float
    alpha: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "theta", float(self.theta) % TWO_PI)
        object.__setattr__(self, "alpha", np.asarray(self.alpha, dtype=float).reshape(2))


def wavelet_spatial(x, w: WaveletParams):
    """Spatial-domain mother function at points x with shape (..., 2)."""
    x = np.asarray(x, dtype=float)
    amp = 1.0 / (TWO_PI * w.sigma**2)
    gauss = np.exp(-(x**2).sum(axis=-1) / (2.0 * w.sigma**2))
    return amp * gauss * np.exp(1j * TWO_PI * w.p * x[..., 0])


def wavelet_hat(xi, w: WaveletParams):
    """Frequency profile exp(-2 pi^2 sigma^2 |xi - (p, 0)|^2); real, peak 1."""
    xi = np.asarray(xi, dtype=float)
    d2 = (xi[..., 0] - w.p) ** 2 + xi[..., 1] ** 2
    return np.exp(-2.0 * np.pi**2 * w.sigma**2 * d2)


def wavelet_hat_rotated(xi, theta: float, w: WaveletParams):
    """Frequency profile of the rotated wavelet; bump centered at p*u(theta)."""
    xi = np.asarray(xi, dtype=float)
    cx = w.p * np.cos(theta)
    cy = w.p * np.sin(theta)
    d2 = (xi[..., 0] - cx) ** 2 + (xi[..., 1] - cy) ** 2
    return np.exp(-2.0 * np.pi**2 * w.sigma**2 * d2)


def generator_hat(xi, gen: Generator):
    """Fourier transform of the shifted rotated wavelet: phase times profile."""
    xi = np.asarray(xi, dtype=float)
    phase = np.exp(-1j * TWO_PI * (xi @ gen.alpha))
    return phase * wavelet_hat_rotated(xi, gen.theta, gen.params)


def _i0_series(x: np.ndarray) -> np.ndarray:
    # sum_m (x/2)^(2m) / (m!)^2; all terms positive, done by m ~ 45 for x <= 15
    q = (x / 2.0) ** 2
    term = np.ones_like(x)
    total = np.ones_like(x)
    for m in range(1, 80):
        term = term * q / (m * m)
        total = total + term
        if np.all(term <= 1e-17 * total):
            break
    return total

def _i0_scaled_asymptotic(x: np.ndarray) -> np.ndarray:
    # exp(-x) I0(x) ~ (2 pi x)^(-1/2) sum_m c_m x^-m with c_m = ((2m-1)!!)^2 / (8^m m!).
    # The series diverges eventually; each element stops at its smallest term.
    inv = 1.0 / x
    term = np.ones_like(x)
    total = np.ones_like(x)
    frozen = np.zeros(x.shape, dtype=bool)
    for m in range(1, 40):
        nxt = term * ((2 * m - 1) ** 2 / (8.0 * m)) * inv
        frozen |= np.abs(nxt) >= np.abs(term)
        term = np.where(frozen, 0.0, nxt)
        total = total + term
        if frozen.all() or np.all(np.abs(term) <= 1e-17 * np.abs(total)):
            break
    return total / np.sqrt(TWO_PI * x)


def bessel_i0_scaled(x):
    """exp(-x) I0(x) for x >= 0; stable for large x, ~1e-12 relative accuracy."""
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0):
        raise ValueError("bessel_i0_scaled requires x >= 0")
    out = np.empty_like(arr)
    small = arr <= _I0_SPLIT
    if small.any():
        xs = arr[small]
        out[small] = np.exp(-xs) * _i0_series(xs)
    if (~small).any():
        out[~small] = _i0_scaled_asymptotic(arr[~small])
    return out if out.ndim else float(out)


def bessel_i0(x):
    """Modified Bessel I0(x), x >= 0; OverflowError once exp(x) overflows."""
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0):
        raise ValueError("bessel_i0 requires x >= 0")
    if np.any(arr > _EXP_MAX_ARG):
        raise OverflowError(f"I0(x) overflow: exp(x) not representable for x > {_EXP_MAX_ARG:.2f}")
    out = np.exp(arr) * np.asarray(bessel_i0_scaled(arr))
    return out if out.ndim else float(out)


def calderon_continuous(xi, w: WaveletParams):
    """Angular energy integral of |wavelet_hat_rotated|^2 over all angles.

    Closed form 2 pi exp(-4 pi^2 sigma^2 (|xi| - p)^2) * [exp(-y) I0(y)] with
    y = 8 pi^2 sigma^2 p |xi|; the scaled Bessel keeps it finite for large
    arguments where the naive exp * I0 product overflows.
    """
    xi = np.asarray(xi, dtype=float)
    r = np.sqrt((xi**2).sum(axis=-1))
    y = 8.0 * np.pi**2 * w.sigma**2 * w.p * r
    envelope = np.exp(-4.0 * np.pi**2 * w.sigma**2 * (r - w.p) ** 2)
    return TWO_PI * envelope * np.asarray(bessel_i0_scaled(y))


def calderon_semidiscrete(xi, w: WaveletParams, angles):
    """Sum over the angle set of |wavelet_hat_rotated(xi, theta)|^2.

    Equals the diagonal of the dual Gramian at xi = omega + nu; scaled by
    (2 pi / N) for equispaced angles it converges to calderon_continuous.
    """
    xi = np.asarray(xi, dtype=float)
    angles = np.asarray(angles, dtype=float).reshape(-1)
    centers = w.p * np.stack([np.cos(angles), np.sin(angles)], axis=-1)
    d2 = ((xi[..., None, :] - centers) ** 2).sum(axis=-1)
    return np.exp(-4.0 * np.pi**2 * w.sigma**2 * d2).sum(axis=-1)
