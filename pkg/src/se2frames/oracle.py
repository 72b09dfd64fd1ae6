"""Brute-force validation of the sampled-energy identity.

Everything here exists to check the rest of the package against direct
numerics: wavelet coefficients of explicit band-limited test functions are
integrated by adaptive quadrature, summed over the sampling set, and compared
with the frequency-side quadratic form of the dual Gramian fibers. The two
routes share no code path, so their agreement validates both.

Test functions are finite sums of smooth frequency bumps

    c * exp(1 - 1/(1 - t)),   t = |xi - center|^2 / radius^2 < 1,

zero outside the disc. Infinitely differentiable compact profiles make the
spatial coefficients decay faster than any polynomial, which keeps the
lattice truncation radius practical.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .lattice import annihilator, ball_masks, centered_cell, covolume, index_set
from .sampling import SamplingSpec
from .wavelet import TWO_PI, Generator, generator_hat, wavelet_hat_rotated

# Adaptive quadrature: relative target per coefficient, doubling budget, and a
# hard cap on the tensor order (beyond it the node generator itself crawls).
QUAD_REL_TOL = 1e-10
QUAD_MAX_DOUBLINGS = 12
_QUAD_MAX_ORDER = 8192

# Lattice tail: sup-norm shells up to this radius, then TailNotConverged.
SHELL_MAX = 64

_CHUNK_ELEMENTS = 1 << 22


class QuadratureStall(RuntimeError):
    """Adaptive quadrature refinement failed to settle."""


class TailNotConverged(RuntimeError):
    """Lattice tail still significant at the maximum shell radius."""


@dataclass(frozen=True)
class FrequencyBump:
    """One smooth compactly supported frequency profile."""

    center: np.ndarray
    radius: float
    coeff: complex

    def __post_init__(self):
        object.__setattr__(self, "center", np.asarray(self.center, dtype=float).reshape(2))
        object.__setattr__(self, "coeff", complex(self.coeff))
        if not (self.radius > 0 and np.isfinite(self.radius)):
            raise ValueError(f"bump radius must be positive, got {self.radius}")


@dataclass(frozen=True)
class BandLimitedTestFunction:
    """Finite sum of frequency bumps; defined through its Fourier transform."""

    bumps: tuple

    def __post_init__(self):
        object.__setattr__(self, "bumps", tuple(self.bumps))

    def fhat(self, xi) -> np.ndarray:
        """Fourier transform at frequencies xi with shape (..., 2)."""
        xi = np.asarray(xi, dtype=float)
        out = np.zeros(xi.shape[:-1], dtype=complex)
        for b in self.bumps:
            t = ((xi - b.center) ** 2).sum(axis=-1) / b.radius**2
            out += b.coeff * _bump_profile(t)
        return out

    def support_radius(self) -> float:
        """Radius of the smallest origin-centered ball containing the support."""
        if not self.bumps:
            return 0.0
        return max(float(np.linalg.norm(b.center)) + b.radius for b in self.bumps)

    @property
    def is_zero(self) -> bool:
        return all(b.coeff == 0 for b in self.bumps) or not self.bumps

    def coefficient_scale(self) -> float:
        # crude upper bound on any single coefficient, used as an atol anchor
        return sum(abs(b.coeff) * (2.0 * b.radius) ** 2 for b in self.bumps)


def _bump_profile(t: np.ndarray) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    inside = t < 1.0
    ti = t[inside]
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - ti))
    return out


@lru_cache(maxsize=64)
def _leggauss(order: int):
    return np.polynomial.legendre.leggauss(order)


def _bump_nodes(bump: FrequencyBump, order: int):
    """Tensor Gauss-Legendre nodes over the bump's bounding box.

    Returns (xi, q) with the profile and coefficient folded into the weights,
    so sum(kernel(xi) * q) integrates kernel * bump over the plane.
    """
    nodes, weights = _leggauss(order)
    x = bump.center[0] + bump.radius * nodes
    y = bump.center[1] + bump.radius * nodes
    xi = np.stack(np.meshgrid(x, y, indexing="ij"), axis=-1).reshape(-1, 2)
    w2 = (np.outer(weights, weights) * bump.radius**2).reshape(-1)
    t = ((xi - bump.center) ** 2).sum(axis=-1) / bump.radius**2
    return xi, w2 * _bump_profile(t) * bump.coeff


def _coefficients_at(points: np.ndarray, theta: float, f: BandLimitedTestFunction,
                     w, order: int) -> np.ndarray:
    """W(x) = integral of fhat * wavelet_hat_rotated * exp(2 pi i x.xi) for many x."""
    points = np.atleast_2d(points)
    total = np.zeros(len(points), dtype=complex)
    for bump in f.bumps:
        if bump.coeff == 0:
            continue
        xi, q = _bump_nodes(bump, order)
        qk = q * wavelet_hat_rotated(xi, theta, w)
        step = max(1, _CHUNK_ELEMENTS // max(1, len(xi)))
        for start in range(0, len(points), step):
            block = points[start : start + step]
            total[start : start + step] += np.exp(1j * TWO_PI * (block @ xi.T)) @ qk
    return total


def _base_order(xmax: float, rmax: float) -> int:
    # enough nodes to resolve the e^{2 pi i x.xi} oscillation across a bump box
    return min(_QUAD_MAX_ORDER, 8 + 4 * int(np.ceil(xmax * rmax + 1.0)))


def wavelet_coefficient(f: BandLimitedTestFunction, x, theta: float, spec: SamplingSpec) -> complex:
    """Transform coefficient at spatial point x and angle theta.

    Tensor Gauss-Legendre over each bump support, order doubled until the
    value moves by less than QUAD_REL_TOL relatively.
    """
    x = np.asarray(x, dtype=float).reshape(1, 2)
    if f.is_zero:
        return 0.0 + 0.0j
    w = spec.wavelet
    rmax = max(b.radius for b in f.bumps)
    atol = 1e-15 * f.coefficient_scale()
    order = _base_order(float(np.linalg.norm(x)), rmax)
    prev = _coefficients_at(x, theta, f, w, order)[0]
    for _ in range(QUAD_MAX_DOUBLINGS):
        order *= 2
        if order > _QUAD_MAX_ORDER:
            raise QuadratureStall(f"order cap exceeded at x={x[0]}, theta={theta}")
        cur = _coefficients_at(x, theta, f, w, order)[0]
        if abs(cur - prev) <= QUAD_REL_TOL * abs(cur) + atol:
            return complex(cur)
        prev = cur
    raise QuadratureStall(f"no convergence within {QUAD_MAX_DOUBLINGS} doublings at x={x[0]}")


def _shell_coords(s: int) -> np.ndarray:
    """Integer coordinates with sup norm exactly s, no duplicates."""
    if s == 0:
        return np.zeros((1, 2), dtype=np.int64)
    side = np.arange(-s, s + 1)
    strip = np.arange(-s + 1, s)
    parts = [
        np.stack([np.full(len(side), -s), side], axis=1),
        np.stack([np.full(len(side), s), side], axis=1),
        np.stack([strip, np.full(len(strip), -s)], axis=1),
        np.stack([strip, np.full(len(strip), s)], axis=1),
    ]
    return np.concatenate(parts).astype(np.int64)


def _shell_value(gammas, alpha, angles, f, w, order: int) -> float:
    val = 0.0
    for k in range(len(angles)):
        coeffs = _coefficients_at(gammas + alpha[k], float(angles[k]), f, w, order)
        val += float((np.abs(coeffs) ** 2).sum())
    return val


def energy_sum(f: BandLimitedTestFunction, spec: SamplingSpec, tail_tol: float = 1e-4) -> float:
    """Sampled energy: sum of |coefficient|^2 over all angles and lattice shifts.

    Spatial points run over gamma + alpha_k with gamma in sup-norm shells of
    the lattice (integer coordinates); shells are added until the newest one
    contributes at most tail_tol of the running total.
    """
    if spec.shifts is None:
        raise ValueError("energy_sum needs explicit shifts in the sampling spec")
    if tail_tol <= 0:
        raise ValueError("tail_tol must be positive")
    if f.is_zero:
        return 0.0
    w = spec.wavelet
    alpha = spec.shifts
    basis = spec.lattice.basis
    rmax = max(b.radius for b in f.bumps)
    scale = f.coefficient_scale() ** 2
    alpha_reach = float(np.linalg.norm(alpha, axis=1).max())
    total = 0.0
    for s in range(SHELL_MAX + 1):
        gammas = _shell_coords(s) @ basis.T
        xmax = float(np.linalg.norm(gammas, axis=1).max()) + alpha_reach
        order = _base_order(xmax, rmax)
        val = _shell_value(gammas, alpha, spec.angles, f, w, order)
        for _ in range(6):
            order *= 2
            if order > _QUAD_MAX_ORDER:
                raise QuadratureStall(f"order cap exceeded on shell {s}")
            refined = _shell_value(gammas, alpha, spec.angles, f, w, order)
            if abs(refined - val) <= 1e-8 * abs(refined) + 1e-16 * scale:
                val = refined
                break
            val = refined
        else:
            raise QuadratureStall(f"shell {s} quadrature did not settle")
        total += val
        if s >= 2 and val <= tail_tol * total:
            return total
    raise TailNotConverged(f"shell radius {SHELL_MAX} reached with tail above {tail_tol}")


def _grid_quadratic_mean(f: BandLimitedTestFunction, spec: SamplingSpec, m: int) -> float:
    """Mean over the m x m frequency grid of the fiber quadratic form."""
    dual = annihilator(spec.lattice)
    cell = centered_cell(dual)
    t = (np.arange(m) + 0.5) / m - 0.5
    t1, t2 = np.meshgrid(t, t, indexing="ij")
    omegas = np.stack([t1, t2], axis=-1).reshape(-1, 2) @ cell.basis.T + cell.center
    _, points, masks = ball_masks(omegas, spec.rho, dual)
    packed = np.packbits(masks, axis=1)
    _, first, inverse = np.unique(packed, axis=0, return_index=True, return_inverse=True)
    w = spec.wavelet
    alpha = spec.shifts
    centers = w.p * np.stack([np.cos(spec.angles), np.sin(spec.angles)], axis=-1)
    c2 = (centers**2).sum(axis=1)
    total = 0.0
    for gid, lead in enumerate(first):
        cols = np.flatnonzero(masks[lead])
        if not cols.size:
            continue
        cells = np.flatnonzero(inverse == gid)
        pts = points[cols]
        step = max(1, _CHUNK_ELEMENTS // max(1, len(centers) * len(pts)))
        for start in range(0, len(cells), step):
            block = cells[start : start + step]
            xi = omegas[block][:, None, :] + pts[None, :, :]  # (b, n, 2)
            d2 = (xi**2).sum(axis=-1)[:, :, None] - 2.0 * (xi @ centers.T) + c2
            fib = np.exp(-2.0 * np.pi**2 * w.sigma**2 * d2)  # (b, n, N)
            fib = fib * np.exp(-1j * TWO_PI * (xi @ alpha.T))
            z = f.fhat(xi)  # (b, n)
            v = np.einsum("bn,bnk->bk", z.conj(), fib)
            total += float((np.abs(v) ** 2).sum())
    return total / len(omegas)


def quadratic_form_integral(f: BandLimitedTestFunction, spec: SamplingSpec, grid_size: int = 16) -> float:
    """Frequency-side energy: cell area squared times the grid mean of the form.

    The integrand is the fiber quadratic form at each grid frequency; the grid
    is refined by doubling until the value moves by less than 1e-4 relative.
    """
    if spec.shifts is None:
        raise ValueError("quadratic_form_integral needs explicit shifts in the sampling spec")
    if grid_size < 1:
        raise ValueError("grid_size must be at least 1")
    if f.is_zero:
        return 0.0
    if f.support_radius() >= spec.rho:
        raise ValueError(
            f"test function support radius {f.support_radius():.6g} must lie strictly "
            f"inside the analysis ball of radius {spec.rho:.6g}"
        )
    area = covolume(annihilator(spec.lattice))
    m = grid_size
    prev = None
    for _ in range(8):
        val = area**2 * _grid_quadratic_mean(f, spec, m)
        if prev is not None and abs(val - prev) <= 1e-4 * max(abs(val), 1e-300):
            return val
        prev = val
        m *= 2
    raise QuadratureStall(f"frequency grid refinement did not settle (last grid {m // 2})")


def bracket(f: BandLimitedTestFunction, g: Generator, omega, lattice) -> complex:
    """Periodized fiber pairing sum over nu of fhat(omega+nu) * conj(ghat(omega+nu)).

    The sum truncates exactly to the index set of the test function's own
    support radius, since fhat vanishes outside it.
    """
    omega = np.asarray(omega, dtype=float).reshape(2)
    r = f.support_radius()
    if r == 0.0:
        return 0.0 + 0.0j
    idx = index_set(omega, r + 1e-9, annihilator(lattice))
    if idx.is_empty:
        return 0.0 + 0.0j
    xi = omega + idx.points
    vals = f.fhat(xi) * np.conj(generator_hat(xi, g))
    return complex(vals.sum())
