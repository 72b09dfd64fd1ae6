"""Dual Gramian fibers of the sampled system and their spectra.

At a frequency omega the system restricted to the Paley-Wiener ball produces a
finite Hermitian matrix indexed by the dual-lattice points of index_set. Two
independent constructions are provided:

  * build_gramian_direct: the Gram product G = F^H F with
    F[k, i] = generator_hat(omega + nu_i; theta_k, alpha_k). This is the
    ground-truth form (positive semidefinite by construction, rank <= N).
  * build_gramian: the closed form
    G[i, j] = exp(-pi^2 sigma^2 |nu_i - nu_j|^2) *
              sum_k exp(2 pi i alpha_k . (nu_i - nu_j)) *
                    exp(-4 pi^2 sigma^2 |omega + (nu_i + nu_j)/2 - p u_k|^2),
    which collapses the product analytically (Gaussian midpoint identity).

Both yield the same matrix to floating-point accuracy; tests hold them against
each other. The quadratic form of G against the fiber vector z_i = fhat(omega
+ nu_i) reproduces the sampled energy of a band-limited f at this omega.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lattice import IndexSet, annihilator, index_set
from .sampling import SamplingSpec
from .wavelet import TWO_PI

# Hermiticity slack relative to the largest entry magnitude.
HERMITIAN_TOL = 1e-13


class NoConvergence(RuntimeError):
    """Eigensolver failed to converge on a dual Gramian fiber."""


@dataclass(frozen=True)
class DualGramian:
    """One fiber: frequency omega, its index set, and the matrix entries."""

    omega: np.ndarray
    indices: IndexSet
    entries: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.indices)

    @property
    def is_empty(self) -> bool:
        return self.dim == 0


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues of one fiber, ascending."""

    eigenvalues: np.ndarray

    def __len__(self) -> int:
        return len(self.eigenvalues)


def _fiber_points(omega, spec: SamplingSpec):
    omega = np.asarray(omega, dtype=float).reshape(2)
    idx = index_set(omega, spec.rho, annihilator(spec.lattice))
    return omega, idx


def _require_shifts(spec: SamplingSpec) -> np.ndarray:
    if spec.shifts is None:
        raise ValueError("spec must carry explicit shifts to build a Gramian fiber")
    return spec.shifts


def build_gramian_direct(omega, spec: SamplingSpec) -> DualGramian:
    """Gram-product construction G = F^H F; PSD by construction."""
    alpha = _require_shifts(spec)
    omega, idx = _fiber_points(omega, spec)
    n = len(idx)
    if n == 0:
        return DualGramian(omega, idx, np.zeros((0, 0), dtype=complex))
    w = spec.wavelet
    xi = omega + idx.points  # (n, 2)
    centers = w.p * np.stack([np.cos(spec.angles), np.sin(spec.angles)], axis=-1)  # (N, 2)
    d2 = ((xi[None, :, :] - centers[:, None, :]) ** 2).sum(axis=-1)  # (N, n)
    profile = np.exp(-2.0 * np.pi**2 * w.sigma**2 * d2)
    phase = np.exp(-1j * TWO_PI * (alpha @ xi.T))  # (N, n)
    f = phase * profile
    return DualGramian(omega, idx, f.conj().T @ f)


def build_gramian(omega, spec: SamplingSpec, angle_chunk: int = 64) -> DualGramian:
    """Closed-form construction; same matrix as build_gramian_direct."""
    alpha = _require_shifts(spec)
    omega, idx = _fiber_points(omega, spec)
    n = len(idx)
    if n == 0:
        return DualGramian(omega, idx, np.zeros((0, 0), dtype=complex))
    w = spec.wavelet
    pts = idx.points
    diff = pts[:, None, :] - pts[None, :, :]  # (n, n, 2)
    mid = omega + (pts[:, None, :] + pts[None, :, :]) / 2.0  # (n, n, 2)
    pair = np.exp(-np.pi**2 * w.sigma**2 * (diff**2).sum(axis=-1))  # (n, n)
    centers = w.p * np.stack([np.cos(spec.angles), np.sin(spec.angles)], axis=-1)
    entries = np.zeros((n, n), dtype=complex)
    # chunk the angle axis; n^2 * N intermediates get large for wide balls
    for start in range(0, len(centers), angle_chunk):
        c = centers[start : start + angle_chunk]  # (K, 2)
        a = alpha[start : start + angle_chunk]  # (K, 2)
        d2 = ((mid[:, :, None, :] - c) ** 2).sum(axis=-1)  # (n, n, K)
        gauss = np.exp(-4.0 * np.pi**2 * w.sigma**2 * d2)
        phases = np.exp(1j * TWO_PI * (diff @ a.T))  # (n, n, K)
        entries += (phases * gauss).sum(axis=-1)
    return DualGramian(omega, idx, pair * entries)


def spectrum(g: DualGramian) -> Spectrum:
    """Eigenvalues of a validated-Hermitian fiber, ascending."""
    e = g.entries
    if g.is_empty:
        return Spectrum(np.zeros(0))
    scale = np.abs(e).max()
    herm_err = np.abs(e - e.conj().T).max()
    if herm_err > HERMITIAN_TOL * scale + 1e-300:
        raise ValueError(f"fiber is not Hermitian (deviation {herm_err:.3e}, scale {scale:.3e})")
    try:
        vals = np.linalg.eigvalsh(e)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(f"eigensolver failed at omega={g.omega} (dim {g.dim})") from exc
    return Spectrum(vals)


def spectral_bounds(g: DualGramian):
    """(lambda_min, lambda_max); (nan, nan) sentinel for an empty index set."""
    if g.is_empty:
        return (float("nan"), float("nan"))
    vals = spectrum(g).eigenvalues
    return (float(vals[0]), float(vals[-1]))


def quadratic_form(g: DualGramian, coeffs) -> float:
    """Sampled-energy quadratic form of the fiber.

    coeffs holds fhat(omega + nu_i) in index order; the result equals
    sum_k |sum_i coeffs_i * conj(generator_hat_k(omega + nu_i))|^2, which is
    real and nonnegative for a PSD fiber.
    """
    z = np.asarray(coeffs, dtype=complex).reshape(-1)
    if z.shape[0] != g.dim:
        raise ValueError(f"coefficient vector length {z.shape[0]} != fiber dim {g.dim}")
    if g.is_empty:
        return 0.0
    w = z.conj()
    return float(np.real(np.vdot(w, g.entries @ w)))
