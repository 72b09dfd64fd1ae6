"""Full-rank planar lattices: bases, annihilators, cells, ball enumeration.

A lattice is stored through a 2x2 basis whose columns generate it. The
annihilator (dual) lattice carries the frequency side of the analysis; the
enumeration routines collect dual-lattice points inside open discs, which is
where every downstream matrix dimension comes from.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# A basis counts as singular when |det| fails to clear this times the largest
# entry magnitude squared.
SINGULAR_TOL = 1e-12

# Points within this distance of the enumeration sphere are treated as lying
# on it and excluded (open-ball convention, no sqrt taken).
TIE_TOL = 1e-12

# Cap on the element count of the temporary distance blocks used by the
# vectorized enumerators.
_CHUNK_ELEMENTS = 1 << 23


class SingularBasis(ValueError):
    """Raised when a 2x2 basis matrix is numerically rank deficient."""


def _as_basis(basis) -> np.ndarray:
    b = np.asarray(basis, dtype=float)
    if b.shape != (2, 2):
        raise SingularBasis(f"basis must be 2x2, got shape {b.shape}")
    if not np.all(np.isfinite(b)):
        raise SingularBasis("basis entries must be finite")
    det = b[0, 0] * b[1, 1] - b[0, 1] * b[1, 0]
    scale = np.abs(b).max() ** 2
    if abs(det) <= SINGULAR_TOL * scale:
        raise SingularBasis(f"basis is singular (|det|={abs(det):.3e})")
    return b


@dataclass(frozen=True)
class Lattice2D:
    """Full-rank lattice {basis @ m : m in Z^2}; columns generate."""

    basis: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "basis", _as_basis(self.basis))


@dataclass(frozen=True)
class FundamentalCell:
    """Parallelogram cell center + basis; covers the plane under the lattice."""

    center: np.ndarray
    basis: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "center", np.asarray(self.center, dtype=float))
        object.__setattr__(self, "basis", _as_basis(self.basis))

    @property
    def area(self) -> float:
        return float(abs(np.linalg.det(self.basis)))


@dataclass(frozen=True)
class IndexSet:
    """Dual-lattice points nu with |nu + omega| < rho, lexicographic order.

    ``coords`` holds the integer coordinates m, ``points`` the vectors
    basis @ m, with rows sorted lexicographically by (m1, m2).
    """

    omega: np.ndarray
    rho: float
    coords: np.ndarray
    points: np.ndarray

    def __len__(self) -> int:
        return len(self.coords)

    @property
    def is_empty(self) -> bool:
        return len(self.coords) == 0


def make_lattice(basis) -> Lattice2D:
    """Validate a 2x2 basis and wrap it; raises SingularBasis if degenerate."""
    return Lattice2D(basis)


def annihilator(lattice: Lattice2D) -> Lattice2D:
    """Dual lattice: all v with v . g in Z for every lattice vector g."""
    return Lattice2D(np.linalg.inv(lattice.basis.T))


def covolume(lattice: Lattice2D) -> float:
    """Area of a fundamental cell, |det basis|."""
    return float(abs(np.linalg.det(lattice.basis)))


def centered_cell(lattice: Lattice2D) -> FundamentalCell:
    """Fundamental cell basis @ [-1/2, 1/2)^2 centered at the origin."""
    return FundamentalCell(center=np.zeros(2), basis=lattice.basis.copy())


def _candidate_box(grid: np.ndarray, rho: float, dual: Lattice2D):
    """Integer box guaranteed to contain every solution of |Dm + omega| < rho.

    For any solution, |m_i - c_i| = |(D^-1 (nu + omega))_i| <= rho * |row_i|
    with c = -D^-1 omega, so the box below is a superset for every grid row.
    """
    dinv = np.linalg.inv(dual.basis)
    centers = -grid @ dinv.T
    half = rho * np.sqrt((dinv**2).sum(axis=1)) + 1.0
    lo = np.floor(centers.min(axis=0) - half).astype(np.int64)
    hi = np.ceil(centers.max(axis=0) + half).astype(np.int64)
    m1 = np.arange(lo[0], hi[0] + 1)
    m2 = np.arange(lo[1], hi[1] + 1)
    # meshgrid 'ij' + reshape emits rows in lexicographic (m1, m2) order
    coords = np.stack(np.meshgrid(m1, m2, indexing="ij"), axis=-1).reshape(-1, 2)
    return coords, coords @ dual.basis.T


def ball_masks(grid, rho: float, dual: Lattice2D):
    """Shared enumeration for many frequencies at once.

    Returns (coords, points, masks) where masks[c, j] is True when candidate j
    lies in the open ball of radius rho around -grid[c]. The candidate list is
    common to all rows and lexicographically ordered, so masked subsets agree
    with index_set() row by row.
    """
    grid = np.atleast_2d(np.asarray(grid, dtype=float))
    coords, points = _candidate_box(grid, rho, dual)
    thresh = rho * rho - 2.0 * rho * TIE_TOL
    masks = np.empty((len(grid), len(coords)), dtype=bool)
    step = max(1, _CHUNK_ELEMENTS // max(1, len(coords)))
    for start in range(0, len(grid), step):
        sl = slice(start, start + step)
        d2 = ((grid[sl, None, :] + points[None, :, :]) ** 2).sum(axis=-1)
        masks[sl] = d2 < thresh
    return coords, points, masks


def index_set(omega, rho: float, dual: Lattice2D) -> IndexSet:
    """Enumerate dual points nu with |nu + omega| < rho (strict, ties out)."""
    omega = np.asarray(omega, dtype=float).reshape(2)
    if rho <= 0:
        raise ValueError("rho must be positive")
    coords, points, masks = ball_masks(omega[None, :], rho, dual)
    keep = masks[0]
    return IndexSet(omega=omega, rho=float(rho), coords=coords[keep], points=points[keep])


def count_field(grid, rho: float, dual: Lattice2D):
    """Counts n(omega) = |{nu : |nu + omega| < rho}| for each grid row.

    Returns (counts, max_count). Vectorized over the grid; the max over the
    standard centered grids is the rank-feasibility yardstick for the sweep.
    """
    grid = np.atleast_2d(np.asarray(grid, dtype=float))
    if rho <= 0:
        raise ValueError("rho must be positive")
    coords, points = _candidate_box(grid, rho, dual)
    thresh = rho * rho - 2.0 * rho * TIE_TOL
    counts = np.empty(len(grid), dtype=np.int64)
    step = max(1, _CHUNK_ELEMENTS // max(1, len(coords)))
    for start in range(0, len(grid), step):
        sl = slice(start, start + step)
        d2 = ((grid[sl, None, :] + points[None, :, :]) ** 2).sum(axis=-1)
        counts[sl] = (d2 < thresh).sum(axis=1)
    return counts, int(counts.max())
