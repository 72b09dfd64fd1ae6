"""Spectral sweep over a frequency cell and frame-bound reporting.

The sweep tiles a centered fundamental cell of the dual lattice with an M x M
cell-centered grid, builds the dual Gramian fiber at every grid frequency for
every repetition of the random shifts, and records extreme eigenvalues. Cells
sharing an identical index set are grouped so construction and the eigensolve
run batched; per-repetition shift draws come from counter-based streams, so
results do not depend on evaluation order or thread count.
"""

from __future__ import annotations

import csv
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .gramian import NoConvergence
from .lattice import FundamentalCell, annihilator, ball_masks, centered_cell, covolume
from .sampling import SamplingSpec
from .wavelet import TWO_PI

# A frame with lower bound at or below this times the upper bound counts as
# numerically degenerate.
DEGENERATE_RATIO = 1e-14

# Cap on elements of the (cells, angles, points) work blocks.
_CHUNK_ELEMENTS = 1 << 22


@dataclass(frozen=True)
class SweepConfig:
    """Grid resolution per axis, shift repetitions, and the base RNG seed."""

    grid_size: int = 256
    repetitions: int = 20
    seed: int = 0

    def __post_init__(self):
        if self.grid_size < 1:
            raise ValueError("grid_size must be at least 1")
        if self.repetitions < 1:
            raise ValueError("repetitions must be at least 1")


@dataclass(frozen=True)
class SpectralField:
    """Sweep output: grid, per-cell counts, per-repetition extreme eigenvalues.

    lam_min / lam_max have shape (repetitions, cells); cells with an empty
    index set hold NaN there and 0 in counts.
    """

    omegas: np.ndarray
    grid_size: int
    counts: np.ndarray
    lam_min: np.ndarray
    lam_max: np.ndarray

    @property
    def mean_lam_min(self) -> np.ndarray:
        out = np.full(self.counts.shape, np.nan)
        valid = self.counts > 0
        if valid.any():
            out[valid] = self.lam_min[:, valid].mean(axis=0)
        return out

    @property
    def mean_lam_max(self) -> np.ndarray:
        out = np.full(self.counts.shape, np.nan)
        valid = self.counts > 0
        if valid.any():
            out[valid] = self.lam_max[:, valid].mean(axis=0)
        return out


@dataclass(frozen=True)
class FrameReport:
    """Frame bounds and conditioning pulled out of a SpectralField.

    lower/upper are the cell-area-scaled pooled extremes; kappa their ratio.
    kappa_reps holds one pooled-per-repetition ratio per repetition. feasible
    means the generator count covers the largest fiber dimension and the
    bounds are not degenerate.
    """

    lower: float
    upper: float
    kappa: float
    kappa_reps: np.ndarray
    kappa_mean: float
    kappa_std: float
    feasible: bool
    degenerate: bool
    max_count: int


def omega_grid(cell: FundamentalCell, m: int) -> np.ndarray:
    """Cell-centered m x m grid: center + basis @ ((i+1/2)/m - 1/2, ...)."""
    if m < 1:
        raise ValueError("grid size must be at least 1")
    t = (np.arange(m) + 0.5) / m - 0.5
    t1, t2 = np.meshgrid(t, t, indexing="ij")
    frac = np.stack([t1, t2], axis=-1).reshape(-1, 2)
    return frac @ cell.basis.T + cell.center


def draw_shifts(seed: int, repetition: int, n: int) -> np.ndarray:
    """n shift pairs, coordinates uniform in (0, 1), from a keyed stream.

    The stream is keyed on (seed, repetition), so any repetition can be drawn
    independently of the others and of scheduling order.
    """
    key = np.array([np.uint64(seed % 2**64), np.uint64(repetition % 2**64)], dtype=np.uint64)
    rng = np.random.Generator(np.random.Philox(key=key))
    v = rng.random((n, 2))
    while True:  # random() includes 0.0; the open interval does not
        zero = v == 0.0
        if not zero.any():
            break
        v[zero] = rng.random(int(zero.sum()))
    return v


def _groups(masks: np.ndarray):
    """Group grid cells by identical index-set pattern."""
    packed = np.packbits(masks, axis=1)
    _, first, inverse = np.unique(packed, axis=0, return_index=True, return_inverse=True)
    out = []
    for gid, lead in enumerate(first):
        cells = np.flatnonzero(inverse == gid)
        cols = np.flatnonzero(masks[lead])
        if cols.size:
            out.append((cells, cols))
    return out


def _sweep_one_repetition(spec, omegas, points, groups, alpha, lam_min_row, lam_max_row):
    w = spec.wavelet
    centers = w.p * np.stack([np.cos(spec.angles), np.sin(spec.angles)], axis=-1)  # (N, 2)
    c2 = (centers**2).sum(axis=1)
    n_ang = len(centers)
    for cells, cols in groups:
        pts = points[cols]  # (n, 2)
        n = len(pts)
        step = max(1, _CHUNK_ELEMENTS // max(1, n_ang * n))
        for start in range(0, len(cells), step):
            block = cells[start : start + step]
            xi = omegas[block][:, None, :] + pts[None, :, :]  # (m, n, 2)
            # |xi - c_k|^2 expanded to avoid an (m, n, N, 2) intermediate
            d2 = (xi**2).sum(axis=-1)[:, :, None] - 2.0 * (xi @ centers.T) + c2
            f = np.exp(-2.0 * np.pi**2 * w.sigma**2 * d2)  # (m, n, N)
            f = f * np.exp(-1j * TWO_PI * (xi @ alpha.T))
            g = np.matmul(f.conj(), np.swapaxes(f, 1, 2))  # (m, n, n) = F^H F per cell
            try:
                vals = np.linalg.eigvalsh(g)
            except np.linalg.LinAlgError:
                vals = _eig_fallback(g, omegas[block])
            lam_min_row[block] = vals[:, 0]
            lam_max_row[block] = vals[:, -1]


def _eig_fallback(g: np.ndarray, omegas: np.ndarray) -> np.ndarray:
    # isolate the failing cell so the error names its frequency
    vals = np.empty(g.shape[:2])
    for i in range(len(g)):
        try:
            vals[i] = np.linalg.eigvalsh(g[i])
        except np.linalg.LinAlgError as exc:
            raise NoConvergence(f"eigensolver failed at omega={omegas[i]}") from exc
    return vals


def sweep(spec: SamplingSpec, cfg: SweepConfig, threads: int | None = None) -> SpectralField:
    """Run the full spectral sweep; see the module docstring."""
    dual = annihilator(spec.lattice)
    omegas = omega_grid(centered_cell(dual), cfg.grid_size)
    _, points, masks = ball_masks(omegas, spec.rho, dual)
    counts = masks.sum(axis=1).astype(np.int64)
    groups = _groups(masks)
    n_cells = len(omegas)
    reps = cfg.repetitions
    lam_min = np.full((reps, n_cells), np.nan)
    lam_max = np.full((reps, n_cells), np.nan)

    def run(r: int):
        alpha = spec.shifts if spec.shifts is not None else draw_shifts(
            cfg.seed, r, spec.n_generators
        )
        _sweep_one_repetition(spec, omegas, points, groups, alpha, lam_min[r], lam_max[r])

    if threads is not None and threads > 1 and reps > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(run, range(reps)))
    else:
        for r in range(reps):
            run(r)
    return SpectralField(
        omegas=omegas, grid_size=cfg.grid_size, counts=counts, lam_min=lam_min, lam_max=lam_max
    )


def frame_report(field: SpectralField, covol: float, n_generators: int) -> FrameReport:
    """Aggregate a SpectralField into frame bounds and condition numbers.

    covol is the area of the swept cell; empty cells are excluded from the
    bound aggregation but still count toward max_count (as 0).
    """
    valid = field.counts > 0
    if not valid.any():
        return FrameReport(
            lower=0.0, upper=0.0, kappa=float("inf"),
            kappa_reps=np.full(field.lam_min.shape[0], np.inf),
            kappa_mean=float("inf"), kappa_std=float("nan"),
            feasible=False, degenerate=True, max_count=0,
        )
    mins = field.lam_min[:, valid]
    maxs = field.lam_max[:, valid]
    lower = covol * float(mins.min())
    upper = covol * float(maxs.max())
    rep_lower = mins.min(axis=1)
    rep_upper = maxs.max(axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        kappa_reps = np.where(rep_lower > 0, rep_upper / rep_lower, np.inf)
        kappa = upper / lower if lower > 0 else float("inf")
    finite = np.isfinite(kappa_reps)
    kappa_mean = float(kappa_reps[finite].mean()) if finite.any() else float("inf")
    kappa_std = float(kappa_reps[finite].std()) if finite.any() else float("nan")
    max_count = int(field.counts.max())
    degenerate = not (lower > DEGENERATE_RATIO * upper)
    feasible = (n_generators >= max_count) and not degenerate
    return FrameReport(
        lower=lower, upper=upper, kappa=float(kappa), kappa_reps=kappa_reps,
        kappa_mean=kappa_mean, kappa_std=kappa_std, feasible=feasible,
        degenerate=degenerate, max_count=max_count,
    )


def write_field_csv(field: SpectralField, path) -> None:
    """One row per grid cell; empty lambda columns where the index set is empty."""
    mean_min = field.mean_lam_min
    mean_max = field.mean_lam_max
    with open(path, "w", newline="", encoding="utf-8") as fh:
        out = csv.writer(fh)
        out.writerow(["omega1", "omega2", "n", "mean_lambda_min", "mean_lambda_max"])
        for i in range(len(field.omegas)):
            if field.counts[i] > 0:
                lo, hi = f"{mean_min[i]:.17g}", f"{mean_max[i]:.17g}"
            else:
                lo = hi = ""
            out.writerow(
                [f"{field.omegas[i, 0]:.17g}", f"{field.omegas[i, 1]:.17g}",
                 int(field.counts[i]), lo, hi]
            )


def write_field_pngs(field: SpectralField, outdir, floor: float = 1e-16) -> list:
    """Optional log10 heat maps of the averaged extreme eigenvalue fields."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    m = field.grid_size
    written = []
    for name, data in (("lambda_min", field.mean_lam_min), ("lambda_max", field.mean_lam_max)):
        img = np.log10(np.maximum(np.nan_to_num(data, nan=floor), floor)).reshape(m, m)
        fig, ax = plt.subplots(figsize=(5, 4))
        lo = field.omegas.min(axis=0)
        hi = field.omegas.max(axis=0)
        pic = ax.imshow(img.T, origin="lower", extent=(lo[0], hi[0], lo[1], hi[1]), aspect="equal")
        fig.colorbar(pic, ax=ax, label=f"log10 {name}")
        ax.set_xlabel("omega1")
        ax.set_ylabel("omega2")
        path = f"{outdir}/{name}.png"
        fig.savefig(path, dpi=150, bbox_inches="tight")
        plt.close(fig)
        written.append(path)
    return written


__all__ = [
    "SweepConfig", "SpectralField", "FrameReport", "omega_grid", "draw_shifts",
    "sweep", "frame_report", "write_field_csv", "write_field_pngs", "covolume",
]
