"""Frame analysis of shifted-lattice sampling for rotated wavelet transforms.

The package decides whether wavelet coefficients of band-limited functions,
sampled on unions of shifted copies of a planar lattice (one copy per
rotation angle), form a frame: it sweeps the spectra of the dual Gramian
fibers over the fundamental cell, reports frame bounds and condition
numbers, evaluates explicit frequency-cutoff bounds, and cross-checks the
whole chain against a brute-force sampled-energy oracle.
"""

from .config import (
    ConfigError,
    ExperimentConfig,
    parse_config,
    serialize_config,
    to_sampling_spec,
    to_test_function,
)
from .cutoff import (
    CoveringCount,
    CutoffBounds,
    HeuristicReport,
    covering_counts,
    cutoff_frame_bounds,
    heuristic_check,
)
from .framefield import (
    FrameReport,
    SpectralField,
    SweepConfig,
    draw_shifts,
    frame_report,
    omega_grid,
    sweep,
    write_field_csv,
    write_field_pngs,
)
from .gramian import (
    DualGramian,
    NoConvergence,
    Spectrum,
    build_gramian,
    build_gramian_direct,
    quadratic_form,
    spectral_bounds,
    spectrum,
)
from .lattice import (
    FundamentalCell,
    IndexSet,
    Lattice2D,
    SingularBasis,
    annihilator,
    centered_cell,
    count_field,
    covolume,
    index_set,
    make_lattice,
)
from .oracle import (
    BandLimitedTestFunction,
    FrequencyBump,
    QuadratureStall,
    TailNotConverged,
    bracket,
    energy_sum,
    quadratic_form_integral,
    wavelet_coefficient,
)
from .sampling import SamplingSpec, uniform_angles
from .wavelet import (
    Generator,
    WaveletParams,
    bessel_i0,
    bessel_i0_scaled,
    calderon_continuous,
    calderon_semidiscrete,
    generator_hat,
    wavelet_hat,
    wavelet_hat_rotated,
    wavelet_spatial,
)

__version__ = "0.1.0"

__all__ = [
    "BandLimitedTestFunction", "ConfigError", "CoveringCount", "CutoffBounds",
    "DualGramian", "ExperimentConfig", "FrameReport", "FrequencyBump",
    "FundamentalCell", "Generator", "HeuristicReport", "IndexSet", "Lattice2D",
    "NoConvergence", "QuadratureStall", "SamplingSpec", "SingularBasis",
    "SpectralField", "Spectrum", "SweepConfig", "TailNotConverged",
    "WaveletParams", "annihilator", "bessel_i0", "bessel_i0_scaled", "bracket",
    "build_gramian", "build_gramian_direct", "calderon_continuous",
    "calderon_semidiscrete", "centered_cell", "count_field", "covering_counts",
    "covolume", "cutoff_frame_bounds", "draw_shifts", "energy_sum",
    "frame_report", "generator_hat", "heuristic_check", "index_set",
    "make_lattice", "omega_grid", "parse_config", "quadratic_form",
    "quadratic_form_integral", "serialize_config", "spectral_bounds",
    "spectrum", "sweep", "to_sampling_spec", "to_test_function",
    "uniform_angles", "wavelet_coefficient", "wavelet_hat",
    "wavelet_hat_rotated", "wavelet_spatial", "write_field_csv",
    "write_field_pngs",
]
