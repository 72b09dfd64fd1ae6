"""Command line driver.

Subcommands map onto the experiment protocol: `analyze` runs the spectral
sweep and frame report, `count` and `calderon` emit diagnostic frequency
fields, `covering` evaluates the cutoff bounds, `oracle` runs the sampled
energy identity check, and `gramian` dumps a single fiber matrix.

Exit codes: 0 success, 1 configuration error, 2 numerical failure,
3 degenerate frame (analyze only; the report is still written).
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import sys
from pathlib import Path

import numpy as np

from .config import (
    ConfigError,
    ExperimentConfig,
    parse_config,
    to_sampling_spec,
    to_test_function,
)
from .cutoff import covering_counts, cutoff_frame_bounds, heuristic_check
from .framefield import (
    FrameReport,
    SweepConfig,
    draw_shifts,
    frame_report,
    omega_grid,
    sweep,
    write_field_csv,
    write_field_pngs,
)
from .gramian import build_gramian, spectrum
from .lattice import annihilator, centered_cell, count_field, covolume
from .oracle import energy_sum, quadratic_form_integral
from .wavelet import calderon_semidiscrete


def _num(x):
    # JSON has no inf/nan; emit null instead
    x = float(x)
    return x if np.isfinite(x) else None


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _outdir(cfg: ExperimentConfig) -> Path:
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _with_shifts(cfg: ExperimentConfig):
    """Sampling spec with explicit shifts, drawing repetition 0 if none given."""
    spec = to_sampling_spec(cfg)
    if spec.shifts is None:
        alpha = draw_shifts(cfg.seed, 0, spec.n_generators)
        spec = dataclasses.replace(spec, shifts=alpha)
    return spec


def _report_doc(report: FrameReport) -> dict:
    return {
        "lower": _num(report.lower),
        "upper": _num(report.upper),
        "kappa": _num(report.kappa),
        "kappa_mean": _num(report.kappa_mean),
        "kappa_std": _num(report.kappa_std),
        "kappa_reps": [_num(k) for k in report.kappa_reps],
        "feasible": report.feasible,
        "degenerate": report.degenerate,
        "max_count": report.max_count,
    }


def _print_report(report: FrameReport, cfg: ExperimentConfig, n: int) -> None:
    print(f"grid {cfg.grid}x{cfg.grid}, repetitions {cfg.repetitions}, N = {n}")
    print(f"max n(omega) = {report.max_count}")
    print(f"feasible: {'yes' if report.feasible else 'no'}")
    print(f"A = {report.lower:.6g}")
    print(f"B = {report.upper:.6g}")
    print(f"kappa (pooled extremes) = {report.kappa:.6g}")
    print(f"kappa (per repetition)  = {report.kappa_mean:.6g} +/- {report.kappa_std:.6g}")
    if report.degenerate:
        print("degenerate frame: lower bound below 1e-14 of upper")


def cmd_analyze(cfg: ExperimentConfig, threads=None, png=False) -> int:
    spec = to_sampling_spec(cfg)
    field = sweep(spec, SweepConfig(cfg.grid, cfg.repetitions, cfg.seed), threads=threads)
    covol = covolume(annihilator(spec.lattice))
    report = frame_report(field, covol, spec.n_generators)
    out = _outdir(cfg)
    write_field_csv(field, out / "field.csv")
    (out / "report.json").write_text(
        json.dumps(_report_doc(report), indent=2) + "\n", encoding="utf-8"
    )
    if png:
        write_field_pngs(field, out)
    _print_report(report, cfg, spec.n_generators)
    return 3 if report.degenerate else 0


def cmd_count(cfg: ExperimentConfig, threads=None, png=False) -> int:
    spec = to_sampling_spec(cfg)
    dual = annihilator(spec.lattice)
    omegas = omega_grid(centered_cell(dual), cfg.grid)
    counts, peak = count_field(omegas, cfg.rho, dual)
    out = _outdir(cfg)
    with open(out / "count.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["omega1", "omega2", "n"])
        for i in range(len(omegas)):
            w.writerow([_fmt(omegas[i, 0]), _fmt(omegas[i, 1]), int(counts[i])])
    print(f"grid {cfg.grid}x{cfg.grid}, rho = {cfg.rho:.6g}")
    print(f"max n(omega) = {peak}")
    if spec.n_generators < peak:
        print(f"infeasible: N = {spec.n_generators} < max n(omega) = {peak}")
    return 0


def cmd_calderon(cfg: ExperimentConfig, threads=None, png=False) -> int:
    spec = to_sampling_spec(cfg)
    m = cfg.grid
    t = cfg.rho * (2.0 * (np.arange(m) + 0.5) / m - 1.0)
    x1, x2 = np.meshgrid(t, t, indexing="ij")
    xi = np.stack([x1, x2], axis=-1).reshape(-1, 2)
    values = calderon_semidiscrete(xi, spec.wavelet, spec.angles)
    inside = (xi**2).sum(axis=1) < cfg.rho**2
    out = _outdir(cfg)
    with open(out / "calderon.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["xi1", "xi2", "c_psi", "reciprocal_in_ball"])
        for i in range(len(xi)):
            rec = _fmt(1.0 / values[i]) if inside[i] and values[i] > 0 else ""
            w.writerow([_fmt(xi[i, 0]), _fmt(xi[i, 1]), _fmt(values[i]), rec])
    ball = values[inside]
    print(f"grid {m}x{m} over [{-cfg.rho:.6g}, {cfg.rho:.6g}]^2, N = {spec.n_generators}")
    print(f"C_psi range inside the ball: [{ball.min():.6g}, {ball.max():.6g}]")
    print(f"reciprocal max inside the ball: {1.0 / ball.min():.6g}")
    return 0


def cmd_covering(cfg: ExperimentConfig, threads=None, png=False) -> int:
    spec = to_sampling_spec(cfg)
    count = covering_counts(cfg.p, cfg.length, cfg.rho, spec.angles, cfg.covering_resolution)
    bounds = cutoff_frame_bounds(count, cfg.length, cfg.sigma)
    heur = heuristic_check(cfg.p, cfg.length, cfg.rho)
    out = _outdir(cfg)
    doc = {
        "m": count.m,
        "big_m": count.big_m,
        "resolution": count.resolution,
        "lower": _num(bounds.lower),
        "upper": _num(bounds.upper),
        "kappa_bound": _num(bounds.kappa_bound),
        "degenerate": bounds.degenerate,
        "origin_covered": heur.origin_covered,
        "rim_covered": heur.rim_covered,
    }
    (out / "covering.json").write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    print(f"covering multiplicity over B(0, {cfg.rho:.6g}): m = {count.m}, "
          f"M = {count.big_m} (resolution {count.resolution})")
    print(f"window length L = {cfg.length:.6g}, sigma = {cfg.sigma:.6g}")
    print(f"lower bound = {bounds.lower:.6g}")
    print(f"upper bound = {bounds.upper:.6g}")
    if bounds.degenerate:
        print("warning: m = 0, some frequency is uncovered; no positive lower bound")
    else:
        print(f"kappa bound = {bounds.kappa_bound:.6g}")
    print(heur.summary())
    return 0


def cmd_oracle(cfg: ExperimentConfig, threads=None, png=False) -> int:
    spec = _with_shifts(cfg)
    f = to_test_function(cfg)
    lhs = energy_sum(f, spec, tail_tol=cfg.tail_tol)
    rhs = quadratic_form_integral(f, spec, grid_size=cfg.quad_grid)
    rel = abs(lhs - rhs) / max(abs(rhs), 1e-300)
    out = _outdir(cfg)
    doc = {
        "energy_sum": _num(lhs),
        "quadratic_form_integral": _num(rhs),
        "relative_error": _num(rel),
        "tail_tol": cfg.tail_tol,
        "bumps": len(f.bumps),
    }
    (out / "oracle.json").write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    print(f"energy sum (spatial side)       = {lhs:.12g}")
    print(f"quadratic form (frequency side) = {rhs:.12g}")
    print(f"relative error = {rel:.3e}")
    return 0


def cmd_gramian(cfg: ExperimentConfig, threads=None, png=False) -> int:
    spec = _with_shifts(cfg)
    omega = np.asarray(cfg.omega, dtype=float)
    g = build_gramian(omega, spec)
    out = _outdir(cfg)
    with open(out / "gramian.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["i", "j", "re", "im"])
        for i in range(g.dim):
            for j in range(g.dim):
                w.writerow([i, j, _fmt(g.entries[i, j].real), _fmt(g.entries[i, j].imag)])
    print(f"omega = ({omega[0]:.6g}, {omega[1]:.6g}), n(omega) = {g.dim}")
    if g.is_empty:
        print("index set is empty; nothing to diagonalize")
        return 0
    herm = np.abs(g.entries - g.entries.conj().T).max()
    scale = max(np.abs(g.entries).max(), 1e-300)
    print(f"hermitian: {'PASS' if herm <= 1e-13 * scale else 'FAIL'} "
          f"(max asymmetry {herm:.3e})")
    spec_g = spectrum(g)
    with open(out / "spectrum.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["k", "eigenvalue"])
        for k, lam in enumerate(spec_g.eigenvalues):
            w.writerow([k, _fmt(lam)])
    if g.dim == 1:
        print(f"1x1 matrix value = {g.entries[0, 0].real:.12g}")
    lam = spec_g.eigenvalues
    print(f"spectrum (ascending): min = {lam[0]:.6g}, max = {lam[-1]:.6g}")
    return 0


_DISPATCH = {
    "analyze": cmd_analyze,
    "count": cmd_count,
    "calderon": cmd_calderon,
    "covering": cmd_covering,
    "oracle": cmd_oracle,
    "gramian": cmd_gramian,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="se2frames",
        description="Frame analysis of shifted-lattice rotated wavelet sampling.",
    )
    sub = ap.add_subparsers(dest="command", required=True)
    helps = {
        "analyze": "spectral sweep over the fundamental cell and frame report",
        "count": "index-set cardinality field n(omega)",
        "calderon": "semidiscrete angular energy field and its reciprocal",
        "covering": "frequency-cutoff covering counts and explicit bounds",
        "oracle": "sampled energy identity check (spatial vs frequency side)",
        "gramian": "single fiber matrix dump and spectrum",
    }
    for name, text in helps.items():
        sp = sub.add_parser(name, help=text)
        sp.add_argument("--config", required=True, help="JSON config path")
        sp.add_argument("--out", default=None, help="output directory (overrides config)")
        sp.add_argument("--threads", type=int, default=None, help="parallelism cap")
        sp.add_argument("--grid", type=int, default=None, help="grid size override")
        sp.add_argument("--reps", type=int, default=None, help="repetition override")
        sp.add_argument("--seed", type=int, default=None, help="seed override")
        sp.add_argument("--png", action="store_true", help="also write log10 heatmaps")
        if name == "gramian":
            sp.add_argument("--omega", type=float, nargs=2, default=None,
                            metavar=("W1", "W2"), help="probe frequency override")
    return ap


def _apply_overrides(cfg: ExperimentConfig, args) -> ExperimentConfig:
    changes = {}
    if args.out is not None:
        changes["output_dir"] = args.out
    if args.grid is not None:
        changes["grid"] = args.grid
    if args.reps is not None:
        changes["repetitions"] = args.reps
    if args.seed is not None:
        changes["seed"] = args.seed
    if getattr(args, "omega", None) is not None:
        changes["omega"] = tuple(args.omega)
    return dataclasses.replace(cfg, **changes) if changes else cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text = Path(args.config).read_text(encoding="utf-8")
    except OSError as exc:
        print(f"config error: cannot read {args.config}: {exc}", file=sys.stderr)
        return 1
    try:
        cfg = _apply_overrides(parse_config(text), args)
        return _DISPATCH[args.command](cfg, threads=args.threads, png=args.png)
    except (ArithmeticError, RuntimeError, np.linalg.LinAlgError) as exc:
        # LinAlgError subclasses ValueError, so it must be routed first
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
