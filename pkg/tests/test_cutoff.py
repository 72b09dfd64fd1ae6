"""Covering multiplicities and the explicit window-cutoff frame bounds."""

import numpy as np
import pytest

from se2frames.cutoff import covering_counts, cutoff_frame_bounds, heuristic_check
from se2frames.sampling import uniform_angles

SIM1 = dict(p=0.5, length=1.0, rho=2**-0.5, angles=uniform_angles(4))


def brute_counts(p, length, rho, angles, resolution):
    """Direct loop over the same cell-centered polar nodes."""
    half = length / 2.0
    centers = p * np.stack([np.cos(angles), np.sin(angles)], axis=-1)
    lo, hi = None, None
    for i in range(resolution):
        r = rho * (i + 0.5) / resolution
        for j in range(resolution):
            phi = 2 * np.pi * (j + 0.5) / resolution
            pt = np.array([r * np.cos(phi), r * np.sin(phi)])
            d2 = ((pt - centers) ** 2).sum(axis=1)
            c = int((d2 < half * half - 2 * half * 1e-12).sum())
            lo = c if lo is None else min(lo, c)
            hi = c if hi is None else max(hi, c)
    return lo, hi


def test_sim1_covering():
    count = covering_counts(**SIM1, resolution=512)
    assert (count.m, count.big_m) == (1, 2)


def test_counts_match_brute_force():
    rng = np.random.default_rng(0)
    for _ in range(6):
        p = rng.uniform(0.2, 1.2)
        length = rng.uniform(0.4, 2.0)
        rho = rng.uniform(0.4, 2.0)
        n = int(rng.integers(2, 8))
        angles = uniform_angles(n)
        got = covering_counts(p, length, rho, angles, resolution=48)
        want = brute_counts(p, length, rho, angles, 48)
        assert (got.m, got.big_m) == want


def test_counts_stable_under_refinement():
    a = covering_counts(**SIM1, resolution=256)
    b = covering_counts(**SIM1, resolution=512)
    assert (a.m, a.big_m) == (b.m, b.big_m)


def test_m_not_above_big_m():
    rng = np.random.default_rng(1)
    for _ in range(10):
        count = covering_counts(
            rng.uniform(0.2, 1.5), rng.uniform(0.3, 2.0), rng.uniform(0.3, 2.5),
            uniform_angles(int(rng.integers(1, 9))), resolution=64,
        )
        assert 0 <= count.m <= count.big_m


def test_sim1_bound_value():
    count = covering_counts(**SIM1, resolution=512)
    bounds = cutoff_frame_bounds(count, 1.0, 2 / np.pi)
    # m=1, M=2, L=1: kappa bound (M/m) e^{L^2 pi^2 sigma^2} = 2 e^4
    assert bounds.kappa_bound == pytest.approx(2 * np.exp(4.0), rel=1e-12)
    assert bounds.lower == pytest.approx(np.exp(-4.0), rel=1e-12)
    assert bounds.upper == pytest.approx(2.0, rel=1e-12)
    assert not bounds.degenerate


def test_bound_formulas():
    rng = np.random.default_rng(2)
    for _ in range(10):
        m = int(rng.integers(1, 5))
        big = m + int(rng.integers(0, 4))
        length = rng.uniform(0.2, 2.5)
        sigma = rng.uniform(0.1, 1.0)
        count = type(covering_counts(**SIM1, resolution=8))(m=m, big_m=big, resolution=8)
        b = cutoff_frame_bounds(count, length, sigma)
        damp = np.exp(-(length**2) * np.pi**2 * sigma**2)
        assert b.lower == pytest.approx(m * length**2 * damp, rel=1e-13)
        assert b.upper == pytest.approx(big * length**2, rel=1e-13)
        assert b.kappa_bound == pytest.approx(big / m / damp, rel=1e-13)


def test_uncovered_frequency_degenerates():
    # window much smaller than the gap between disc centers and the far rim
    count = covering_counts(0.3, 0.2, 2.0, uniform_angles(3), resolution=64)
    assert count.m == 0
    bounds = cutoff_frame_bounds(count, 0.2, 0.5)
    assert bounds.degenerate
    assert bounds.lower == 0.0
    assert np.isinf(bounds.kappa_bound)


def test_heuristics_sim1():
    heur = heuristic_check(p=0.5, length=1.0, rho=2**-0.5)
    assert heur.origin_covered   # L >= 2p
    assert heur.rim_covered      # rho < p + L/2
    assert "origin" in heur.summary()


def test_heuristics_violations():
    assert not heuristic_check(p=0.8, length=1.0, rho=0.5).origin_covered
    assert not heuristic_check(p=0.5, length=1.0, rho=1.2).rim_covered
    # boundary case rho = p + L/2 is not strict-inside
    assert not heuristic_check(p=0.5, length=1.0, rho=1.0).rim_covered


def test_covering_validates_inputs():
    with pytest.raises(ValueError):
        covering_counts(0.5, -1.0, 1.0, uniform_angles(2), resolution=16)
    with pytest.raises(ValueError):
        covering_counts(0.5, 1.0, 1.0, uniform_angles(2), resolution=0)
