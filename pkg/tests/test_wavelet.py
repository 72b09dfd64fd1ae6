"""Wavelet profiles, Bessel evaluation, and the angular energy closed form.

Oracles: dense numerical Fourier quadrature for the spatial/frequency pair,
scipy's i0/i0e for the Bessel series, and a trapezoid rule in the angle for
the closed-form angular energy.
"""

import numpy as np
import pytest
import scipy.special

from se2frames.sampling import uniform_angles
from se2frames.wavelet import (
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

W = WaveletParams(p=0.5, sigma=2 / np.pi)


def test_params_validated():
    with pytest.raises(ValueError):
        WaveletParams(p=-0.5, sigma=0.3)
    with pytest.raises(ValueError):
        WaveletParams(p=0.5, sigma=0.0)


def test_hat_peak_at_carrier():
    # profile peaks with value 1 at xi = (p, 0)
    assert wavelet_hat(np.array([W.p, 0.0]), W) == pytest.approx(1.0)
    assert wavelet_hat(np.array([W.p + 0.3, 0.1]), W) < 1.0


def test_hat_explicit_value():
    xi = np.array([0.0, 0.0])
    want = np.exp(-2.0 * np.pi**2 * W.sigma**2 * W.p**2)
    assert wavelet_hat(xi, W) == pytest.approx(want, rel=1e-15)


def test_spatial_hat_fourier_pair():
    # quadrature of psi(x) e^{-2 pi i x.xi} over a wide box reproduces the hat
    n = 400
    half = 8.0 * W.sigma
    t = -half + 2 * half * (np.arange(n) + 0.5) / n
    x1, x2 = np.meshgrid(t, t, indexing="ij")
    x = np.stack([x1, x2], axis=-1).reshape(-1, 2)
    vals = wavelet_spatial(x, W)
    h2 = (2 * half / n) ** 2
    rng = np.random.default_rng(0)
    for _ in range(6):
        xi = rng.uniform(-1.0, 1.0, size=2)
        ft = (vals * np.exp(-2j * np.pi * (x @ xi))).sum() * h2
        assert ft == pytest.approx(wavelet_hat(xi, W), abs=1e-10)


def test_spatial_l2_norm():
    # ||psi||^2 = ||psi_hat||^2 = (integral of e^{-4 pi^2 s^2 |u|^2} du) = 1/(4 pi s^2)
    n = 600
    half = 10.0 * W.sigma
    t = -half + 2 * half * (np.arange(n) + 0.5) / n
    x1, x2 = np.meshgrid(t, t, indexing="ij")
    x = np.stack([x1, x2], axis=-1).reshape(-1, 2)
    vals = wavelet_spatial(x, W)
    norm2 = (np.abs(vals) ** 2).sum() * (2 * half / n) ** 2
    assert norm2 == pytest.approx(1.0 / (4 * np.pi * W.sigma**2), rel=1e-8)


def test_rotation_moves_carrier():
    theta = 0.73
    peak = W.p * np.array([np.cos(theta), np.sin(theta)])
    assert wavelet_hat_rotated(peak, theta, W) == pytest.approx(1.0)
    # rotation in frequency equals the rotated-argument evaluation
    rng = np.random.default_rng(1)
    for _ in range(10):
        xi = rng.uniform(-1.5, 1.5, size=2)
        rot = np.array([[np.cos(theta), np.sin(theta)], [-np.sin(theta), np.cos(theta)]])
        assert wavelet_hat_rotated(xi, theta, W) == pytest.approx(
            wavelet_hat(rot @ xi, W), rel=1e-14
        )


def test_generator_hat_phase():
    alpha = np.array([0.37, -0.12])
    gen = Generator(params=W, theta=0.5, alpha=alpha)
    rng = np.random.default_rng(2)
    for _ in range(10):
        xi = rng.uniform(-1.5, 1.5, size=2)
        want = np.exp(-2j * np.pi * (alpha @ xi)) * wavelet_hat_rotated(xi, 0.5, W)
        assert generator_hat(xi, gen) == pytest.approx(want, rel=1e-14)


def test_generator_hat_zero_shift_is_rotated_hat():
    gen = Generator(params=W, theta=1.1, alpha=np.zeros(2))
    xi = np.array([0.4, -0.3])
    assert generator_hat(xi, gen) == pytest.approx(wavelet_hat_rotated(xi, 1.1, W))


def test_bessel_i0_against_scipy():
    x = np.concatenate([np.geomspace(1e-8, 700.0, 300), [0.0]])
    np.testing.assert_allclose(bessel_i0(x), scipy.special.i0(x), rtol=1e-13)


def test_bessel_i0_scaled_against_scipy():
    x = np.concatenate([[0.0], np.geomspace(1e-8, 1e6, 400)])
    np.testing.assert_allclose(bessel_i0_scaled(x), scipy.special.i0e(x), rtol=1e-13)


def test_bessel_i0_scaled_series_asymptotic_seam():
    # continuity across the internal switch point
    x = np.linspace(14.0, 16.0, 81)
    np.testing.assert_allclose(bessel_i0_scaled(x), scipy.special.i0e(x), rtol=1e-13)


def test_bessel_i0_overflow():
    with pytest.raises(OverflowError):
        bessel_i0(720.0)


def test_calderon_continuous_matches_angle_quadrature():
    rng = np.random.default_rng(3)
    n = 20000
    theta = 2 * np.pi * np.arange(n) / n
    for _ in range(8):
        p = rng.uniform(0.1, 1.0)
        sig = rng.uniform(0.1, 0.9)
        w = WaveletParams(p=p, sigma=sig)
        xi = rng.uniform(-1.5, 1.5, size=2)
        vals = np.array([wavelet_hat_rotated(xi, t, w) ** 2 for t in theta])
        quad = vals.sum() * (2 * np.pi / n)
        assert calderon_continuous(xi, w) == pytest.approx(quad, rel=1e-10)


def test_calderon_continuous_origin_value():
    # at xi = 0 the Bessel factor is 1: value is 2 pi e^{-4 pi^2 s^2 p^2}
    want = 2 * np.pi * np.exp(-4 * np.pi**2 * W.sigma**2 * W.p**2)
    assert calderon_continuous(np.zeros(2), W) == pytest.approx(want, rel=1e-14)
    assert want == pytest.approx(2 * np.pi * np.exp(-4.0), rel=1e-14)


def test_calderon_continuous_radial():
    # depends on |xi| only
    r = 0.8
    a = calderon_continuous(np.array([r, 0.0]), W)
    b = calderon_continuous(np.array([0.0, r]), W)
    c = calderon_continuous(r * np.array([np.cos(1.1), np.sin(1.1)]), W)
    assert a == pytest.approx(b, rel=1e-13)
    assert a == pytest.approx(c, rel=1e-13)


def test_calderon_semidiscrete_direct_sum():
    angles = uniform_angles(6)
    xi = np.array([0.3, -0.2])
    want = sum(wavelet_hat_rotated(xi, t, W) ** 2 for t in angles)
    assert calderon_semidiscrete(xi, W, angles) == pytest.approx(want, rel=1e-14)


def test_calderon_semidiscrete_converges_to_continuous():
    xi = np.array([0.6, 0.2])
    for n, tol in [(32, 1e-3), (128, 1e-10)]:
        semi = calderon_semidiscrete(xi, W, uniform_angles(n)) * (2 * np.pi / n)
        assert semi == pytest.approx(calderon_continuous(xi, W), rel=tol)


def test_calderon_semidiscrete_vectorized():
    rng = np.random.default_rng(4)
    xi = rng.uniform(-1, 1, size=(50, 2))
    angles = uniform_angles(5)
    vec = calderon_semidiscrete(xi, W, angles)
    single = np.array([calderon_semidiscrete(x, W, angles) for x in xi])
    np.testing.assert_allclose(vec, single, rtol=1e-14)
