"""Signal containers, calculus helpers, and synthesis."""

import numpy as np
import pytest

import hsakit as hk
from hsakit import ContractError

from conftest import rel_rmse, tone


def test_sampled_signal_validation():
    with pytest.raises(ContractError):
        hk.SampledSignal(np.array([]), 100.0)
    with pytest.raises(ContractError):
        hk.SampledSignal(np.zeros((2, 2)), 100.0)
    with pytest.raises(ContractError):
        hk.SampledSignal(np.array([1.0, np.nan]), 100.0)
    with pytest.raises(ContractError):
        hk.SampledSignal(np.array([1.0, 2.0]), 0.0)
    with pytest.raises(ContractError):
        hk.SampledSignal(np.array([1.0, 2.0]), -5.0)


def test_sampled_signal_grid():
    x = hk.SampledSignal([0.0, 1.0, 2.0, 3.0], 2.0, t0=10.0)
    assert len(x) == 4
    assert x.duration == pytest.approx(1.5)
    np.testing.assert_allclose(x.times, [10.0, 10.5, 11.0, 11.5])
    y = x.copy()
    y.samples[0] = 99.0
    assert x.samples[0] == 0.0


def test_component_length_checks():
    with pytest.raises(ContractError):
        hk.AMFMComponent(s=np.zeros(5), sample_rate=10.0, ia=np.zeros(4))
    with pytest.raises(ContractError):
        hk.AMFMComponent(s=np.zeros(5), sample_rate=10.0, singular=np.zeros(4, dtype=bool))


def test_component_from_modulations_consistency():
    fs = 1000.0
    n = 1000
    ia = 1.0 + 0.3 * np.sin(2.0 * np.pi * 2.0 * np.arange(n) / fs)
    if_ = np.full(n, 2.0 * np.pi * 50.0)
    c = hk.AMFMComponent.from_modulations(ia, if_, phase_ref=0.4, sample_rate=fs)
    theta = c.theta()
    np.testing.assert_allclose(c.s, c.ia * np.cos(theta), atol=1e-12)
    np.testing.assert_allclose(c.sigma, c.ia * np.sin(theta), atol=1e-12)
    assert c.is_demodulated
    assert c.phase_ref == 0.4


def test_synthesize_empty_is_residual():
    r = hk.SampledSignal([1.0, -2.0, 3.0], 10.0)
    out = hk.synthesize([], r)
    np.testing.assert_array_equal(out.samples, r.samples)


def test_synthesize_single_harmonic():
    fs = 1000.0
    n = 1000
    t = np.arange(n) / fs
    c = hk.AMFMComponent.from_modulations(
        np.ones(n), np.full(n, 2.0 * np.pi * 10.0), phase_ref=0.0, sample_rate=fs
    )
    out = hk.synthesize([c], hk.SampledSignal(np.zeros(n), fs))
    assert np.max(np.abs(out.samples - np.cos(2.0 * np.pi * 10.0 * t))) <= 1e-12


def test_synthesize_triangle_partial_sum():
    # 51 Fourier terms of the triangle leave a peak error set by the
    # series tail: (8A/pi^2) * sum_{k>50} (2k+1)^-2 ~= 3.97e-3 * A
    p = hk.TriangleParams(amplitude=1.0, omega0=2.0 * np.pi * 25.0)
    n, fs = 8000, 8000.0
    comps = hk.triangle_shc_components(p, 51, n, fs)
    out = hk.synthesize(comps, hk.SampledSignal(np.zeros(n), fs))
    ref = hk.gen_triangle(p, n, fs)
    err = np.max(np.abs(out.samples - ref.samples))
    assert 3.9e-3 <= err <= 4.1e-3


def test_synthesize_length_mismatch():
    c = hk.AMFMComponent(s=np.zeros(5), sample_rate=10.0)
    with pytest.raises(ContractError):
        hk.synthesize([c], hk.SampledSignal(np.zeros(6), 10.0))


def test_derivative_basics():
    assert np.all(hk.derivative(np.full(10, 3.0), 100.0) == 0.0)
    ramp = 2.0 * np.arange(20) / 10.0
    np.testing.assert_allclose(hk.derivative(ramp, 10.0), 2.0, rtol=1e-12)
    with pytest.raises(ContractError):
        hk.derivative(np.array([1.0, 2.0]), 10.0)


def test_derivative_sine_accuracy():
    fs = 1000.0
    t = np.arange(int(fs)) / fs
    d = hk.derivative(np.sin(2.0 * np.pi * t), fs)
    ref = 2.0 * np.pi * np.cos(2.0 * np.pi * t)
    assert np.max(np.abs(d - ref)) <= 1e-4 * 2.0 * np.pi


def test_cumulative_integral():
    assert np.all(hk.cumulative_integral(np.zeros(8), 10.0) == 0.0)
    fs = 100.0
    n = 200
    ramp = hk.cumulative_integral(np.full(n, 7.0), fs)
    np.testing.assert_allclose(ramp, 7.0 * np.arange(n) / fs, rtol=1e-13)
    # a full period of cos integrates back to ~0
    t = np.arange(1001) / 1000.0
    endpoint = hk.cumulative_integral(np.cos(2.0 * np.pi * t), 1000.0)[-1]
    assert abs(endpoint) <= 1e-6


def test_derivative_inverts_integral():
    # central difference of the trapezoid sum is the (1,2,1)/4 smoother,
    # so the composite is near-identity on smooth signals
    fs = 1000.0
    t = np.arange(2000) / fs
    x = np.sin(2.0 * np.pi * 5.0 * t)
    back = hk.derivative(hk.cumulative_integral(x, fs), fs)
    assert np.max(np.abs(back[1:-1] - x[1:-1])) <= 1e-3
    rng = np.random.default_rng(7)
    y = rng.standard_normal(500)
    back2 = hk.derivative(hk.cumulative_integral(y, 500.0), 500.0)
    ref = 0.25 * (y[:-2] + 2.0 * y[1:-1] + y[2:])
    np.testing.assert_allclose(back2[1:-1], ref, atol=1e-11)


def test_moving_average():
    x = np.array([1.0, 2.0, 3.0, 4.0])
    np.testing.assert_array_equal(hk.moving_average(x, 10.0, 0.0), x)
    const = np.full(30, 5.0)
    np.testing.assert_allclose(hk.moving_average(const, 10.0, 0.7), 5.0)
    impulse = np.zeros(11)
    impulse[5] = 1.0
    sm = hk.moving_average(impulse, 1.0, 5.0)
    np.testing.assert_allclose(sm[3:8], 0.2)
    assert np.all(sm[:3] == 0.0) and np.all(sm[8:] == 0.0)
    with pytest.raises(ContractError):
        hk.moving_average(x, 10.0, -1.0)


def test_spectrum_requires_consistent_grid():
    r = hk.SampledSignal(np.zeros(10), 100.0)
    good = hk.AMFMComponent(s=np.zeros(10), sample_rate=100.0)
    bad = hk.AMFMComponent(s=np.zeros(9), sample_rate=100.0)
    hk.HilbertSpectrum(components=[good], residual=r)
    with pytest.raises(ContractError):
        hk.HilbertSpectrum(components=[bad], residual=r)
    with pytest.raises(ContractError):
        hk.HilbertSpectrum(components=[good], residual=None)


def test_spectrum_synthesize_matches_sum(tone_100):
    out = hk.emd(tone_100)
    rec = out.synthesize()
    assert rel_rmse(rec.samples, tone_100.samples) <= 1e-12
