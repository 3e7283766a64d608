"""Tests for closed-form generators and their analytic modulation laws."""

import dataclasses

import numpy as np
import pytest
from scipy.special import jv

import hsakit as hk
from hsakit.errors import ContractError

FS = 8000.0
N = 8000
CENTRAL = slice(800, 7200)

TRI = hk.TriangleParams(amplitude=1.0, omega0=2.0 * np.pi * 25.0)
PERIOD_SAMPLES = 320  # 25 Hz fundamental on the 8 kHz grid


def _times(n=N, fs=FS):
    return np.arange(n) / fs


# ---------------------------------------------------------------------------
# triangle generator and Fourier coefficients
# ---------------------------------------------------------------------------


def test_triangle_params_validation():
    with pytest.raises(ContractError):
        hk.TriangleParams(amplitude=0.0, omega0=1.0)
    with pytest.raises(ContractError):
        hk.TriangleParams(amplitude=1.0, omega0=-2.0)


def test_triangle_sample_values():
    x = hk.gen_triangle(TRI, N, FS).samples
    assert x[0] == TRI.amplitude
    assert abs(x[PERIOD_SAMPLES // 4]) <= 1e-12  # quarter period
    assert abs(np.mean(x[:PERIOD_SAMPLES])) <= 1e-12
    # periodic continuation
    assert np.allclose(x[PERIOD_SAMPLES:], x[:-PERIOD_SAMPLES], atol=1e-12)


def test_triangle_fs_coefficient_values():
    a0, w0 = hk.triangle_fs_coeffs(TRI, 0)
    a1, w1 = hk.triangle_fs_coeffs(TRI, 1)
    assert a0 == pytest.approx(0.8105694691387022, abs=1e-15)
    assert w0 == TRI.omega0
    assert a1 == pytest.approx(0.09006327434874469, abs=1e-15)
    assert w1 == 3.0 * TRI.omega0
    with pytest.raises(ContractError):
        hk.triangle_fs_coeffs(TRI, -1)


def test_triangle_fs_truncation_error():
    t = _times()
    tri = hk.gen_triangle(TRI, N, FS).samples
    synth = np.zeros(N)
    for k in range(51):
        amp, omega = hk.triangle_fs_coeffs(TRI, k)
        synth += amp * np.cos(omega * t)
    err = synth - tri
    # rms error sits under 4e-4 * A; the peak error at the corners is the
    # series tail, about 3.97e-3 * A
    assert np.sqrt(np.mean(err**2)) <= 4e-4 * TRI.amplitude
    assert 3.9e-3 <= np.max(np.abs(err)) <= 4.1e-3


# ---------------------------------------------------------------------------
# triangle solutions: constant-amplitude, constant-frequency, harmonic
# ---------------------------------------------------------------------------


def test_triangle_fm_solution_laws():
    sol = hk.triangle_fm_solution(TRI, N, FS)
    assert np.all(sol.ia == TRI.amplitude)
    k_mid = int(round(0.51 * FS))  # zero crossing of the waveform
    assert sol.if_[k_mid] == pytest.approx(2.0 * TRI.omega0 / np.pi, rel=1e-12)
    assert sol.singular is not None and sol.singular.sum() > 0
    # synthesized observation is the triangle itself
    assert np.array_equal(sol.s, hk.gen_triangle(TRI, N, FS).samples)


def test_triangle_fm_phase_advances_one_turn_per_period():
    sol = hk.triangle_fm_solution(TRI, N, FS)
    theta = np.unwrap(np.arctan2(sol.sigma, sol.s))
    adv = theta[PERIOD_SAMPLES:] - theta[:-PERIOD_SAMPLES]
    assert np.max(np.abs(adv - 2.0 * np.pi)) <= 1e-6
    # the saturated samples at the corners keep the discrete mean finite
    # but shave a few percent off the period average
    mean_if = np.mean(sol.if_[:PERIOD_SAMPLES])
    assert abs(mean_if - TRI.omega0) / TRI.omega0 <= 0.06


def test_triangle_fm_needs_adequate_rate():
    with pytest.raises(ContractError):
        hk.triangle_fm_solution(TRI, 8, 80.0)


def test_triangle_am_solution_laws():
    sol = hk.triangle_am_solution(TRI, N, FS)
    t = _times()
    assert np.all(sol.if_ == TRI.omega0)
    assert sol.ia[0] == TRI.amplitude
    ok = ~sol.singular
    rec = sol.ia * np.cos(TRI.omega0 * t)
    assert np.max(np.abs(rec[ok] - sol.s[ok])) <= 1e-12
    assert np.array_equal(sol.s, hk.gen_triangle(TRI, N, FS).samples)


def test_triangle_hc_solution_converges():
    # 27 Hz keeps the high harmonics off the DC alias of the 8 kHz grid,
    # so the partial-sum mean is a clean convergence probe
    p27 = hk.TriangleParams(amplitude=1.0, omega0=2.0 * np.pi * 27.0)
    c27 = hk.triangle_hc_solution(p27, N, FS, k_max=1000)
    f27 = hk.triangle_hc_solution(p27, N, FS, k_max=10000)
    assert abs(np.mean(f27.ia) - np.mean(c27.ia)) <= 1e-6
    # partial sums synthesize the triangle to the series tail
    fine = hk.triangle_hc_solution(TRI, N, FS, k_max=10000)
    tri = hk.gen_triangle(TRI, N, FS).samples
    assert np.max(np.abs(fine.s - tri)) <= 1e-4
    assert fine.singular is None


def test_triangle_hc_degenerates_to_fundamental():
    sol = hk.triangle_hc_solution(TRI, N, FS, k_max=1)
    assert np.max(np.abs(sol.ia - 8.0 * TRI.amplitude / np.pi**2)) == 0.0
    assert np.max(np.abs(sol.if_ - TRI.omega0)) == 0.0
    with pytest.raises(ContractError):
        hk.triangle_hc_solution(TRI, N, FS, k_max=0)


def test_triangle_hc_matches_analytic_demodulation():
    sol = hk.triangle_hc_solution(TRI, N, FS)
    comp = hk.gabor_as_demod(hk.SampledSignal(hk.gen_triangle(TRI, N, FS).samples, FS))
    ia_err = np.sqrt(np.mean((sol.ia[CENTRAL] - comp.ia[CENTRAL]) ** 2))
    ia_ref = np.sqrt(np.mean(comp.ia[CENTRAL] ** 2))
    if_err = np.sqrt(np.mean((sol.if_[CENTRAL] - comp.if_[CENTRAL]) ** 2))
    if_ref = np.sqrt(np.mean(comp.if_[CENTRAL] ** 2))
    assert ia_err / ia_ref <= 0.01
    assert if_err / if_ref <= 0.01


# ---------------------------------------------------------------------------
# sinusoidal FM and Bessel expansion
# ---------------------------------------------------------------------------


def test_sin_fm_params_validation():
    with pytest.raises(ContractError):
        hk.SinFMParams(omega_c=0.0, omega_m=1.0, b=1.0)
    with pytest.raises(ContractError):
        hk.SinFMParams(omega_c=1.0, omega_m=-1.0, b=1.0)
    with pytest.raises(ContractError):
        hk.SinFMParams(omega_c=1.0, omega_m=1.0, b=-0.5)


def test_sin_fm_sample_values():
    p = hk.SinFMParams(omega_c=2 * np.pi * 350, omega_m=2 * np.pi * 4, b=2.0)
    sig = hk.gen_sin_fm(p, N, FS)
    assert sig.samples[0] == 1.0
    # zero index degenerates to the bare carrier
    p0 = hk.SinFMParams(omega_c=2 * np.pi * 100, omega_m=2 * np.pi * 4, b=0.0)
    assert np.array_equal(
        hk.gen_sin_fm(p0, N, FS).samples, np.cos(2 * np.pi * 100 * _times())
    )


def test_sin_fm_solution_laws():
    p = hk.SinFMParams(omega_c=2 * np.pi * 350, omega_m=2 * np.pi * 4, b=2.0)
    sol = hk.sin_fm_solution(p, N, FS)
    t = _times()
    expect_if = p.omega_c + p.b * p.omega_m * np.cos(p.omega_m * t)
    assert np.array_equal(sol.if_, expect_if)
    assert np.all(sol.ia == 1.0)
    assert np.array_equal(sol.s, hk.gen_sin_fm(p, N, FS).samples)


def test_bessel_values_against_reference():
    for x in (12.5, 25.0):
        for k in range(0, 60):
            assert abs(hk.bessel_j(k, x) - jv(k, x)) <= 1e-10


def test_bessel_special_points():
    assert hk.bessel_j(0, 0.0) == 1.0
    for k in (1, 2, 5):
        assert hk.bessel_j(k, 0.0) == 0.0
    # reflection in the order
    for k in (1, 2, 3, 7):
        assert hk.bessel_j(-k, 5.0) == (-1.0) ** k * hk.bessel_j(k, 5.0)


def test_bessel_energy_identity():
    x = 12.5
    total = hk.bessel_j(0, x) ** 2
    k = 1
    while True:
        term = 2.0 * hk.bessel_j(k, x) ** 2
        total += term
        if term < 1e-14:
            break
        k += 1
    assert abs(total - 1.0) <= 1e-12


def test_bessel_partial_synthesis():
    p = hk.SinFMParams(omega_c=2 * np.pi * 350, omega_m=2 * np.pi * 4, b=12.5)
    sig = hk.gen_sin_fm(p, N, FS)
    span = int(p.b + 20)
    coeffs = hk.sin_fm_bessel_coeffs(p, range(-span, span + 1))
    t = _times()
    synth = np.zeros(N)
    for k, amp, omega in coeffs:
        assert omega == p.omega_c + k * p.omega_m
        synth += amp * np.cos(omega * t)
    assert np.max(np.abs(synth - sig.samples)) <= 1e-6


# ---------------------------------------------------------------------------
# worked examples
# ---------------------------------------------------------------------------


def test_example1_envelope_peak_and_terminal_frequency():
    spec = hk.example1_spec("hz")
    _, ia, _ = hk.gen_example_signal(spec, N, FS)
    assert ia[int(0.5 * FS)] == 1.0
    # the exponential ramp settles 2000 Hz below the carrier
    settled = spec.carrier + float(spec.fm_law(np.array([100.0]))[0])
    assert abs(settled - 1000.0) <= 1e-6


def test_example1_units_modes_agree():
    x_hz, ia_hz, if_hz = hk.gen_example_signal(hk.example1_spec("hz"), N, FS)
    x_rad, ia_rad, if_rad = hk.gen_example_signal(hk.example1_spec("rad_per_s"), N, FS)
    assert np.max(np.abs(x_hz.samples - x_rad.samples)) <= 1e-9
    assert np.array_equal(ia_hz, ia_rad)
    # true IF is reported in rad/s regardless of the generator's units
    assert np.max(np.abs(if_hz - if_rad)) <= 1e-9


def test_example2_sample_values():
    spec = hk.example2_spec()
    _, ia, if_ = hk.gen_example_signal(spec, N, FS)
    assert ia[0] == 0.5
    assert spec.carrier == pytest.approx(1000.0 * np.pi, rel=1e-15)
    assert if_[0] == pytest.approx(1000.0 * np.pi, rel=1e-12)


def test_example_numeric_integral_fallback():
    spec = hk.example1_spec("hz")
    exact, _, _ = hk.gen_example_signal(spec, N, FS)
    numeric, _, _ = hk.gen_example_signal(
        dataclasses.replace(spec, fm_integral=None), N, FS
    )
    assert np.max(np.abs(numeric.samples - exact.samples)) <= 5e-3


# ---------------------------------------------------------------------------
# two-tone
# ---------------------------------------------------------------------------


def test_two_tone_values_and_envelope():
    wa, wb = 2 * np.pi * 100.0, 2 * np.pi * 110.0
    t = _times()
    x = hk.gen_two_tone(wa, wb, N, FS)
    assert np.array_equal(x.samples, np.cos(wa * t) + np.cos(wb * t))
    env = hk.two_tone_envelope(wa, wb, t)
    assert env[0] == 2.0
    # the beat envelope bounds the waveform
    assert np.max(np.abs(x.samples) - env) <= 1e-12


def test_two_tone_degenerate_pair():
    w = 2 * np.pi * 100.0
    t = _times()
    x = hk.gen_two_tone(w, w, N, FS)
    assert np.array_equal(x.samples, 2.0 * np.cos(w * t))
    assert np.max(np.abs(hk.two_tone_envelope(w, w, t) - 2.0)) == 0.0


def test_two_tone_ordering_contract():
    with pytest.raises(ContractError):
        hk.gen_two_tone(2.0, 1.0, N, FS)
    with pytest.raises(ContractError):
        hk.gen_two_tone(-1.0, 2.0, N, FS)
