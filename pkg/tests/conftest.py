"""Shared helpers for the test suite."""

import numpy as np
import pytest

import hsakit as hk


def rel_rmse(est: np.ndarray, ref: np.ndarray) -> float:
    """RMS error normalized by the RMS of the reference."""
    est = np.asarray(est, dtype=np.float64)
    ref = np.asarray(ref, dtype=np.float64)
    return float(np.sqrt(np.mean((est - ref) ** 2)) / np.sqrt(np.mean(ref ** 2)))


def tone(freq_hz: float, fs: float = 8000.0, seconds: float = 1.0,
         amp: float = 1.0, phase: float = 0.0) -> hk.SampledSignal:
    n = int(round(fs * seconds))
    t = np.arange(n) / fs
    return hk.SampledSignal(amp * np.cos(2.0 * np.pi * freq_hz * t + phase), fs)


def corpus_mixture(seed: int, fs: float = 8000.0, seconds: float = 2.0) -> hk.SampledSignal:
    """Random 2-3 component mixture of oracle signals, frequency-separated.

    Components are drawn from tones, triangle waves, and mild sinusoidal
    FM, with adjacent scales at least a 4.5x frequency ratio apart so the
    mixtures exercise multi-level decomposition.
    """
    rng = np.random.default_rng(1000 + seed)
    n = int(round(fs * seconds))
    n_comp = int(rng.integers(2, 4))
    t = np.arange(n) / fs
    x = np.zeros(n)
    f = rng.uniform(15.0, 40.0)
    for _ in range(n_comp):
        kind = rng.integers(0, 3)
        amp = rng.uniform(0.5, 2.0)
        if kind == 0:
            x += amp * np.cos(2.0 * np.pi * f * t + rng.uniform(0.0, 2.0 * np.pi))
        elif kind == 1:
            p = hk.TriangleParams(amplitude=amp, omega0=2.0 * np.pi * f)
            x += hk.gen_triangle(p, n, fs).samples
        else:
            p = hk.SinFMParams(omega_c=2.0 * np.pi * f,
                               omega_m=2.0 * np.pi * rng.uniform(0.5, 2.0),
                               b=rng.uniform(1.0, 4.0))
            x += amp * hk.gen_sin_fm(p, n, fs).samples
        f *= rng.uniform(4.5, 6.5)
    return hk.SampledSignal(x, fs)


@pytest.fixture
def tone_100() -> hk.SampledSignal:
    return tone(100.0)
