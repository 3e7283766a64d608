"""Short-time Fourier magnitude, the fixed-resolution baseline.

Kept deliberately plain: hamming window, dense hop, magnitude only.
Exists so the adaptive decomposition has something classical to sit
next to in reports.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ContractError
from .signal import SampledSignal

__all__ = ["STFTParams", "STFTResult", "stft_magnitude"]

_WINDOW_KINDS = ("hamming",)


@dataclass
class STFTParams:
    window_length: int = 1024
    hop: int = 16
    window_kind: str = "hamming"

    def __post_init__(self) -> None:
        if self.window_length < 2:
            raise ContractError(f"window_length must be >= 2, got {self.window_length}")
        if self.hop < 1:
            raise ContractError(f"hop must be >= 1, got {self.hop}")
        if self.window_kind not in _WINDOW_KINDS:
            raise ContractError(f"window_kind must be one of {_WINDOW_KINDS}")


@dataclass
class STFTResult:
    """Frame-center times (s), bin frequencies (Hz), |X| magnitudes."""

    times: np.ndarray
    frequencies_hz: np.ndarray
    magnitude: np.ndarray


def stft_magnitude(x: SampledSignal, params: STFTParams | None = None) -> STFTResult:
    """Magnitude spectrogram of ``x``.

    Frames start at sample 0 and advance by ``hop`` while a full window
    fits; each frame is windowed and transformed with a real FFT.  No
    zero padding, so the input must hold at least one window.
    """
    p = params or STFTParams()
    y = x.samples
    if y.size < p.window_length:
        raise ContractError(
            f"signal length {y.size} is shorter than window_length {p.window_length}"
        )
    window = np.hamming(p.window_length)
    starts = np.arange(0, y.size - p.window_length + 1, p.hop)
    frames = np.stack([y[s : s + p.window_length] * window for s in starts])
    magnitude = np.abs(np.fft.rfft(frames, axis=1))
    times = x.t0 + (starts + 0.5 * (p.window_length - 1)) / x.sample_rate
    freqs = np.fft.rfftfreq(p.window_length, 1.0 / x.sample_rate)
    return STFTResult(times=times, frequencies_hz=freqs, magnitude=magnitude)
