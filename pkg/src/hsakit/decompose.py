"""Decomposition drivers: plain, ensemble, and complementary ensemble.

All three telescope the same single-mode sift.  The ensemble variants
perturb the input with seeded noise so that intermittent modes populate
consistent levels; the complementary variant injects the noise's own
modes level by level, which restores exact reconstruction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.signal import butter, sosfiltfilt

from .envelope import _extrema_positions
from .errors import ContractError, NotSiftableError, NumericError
from .sift import SiftConfig, _energy, sift
from .signal import AMFMComponent, HilbertSpectrum, SampledSignal

__all__ = [
    "DecomposeConfig",
    "MaskingSignal",
    "emd",
    "eemd",
    "ceemd",
    "tone_mask",
    "make_masking_noise",
    "amplitude_weighted_if",
]

_MASK_KINDS = ("filtered_noise", "sifted_noise", "custom")

# sosfiltfilt pads by 3 * (2 * n_sections + 1) samples on each side
_FILTER_ORDER = 10
_MIN_FILTER_LENGTH = 3 * (2 * (_FILTER_ORDER // 2) + 1) + 1

# trials whose sift output blows past this multiple of the input peak
# are treated as spline blowups and dropped from the ensemble average
_OUTLIER_FACTOR = 1e6


@dataclass
class DecomposeConfig:
    """Shared configuration for the decomposition drivers.

    snr_factors gives the per-level noise amplitude as a fraction of the
    input's standard deviation; the last entry repeats for deeper
    levels.  energy_threshold stops extraction once the residual energy
    falls below that fraction of the input energy.
    """

    sift: SiftConfig = field(default_factory=SiftConfig)
    trials: int = 1
    snr_factors: tuple[float, ...] = (0.0,)
    energy_threshold: float = 1e-10
    noise_seed: int = 0
    max_components: int = 16

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ContractError(f"trials must be >= 1, got {self.trials}")
        self.snr_factors = tuple(float(b) for b in self.snr_factors)
        if not self.snr_factors:
            raise ContractError("snr_factors must be nonempty")
        if any(b < 0.0 for b in self.snr_factors):
            raise ContractError("snr_factors must be nonnegative")
        if self.energy_threshold < 0.0:
            raise ContractError("energy_threshold must be nonnegative")
        if self.max_components < 1:
            raise ContractError(f"max_components must be >= 1, got {self.max_components}")

    def beta(self, level: int) -> float:
        return self.snr_factors[min(level, len(self.snr_factors) - 1)]


@dataclass
class MaskingSignal:
    """A signal added and subtracted around a sift to steer extraction."""

    samples: np.ndarray
    cutoff: float
    kind: str = "filtered_noise"

    def __post_init__(self) -> None:
        self.samples = np.asarray(self.samples, dtype=np.float64)
        if self.samples.ndim != 1:
            raise ContractError("masking samples must be one-dimensional")
        self.cutoff = float(self.cutoff)
        if self.kind not in _MASK_KINDS:
            raise ContractError(f"kind must be one of {_MASK_KINDS}, got {self.kind!r}")


def _is_monotonic(y: np.ndarray) -> bool:
    dy = np.diff(y)
    return bool(np.all(dy >= 0.0) or np.all(dy <= 0.0))


def _is_siftable(y: np.ndarray) -> bool:
    max_pos, _, min_pos, _ = _extrema_positions(y)
    return max_pos.size >= 2 and min_pos.size >= 2


def _should_stop(r: np.ndarray, e_start: float, cfg: DecomposeConfig) -> bool:
    if _is_monotonic(r):
        return True
    return e_start > 0.0 and _energy(r) <= cfg.energy_threshold * e_start


def emd(x: SampledSignal, config: DecomposeConfig | None = None) -> HilbertSpectrum:
    """Plain decomposition: sift, subtract, repeat until the residual
    is monotonic, negligible, or unsiftable.

    Reconstruction is exact by construction: the component waveforms and
    the residual telescope back to the input.
    """
    cfg = config or DecomposeConfig()
    r = x.samples.copy()
    e_start = _energy(r)
    comps: list[AMFMComponent] = []
    while len(comps) < cfg.max_components and not _should_stop(r, e_start, cfg):
        try:
            mode = sift(SampledSignal(r, x.sample_rate, x.t0), cfg.sift)
        except NotSiftableError:
            break
        comps.append(AMFMComponent(s=mode.samples, sample_rate=x.sample_rate, t0=x.t0))
        r = r - mode.samples
    return HilbertSpectrum(components=comps, residual=SampledSignal(r, x.sample_rate, x.t0))


def eemd(x: SampledSignal, config: DecomposeConfig | None = None) -> HilbertSpectrum:
    """Ensemble decomposition: average the modes of noisy copies.

    Each trial decomposes x plus white noise scaled to
    snr_factors[0] * std(x), with the trial's generator seeded
    noise_seed + trial index.  Levels align by index; trials missing a
    level contribute zeros.  Averaging breaks exact reconstruction, so
    completeness is not guaranteed here.
    """
    cfg = config or DecomposeConfig()
    n = len(x)
    amp = cfg.beta(0) * float(np.std(x.samples))
    scale = float(np.max(np.abs(x.samples)))
    trials: list[HilbertSpectrum] = []
    for i in range(cfg.trials):
        rng = np.random.default_rng(cfg.noise_seed + i)
        w = rng.standard_normal(n) * amp if amp > 0.0 else np.zeros(n)
        spec = emd(SampledSignal(x.samples + w, x.sample_rate, x.t0), cfg)
        if _spectrum_peak(spec) > _OUTLIER_FACTOR * scale:
            continue
        trials.append(spec)
    if not trials:
        raise NumericError("every ensemble trial was dropped as an outlier")
    n_levels = max(len(spec.components) for spec in trials)
    comps: list[AMFMComponent] = []
    for k in range(n_levels):
        stack = np.zeros(n)
        for spec in trials:
            if k < len(spec.components):
                stack += spec.components[k].s
        comps.append(
            AMFMComponent(s=stack / len(trials), sample_rate=x.sample_rate, t0=x.t0)
        )
    resid = np.mean([spec.residual.samples for spec in trials], axis=0)
    return HilbertSpectrum(components=comps, residual=SampledSignal(resid, x.sample_rate, x.t0))


def _spectrum_peak(spec: HilbertSpectrum) -> float:
    peak = float(np.max(np.abs(spec.residual.samples)))
    for comp in spec.components:
        peak = max(peak, float(np.max(np.abs(comp.s))))
    return peak


def ceemd(x: SampledSignal, config: DecomposeConfig | None = None) -> HilbertSpectrum:
    """Complementary ensemble decomposition.

    Level k sifts the current residual perturbed by beta_k times the
    matching mode of each trial's own noise realization (the raw noise
    at level 0), then subtracts the trial average before moving on.
    Because the subtraction uses the averaged mode, reconstruction
    telescopes exactly, unlike eemd.  Noise modes are extracted lazily,
    one sift per trial per level.
    """
    cfg = config or DecomposeConfig()
    n = len(x)
    sigma_x = float(np.std(x.samples))
    scale = float(np.max(np.abs(x.samples)))
    need_noise = any(b > 0.0 for b in cfg.snr_factors) and sigma_x > 0.0
    noise_resid: list[np.ndarray] = []
    noise_level: list[np.ndarray] = []
    if need_noise:
        for i in range(cfg.trials):
            rng = np.random.default_rng(cfg.noise_seed + i)
            w = rng.standard_normal(n) * sigma_x
            noise_resid.append(w)
            noise_level.append(w.copy())

    r = x.samples.copy()
    e_start = _energy(r)
    comps: list[AMFMComponent] = []
    while len(comps) < cfg.max_components and not _should_stop(r, e_start, cfg):
        if not _is_siftable(r):
            break
        level = len(comps)
        if need_noise and level > 0:
            _advance_noise_bank(noise_resid, noise_level, cfg.sift)
        beta = cfg.beta(level)
        if beta == 0.0 or not need_noise:
            try:
                mode = sift(SampledSignal(r, x.sample_rate, x.t0), cfg.sift).samples
            except NotSiftableError:
                break
        else:
            outputs = []
            for i in range(cfg.trials):
                perturbed = r + beta * noise_level[i]
                try:
                    out = sift(
                        SampledSignal(perturbed, x.sample_rate, x.t0), cfg.sift
                    ).samples
                except NotSiftableError:
                    continue
                if float(np.max(np.abs(out))) > _OUTLIER_FACTOR * scale:
                    continue
                outputs.append(out)
            if not outputs:
                break
            mode = np.mean(outputs, axis=0)
        comps.append(AMFMComponent(s=mode, sample_rate=x.sample_rate, t0=x.t0))
        r = r - mode
    return HilbertSpectrum(components=comps, residual=SampledSignal(r, x.sample_rate, x.t0))


def _advance_noise_bank(
    noise_resid: list[np.ndarray], noise_level: list[np.ndarray], sift_cfg: SiftConfig
) -> None:
    """Replace each trial's level signal with the next mode of its noise."""
    for i, w in enumerate(noise_resid):
        if not _is_siftable(w):
            noise_level[i] = np.zeros_like(w)
            continue
        try:
            mode = sift(SampledSignal(w, 1.0, 0.0), sift_cfg).samples
        except NotSiftableError:
            noise_level[i] = np.zeros_like(w)
            continue
        noise_level[i] = mode
        noise_resid[i] = w - mode


def tone_mask(
    x: SampledSignal, v: MaskingSignal, config: SiftConfig | None = None
) -> SampledSignal:
    """Masked single sift: average the sifts of x + v and x - v.

    The mask biases extrema spacing so the sift latches onto
    oscillations near the mask frequency; the +/- average cancels the
    mask itself.  A zero mask reduces to a plain sift.
    """
    if v.samples.size != len(x):
        raise ContractError("masking signal length must match the input")
    cfg = config or SiftConfig()
    if not np.any(v.samples):
        return sift(x, cfg)
    plus = sift(SampledSignal(x.samples + v.samples, x.sample_rate, x.t0), cfg)
    minus = sift(SampledSignal(x.samples - v.samples, x.sample_rate, x.t0), cfg)
    return SampledSignal(
        0.5 * (plus.samples + minus.samples), x.sample_rate, x.t0
    )


def make_masking_noise(
    length: int,
    sample_rate: float,
    cutoff: float,
    amplitude_rms: float,
    seed: int,
) -> MaskingSignal:
    """Zero-phase lowpass-filtered Gaussian noise at an exact RMS.

    cutoff is the lowpass corner in rad/s and must sit strictly below
    the Nyquist rate pi * sample_rate.  The same seed always produces
    the identical signal; amplitude_rms of 0 yields all zeros.
    """
    if length < _MIN_FILTER_LENGTH:
        raise ContractError(
            f"length must be at least {_MIN_FILTER_LENGTH} for zero-phase filtering"
        )
    if sample_rate <= 0.0:
        raise ContractError("sample_rate must be positive")
    if not 0.0 < cutoff < np.pi * sample_rate:
        raise ContractError("cutoff must lie in (0, pi * sample_rate) rad/s")
    if amplitude_rms < 0.0:
        raise ContractError("amplitude_rms must be nonnegative")
    rng = np.random.default_rng(seed)
    samples = _filtered_noise(rng, length, sample_rate, cutoff, amplitude_rms)
    return MaskingSignal(samples=samples, cutoff=cutoff, kind="filtered_noise")


def _filtered_noise(
    rng: np.random.Generator,
    length: int,
    sample_rate: float,
    cutoff: float,
    amplitude_rms: float,
) -> np.ndarray:
    white = rng.standard_normal(length)
    if amplitude_rms == 0.0:
        return np.zeros(length)
    wn = cutoff / (np.pi * sample_rate)
    sos = butter(_FILTER_ORDER, wn, btype="low", output="sos")
    filtered = sosfiltfilt(sos, white)
    rms = float(np.sqrt(np.mean(filtered * filtered)))
    if rms == 0.0:
        raise NumericError("filtered noise collapsed to zero")
    return filtered * (amplitude_rms / rms)


def amplitude_weighted_if(component: AMFMComponent) -> float:
    """Energy-weighted mean angular frequency of a demodulated component.

    Computes sum(a^2 * omega) / sum(a^2) over the sample grid, the
    natural single-number frequency summary for mask-cutoff scheduling.
    """
    if component.ia is None or component.if_ is None:
        raise ContractError("component has no modulation laws; demodulate first")
    weights = component.ia * component.ia
    denom = float(np.sum(weights))
    if denom <= 0.0:
        raise NumericError("amplitude envelope carries no energy")
    return float(np.sum(weights * component.if_) / denom)
