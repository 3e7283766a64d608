"""The full analysis pipeline: masked ensemble extraction plus in-loop
demodulation.

Each level averages tone-masked sifts of the current residual over an
ensemble of masking signals, demodulates the averaged mode right away,
subtracts it, and moves down in frequency.  The mask cutoff tracks the
previous component's amplitude-weighted mean frequency so each level
hunts just below the one before it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .decompose import (
    DecomposeConfig,
    MaskingSignal,
    _filtered_noise,
    _is_siftable,
    _should_stop,
    amplitude_weighted_if,
    tone_mask,
)
from .demod import imf_demod
from .errors import ContractError, NotSiftableError, NumericError
from .sift import sift
from .signal import HilbertSpectrum, SampledSignal

__all__ = ["HSAConfig", "hsa_imf"]

_MASK_KINDS = ("filtered_noise", "sifted_noise", "custom")

# first-level mask cutoff as a fraction of the sampling rate, in rad/s
_LEVEL0_CUTOFF_FACTOR = 0.45 * np.pi

_OUTLIER_FACTOR = 1e6


@dataclass
class HSAConfig:
    """Pipeline configuration.

    demod_smooth_seconds is the moving-average window applied to each
    component's instantaneous frequency (1 ms by default, matching the
    in-loop smoothing the pipeline was tuned with; pass 0 to disable).
    cutoff_fraction scales the previous component's amplitude-weighted
    frequency into the next level's mask cutoff.
    """

    decompose: DecomposeConfig = field(default_factory=DecomposeConfig)
    demod_smooth_seconds: float = 0.001
    mask_kind: str = "filtered_noise"
    cutoff_fraction: float = 0.9

    def __post_init__(self) -> None:
        if self.demod_smooth_seconds < 0.0:
            raise ContractError("demod_smooth_seconds must be nonnegative")
        if not 0.0 < self.cutoff_fraction <= 1.0:
            raise ContractError(
                f"cutoff_fraction must be in (0, 1], got {self.cutoff_fraction}"
            )
        if self.mask_kind not in _MASK_KINDS:
            raise ContractError(f"mask_kind must be one of {_MASK_KINDS}")


class _MaskFactory:
    """Builds per-trial masking signals, one independent stream per trial.

    Trial i draws from a generator seeded noise_seed + i and consumes it
    level by level, so serial and parallel trial scheduling see the same
    noise.  For sifted-noise masks the trial's white-noise realization
    is decomposed progressively, one mode per level.
    """

    def __init__(self, cfg: HSAConfig, x: SampledSignal, masks):
        self.cfg = cfg
        self.n = len(x)
        self.sample_rate = x.sample_rate
        self.custom = masks
        dcfg = cfg.decompose
        self.rngs = [
            np.random.default_rng(dcfg.noise_seed + i) for i in range(dcfg.trials)
        ]
        self.noise_resid: list[np.ndarray] | None = None
        self.noise_mode: list[np.ndarray] = []
        if cfg.mask_kind == "custom" and masks is None:
            raise ContractError("mask_kind 'custom' requires explicit masks")

    def _ensure_sifted_bank(self) -> None:
        if self.noise_resid is None:
            self.noise_resid = [rng.standard_normal(self.n) for rng in self.rngs]
            self.noise_mode = [w.copy() for w in self.noise_resid]

    def advance_level(self, level: int) -> None:
        if self.cfg.mask_kind != "sifted_noise":
            return
        self._ensure_sifted_bank()
        if level == 0:
            return
        for i, w in enumerate(self.noise_resid):
            if not _is_siftable(w):
                self.noise_mode[i] = np.zeros(self.n)
                continue
            try:
                mode = sift(
                    SampledSignal(w, self.sample_rate, 0.0), self.cfg.decompose.sift
                ).samples
            except NotSiftableError:
                self.noise_mode[i] = np.zeros(self.n)
                continue
            self.noise_mode[i] = mode
            self.noise_resid[i] = w - mode

    def build(self, trial: int, level: int, cutoff: float, target_rms: float) -> MaskingSignal:
        kind = self.cfg.mask_kind
        if kind == "custom":
            if level < len(self.custom) and trial < len(self.custom[level]):
                return self.custom[level][trial]
            return MaskingSignal(np.zeros(self.n), cutoff, "custom")
        if kind == "sifted_noise":
            mode = self.noise_mode[trial]
            rms = float(np.sqrt(np.mean(mode * mode)))
            samples = mode * (target_rms / rms) if rms > 0.0 else np.zeros(self.n)
            return MaskingSignal(samples, cutoff, "sifted_noise")
        samples = _filtered_noise(
            self.rngs[trial], self.n, self.sample_rate, cutoff, target_rms
        )
        return MaskingSignal(samples, cutoff, "filtered_noise")


def hsa_imf(
    x: SampledSignal,
    config: HSAConfig | None = None,
    masks: Sequence[Sequence[MaskingSignal]] | None = None,
) -> HilbertSpectrum:
    """Decompose ``x`` into demodulated AM-FM components.

    Per level: build one masking signal per trial (cutoff at 45% of the
    sampling rate for level 0, then cutoff_fraction times the previous
    component's amplitude-weighted frequency; RMS at beta_k times the
    residual RMS), average the tone-masked sifts, demodulate the
    average with the configured smoothing, subtract, continue while the
    residual is non-monotonic, energetic, and siftable.

    A zero beta short-circuits the ensemble to one plain sift, which
    keeps the beta=0 pipeline exactly equal to plain decomposition plus
    per-mode demodulation.  With mask_kind="custom", ``masks`` supplies
    masks[level][trial]; missing entries degrade to zero masks.  Levels
    stop early if an averaged mode cannot be demodulated; its content
    stays in the residual.
    """
    cfg = config or HSAConfig()
    dcfg = cfg.decompose
    factory = _MaskFactory(cfg, x, masks)
    r = x.samples.copy()
    e_start = float(np.mean(r * r))
    scale = float(np.max(np.abs(r)))
    comps = []
    cutoff = _LEVEL0_CUTOFF_FACTOR * x.sample_rate
    while len(comps) < dcfg.max_components and not _should_stop(r, e_start, dcfg):
        if not _is_siftable(r):
            break
        level = len(comps)
        if level > 0:
            prev = comps[-1]
            try:
                proposed = cfg.cutoff_fraction * amplitude_weighted_if(prev)
            except NumericError:
                proposed = cfg.cutoff_fraction * cutoff
            if np.isfinite(proposed) and 0.0 < proposed < np.pi * x.sample_rate:
                cutoff = proposed
            else:
                cutoff = cfg.cutoff_fraction * cutoff
        beta = dcfg.beta(level)
        factory.advance_level(level)
        if beta == 0.0:
            try:
                raw = sift(SampledSignal(r, x.sample_rate, x.t0), dcfg.sift).samples
            except NotSiftableError:
                break
        else:
            target_rms = beta * float(np.sqrt(np.mean(r * r)))
            outputs = []
            for i in range(dcfg.trials):
                mask = factory.build(i, level, cutoff, target_rms)
                try:
                    out = tone_mask(
                        SampledSignal(r, x.sample_rate, x.t0), mask, dcfg.sift
                    ).samples
                except NotSiftableError:
                    continue
                if float(np.max(np.abs(out))) > _OUTLIER_FACTOR * scale:
                    continue
                outputs.append(out)
            if not outputs:
                break
            raw = np.mean(outputs, axis=0)
        try:
            comp = imf_demod(
                SampledSignal(raw, x.sample_rate, x.t0), cfg.demod_smooth_seconds
            )
        except NumericError:
            break
        comps.append(comp)
        r = r - raw
    return HilbertSpectrum(
        components=comps, residual=SampledSignal(r, x.sample_rate, x.t0)
    )
