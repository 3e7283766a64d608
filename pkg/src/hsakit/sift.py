"""Single-mode sifting with a resolution-based stop rule.

One sift extracts the locally fastest oscillation from a signal by
repeatedly subtracting a fraction of the envelope mean.  The stop rule
compares the energy of the signal at sift start against the energy of
the current envelope mean: once the ratio exceeds ``resolution_db`` the
mean is considered negligible.  The numerator stays fixed at the
starting energy for the whole sift.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .envelope import _envelope_arrays, _extrema_positions, _count_zero_crossings
from .errors import ContractError, NotSiftableError
from .signal import SampledSignal

__all__ = ["SiftConfig", "SiftState", "ImfCheck", "sift", "is_imf"]


@dataclass
class SiftConfig:
    """Knobs for a single sift.

    alpha is the fraction of the envelope mean subtracted per pass
    (in (0, 1]); resolution_db is the stop threshold on
    10*log10(E_start / E_envelope_mean); max_iterations caps the passes.
    """

    alpha: float = 0.95
    resolution_db: float = 50.0
    max_iterations: int = 50

    def __post_init__(self) -> None:
        if not 0.0 < self.alpha <= 1.0:
            raise ContractError(f"alpha must be in (0, 1], got {self.alpha}")
        if not self.resolution_db > 0.0:
            raise ContractError(f"resolution_db must be positive, got {self.resolution_db}")
        if self.max_iterations < 1:
            raise ContractError(f"max_iterations must be >= 1, got {self.max_iterations}")


@dataclass
class SiftState:
    """Snapshot after one sifting pass: working signal, envelope mean, count."""

    r: np.ndarray
    e: np.ndarray
    iteration: int


class ImfCheck(NamedTuple):
    c1: bool
    c2_max_dev: float


def _energy(y: np.ndarray) -> float:
    return float(np.mean(y * y))


def sift(
    x: SampledSignal,
    config: SiftConfig | None = None,
    trace: list[SiftState] | None = None,
) -> SampledSignal:
    """Extract one oscillatory mode from ``x``.

    Raises NotSiftableError if the input itself lacks the extrema to
    build envelopes.  If extrema run out mid-sift the current working
    signal is returned as the mode.  Pass a list as ``trace`` to collect
    per-iteration SiftState snapshots.
    """
    cfg = config or SiftConfig()
    r = x.samples.copy()
    e_start = _energy(r)
    for iteration in range(1, cfg.max_iterations + 1):
        try:
            _, _, e = _envelope_arrays(r)
        except NotSiftableError:
            if iteration == 1:
                raise
            break
        e_energy = _energy(e)
        if e_energy == 0.0:
            break
        if 10.0 * np.log10(e_start / e_energy) > cfg.resolution_db:
            break
        r -= cfg.alpha * e
        if trace is not None:
            trace.append(SiftState(r=r.copy(), e=e, iteration=iteration))
    return SampledSignal(r, x.sample_rate, x.t0)


def is_imf(x: SampledSignal, central_fraction: float = 0.8) -> ImfCheck:
    """Check the two mode conditions for ``x``.

    c1: extrema and zero-crossing counts differ by at most one.
    c2_max_dev: max |envelope mean| over the central fraction of the
    span, relative to max |x|.  NaN when envelopes cannot be built.
    """
    y = x.samples
    if y.size < 3:
        raise ContractError("is_imf needs at least 3 samples")
    max_pos, _, min_pos, _ = _extrema_positions(y)
    n_extrema = max_pos.size + min_pos.size
    c1 = abs(n_extrema - _count_zero_crossings(y)) <= 1
    scale = float(np.max(np.abs(y)))
    if scale == 0.0:
        return ImfCheck(c1=c1, c2_max_dev=0.0)
    try:
        _, _, e = _envelope_arrays(y)
    except NotSiftableError:
        return ImfCheck(c1=c1, c2_max_dev=float("nan"))
    margin = int(round(0.5 * (1.0 - central_fraction) * y.size))
    core = slice(margin, y.size - margin if margin else None)
    return ImfCheck(c1=c1, c2_max_dev=float(np.max(np.abs(e[core]))) / scale)
