"""Demodulation of single modes into amplitude and frequency laws.

The primary path never touches a Hilbert transform: the amplitude is a
spline envelope, the carrier is normalized by iterated division, and
the quadrature comes from sqrt(1 - s^2) with the sign of -ds/dt.  The
square root is vertical where s passes +/-1, so a two-sample window
around each such point is rebuilt by interpolation and flagged.

Two classical baselines live here too: the analytic-signal demodulator
(spectral one-siding) and the Teager energy operator pair.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline

from .envelope import _extrema_positions, _mirror_knots, _spline_eval
from .errors import ContractError, NumericError
from .signal import (
    AMFMComponent,
    SampledSignal,
    cumulative_integral,
    derivative,
    moving_average,
)

__all__ = [
    "FMSignal",
    "ia_est",
    "iter_am_removal",
    "quadrature_fm",
    "imf_demod",
    "gabor_as_demod",
    "teo_demod",
]

# samples replaced on each side of a quadrature zero crossing
_REPAIR_HALF_WIDTH = 2


@dataclass
class FMSignal:
    """A unit-amplitude FM carrier and (once computed) its quadrature.

    After quadrature extraction, s_fm^2 + sigma_fm^2 = 1 away from the
    repaired windows and |s_fm| stays within 1 + 1e-3 wherever the
    amplitude normalization converged.  unstable_times lists the centers
    of the repaired windows; ``repaired`` masks every interpolated
    sample.
    """

    s_fm: np.ndarray
    sample_rate: float
    t0: float = 0.0
    sigma_fm: np.ndarray | None = None
    unstable_times: np.ndarray = field(default_factory=lambda: np.empty(0))
    repaired: np.ndarray | None = None

    def __post_init__(self) -> None:
        self.s_fm = np.asarray(self.s_fm, dtype=np.float64)
        if self.s_fm.ndim != 1 or self.s_fm.size == 0:
            raise ContractError("s_fm must be a nonempty 1-D array")
        if self.sigma_fm is not None:
            self.sigma_fm = np.asarray(self.sigma_fm, dtype=np.float64)
            if self.sigma_fm.shape != self.s_fm.shape:
                raise ContractError("sigma_fm length must match s_fm")
        self.unstable_times = np.asarray(self.unstable_times, dtype=np.float64)


def _ia_est_array(y: np.ndarray) -> np.ndarray:
    mag = np.abs(y)
    max_pos, max_val, _, _ = _extrema_positions(mag)
    if max_pos.size < 2:
        raise NumericError(
            f"amplitude estimation needs at least 2 envelope maxima, found {max_pos.size}"
        )
    pos, val = _mirror_knots(max_pos, max_val, 0.0, float(y.size - 1))
    return _spline_eval(pos, val, np.arange(y.size, dtype=np.float64))


def ia_est(x: SampledSignal) -> np.ndarray:
    """Instantaneous-amplitude estimate of a single mode.

    Natural cubic spline through the refined maxima of |x|, with the two
    nearest maxima mirrored about each end of the record.
    """
    if len(x) < 3:
        raise ContractError("ia_est needs at least 3 samples")
    return _ia_est_array(x.samples)


def iter_am_removal(x: SampledSignal) -> FMSignal:
    """Normalize a mode to a unit-amplitude FM carrier.

    Divides out the spline amplitude estimate until the estimate is flat
    to 1e-3 or three divisions have run, checking before each division
    so an already-normalized carrier passes through untouched.
    """
    g = x.samples.copy()
    for _ in range(3):
        b = _ia_est_array(g)
        if float(np.max(np.abs(b - 1.0))) <= 1e-3:
            break
        if float(np.min(b)) < 1e-12:
            raise NumericError("amplitude estimate vanished during normalization")
        g = g / b
    return FMSignal(s_fm=g, sample_rate=x.sample_rate, t0=x.t0)


def quadrature_fm(f: FMSignal) -> FMSignal:
    """Attach the quadrature sigma_fm = -sgn(ds/dt) * sqrt(1 - s^2).

    s is clipped to [-1, 1] before the square root.  The root has
    infinite slope where |s| reaches 1, which amplifies sample-grid
    error, so +/-2 samples around each derivative sign change are
    replaced by spline interpolation through the surrounding good
    samples and reported via unstable_times / repaired.

    For fast carriers the windows merge and cover most of the record;
    interpolating through the few leftover anchors would then rewrite
    the whole quadrature, so the repair is skipped (the raw square root
    is exact away from the extremes) and ``repaired`` stays empty.
    """
    s_raw = f.s_fm
    if s_raw.size < 3:
        raise ContractError("quadrature extraction needs at least 3 samples")
    s = np.clip(s_raw, -1.0, 1.0)
    ds = np.gradient(s_raw)
    sigma = -np.sign(ds) * np.sqrt(1.0 - s * s)

    max_pos, _, min_pos, _ = _extrema_positions(s_raw)
    centers = np.sort(np.concatenate((max_pos, min_pos))).round().astype(int)
    mask = np.zeros(s_raw.size, dtype=bool)
    for c in centers:
        mask[max(0, c - _REPAIR_HALF_WIDTH) : c + _REPAIR_HALF_WIDTH + 1] = True
    good = np.flatnonzero(~mask)
    if mask.any() and good.size >= 2 and mask.sum() <= good.size:
        idx = np.flatnonzero(mask)
        if good.size >= 4:
            sigma[idx] = CubicSpline(good, sigma[good], bc_type="natural")(idx)
        else:
            sigma[idx] = np.interp(idx, good, sigma[good])
    elif mask.any():
        mask = np.zeros(s_raw.size, dtype=bool)
    return FMSignal(
        s_fm=s_raw,
        sample_rate=f.sample_rate,
        t0=f.t0,
        sigma_fm=sigma,
        unstable_times=f.t0 + centers / f.sample_rate,
        repaired=mask,
    )


def imf_demod(x: SampledSignal, smooth_window_seconds: float = 0.0) -> AMFMComponent:
    """Demodulate a single mode without a Hilbert transform.

    Amplitude from the envelope spline, carrier from iterated AM
    removal, phase from the quadrature pair, frequency as the phase
    derivative (optionally smoothed by a centered moving average).
    Negative frequency samples are reported via a RuntimeWarning, never
    clamped.
    """
    a = ia_est(x)
    fm = quadrature_fm(iter_am_removal(x))
    theta = np.unwrap(np.arctan2(fm.sigma_fm, np.clip(fm.s_fm, -1.0, 1.0)))
    omega = derivative(theta, x.sample_rate)
    if smooth_window_seconds > 0.0:
        omega = moving_average(omega, x.sample_rate, smooth_window_seconds)
    negative = int(np.count_nonzero(omega < 0.0))
    if negative:
        warnings.warn(
            f"instantaneous frequency negative at {negative} of {omega.size} samples",
            RuntimeWarning,
            stacklevel=2,
        )
    return AMFMComponent(
        s=x.samples.copy(),
        sample_rate=x.sample_rate,
        t0=x.t0,
        ia=a,
        if_=omega,
        phase_ref=float(theta[0]),
        sigma=a * fm.sigma_fm,
        singular=fm.repaired,
    )


def gabor_as_demod(x: SampledSignal) -> AMFMComponent:
    """Analytic-signal demodulation via spectral one-siding.

    Full-length FFT; DC and (for even lengths) Nyquist weighted 1x,
    positive bins 2x, negative bins zeroed.  IA is the magnitude of the
    resulting complex signal, IF the derivative of its unwrapped angle.
    """
    y = x.samples
    if y.size < 3:
        raise ContractError("gabor_as_demod needs at least 3 samples")
    n = y.size
    weights = np.zeros(n)
    weights[0] = 1.0
    if n % 2 == 0:
        weights[1 : n // 2] = 2.0
        weights[n // 2] = 1.0
    else:
        weights[1 : (n + 1) // 2] = 2.0
    z = np.fft.ifft(np.fft.fft(y) * weights)
    ia = np.abs(z)
    theta = np.unwrap(np.angle(z))
    return AMFMComponent(
        s=y.copy(),
        sample_rate=x.sample_rate,
        t0=x.t0,
        ia=ia,
        if_=derivative(theta, x.sample_rate),
        phase_ref=float(theta[0]),
        sigma=z.imag.copy(),
    )


def teo_demod(x: SampledSignal) -> AMFMComponent:
    """Energy-separation demodulation from the Teager operator.

    Psi{x} = xdot^2 - x * xddot on central differences, then
    ia = Psi{x} / sqrt(Psi{xdot}) and omega = sqrt(Psi{xdot} / Psi{x}).
    Samples where either operator output is non-positive carry no usable
    energy; they are interpolated from their neighbors and flagged.
    """
    y = x.samples
    if y.size < 5:
        raise ContractError("teo_demod needs at least 5 samples")
    fs = x.sample_rate
    d1 = derivative(y, fs)
    d2 = derivative(d1, fs)
    d3 = derivative(d2, fs)
    psi_x = d1 * d1 - y * d2
    psi_d = d2 * d2 - d1 * d3
    bad = (psi_x <= 0.0) | (psi_d <= 0.0) | ~np.isfinite(psi_x) | ~np.isfinite(psi_d)
    if bad.all():
        raise NumericError("energy operator output is non-positive everywhere")
    if bad.any():
        idx = np.arange(y.size)
        psi_x = psi_x.copy()
        psi_d = psi_d.copy()
        psi_x[bad] = np.interp(idx[bad], idx[~bad], psi_x[~bad])
        psi_d[bad] = np.interp(idx[bad], idx[~bad], psi_d[~bad])
    ia = psi_x / np.sqrt(psi_d)
    omega = np.sqrt(psi_d / psi_x)
    cos0 = float(np.clip(y[0] / ia[0], -1.0, 1.0)) if ia[0] > 0.0 else 1.0
    phi = float(np.arccos(cos0))
    if d1[0] > 0.0:
        phi = -phi
    theta = cumulative_integral(omega, fs) + phi
    return AMFMComponent(
        s=y.copy(),
        sample_rate=x.sample_rate,
        t0=x.t0,
        ia=ia,
        if_=omega,
        phase_ref=phi,
        sigma=ia * np.sin(theta),
        singular=bad,
    )
