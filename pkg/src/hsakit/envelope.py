"""Extrema detection, natural cubic splines, and signal envelopes.

The sifting loop spends nearly all of its time here, so the detection
work happens on plain arrays in sample-index units; the public API
converts to seconds at the boundary.  A natural cubic spline is
invariant under affine changes of the abscissa, so index-space and
time-space interpolation agree exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import get_lapack_funcs

from .errors import ContractError, NotSiftableError
from .signal import SampledSignal

# LAPACK tridiagonal solver, fetched once; scipy.linalg.solve_banded
# dispatches to this same routine for (1, 1) bandwidths, so calling it
# directly changes nothing numerically and skips per-call validation
_GTSV = get_lapack_funcs(("gtsv",), (np.empty(0, dtype=np.float64),))[0]

__all__ = ["ExtremaSet", "EnvelopePair", "find_extrema", "cubic_spline", "envelopes"]


@dataclass
class ExtremaSet:
    """Refined local extrema of a sampled signal.

    ``maxima`` and ``minima`` are (n, 2) arrays of (time, value) rows in
    occurrence order.  ``zero_crossings`` counts strict sign changes of
    the sample sequence; a sample exactly at zero counts one crossing.
    """

    maxima: np.ndarray
    minima: np.ndarray
    zero_crossings: int

    @property
    def n_extrema(self) -> int:
        return self.maxima.shape[0] + self.minima.shape[0]


@dataclass
class EnvelopePair:
    """Upper/lower spline envelopes and their pointwise mean."""

    upper: np.ndarray
    lower: np.ndarray
    mean: np.ndarray


def _refine_parabolic(y: np.ndarray, i: int) -> tuple[float, float]:
    """Vertex of the parabola through samples i-1, i, i+1.

    Returns (fractional index, value).  For a strict three-point
    extremum the vertex lies within half a sample of i.
    """
    y0, y1, y2 = y[i - 1], y[i], y[i + 1]
    denom = y0 - 2.0 * y1 + y2
    if denom == 0.0:
        return float(i), float(y1)
    delta = 0.5 * (y0 - y2) / denom
    value = y1 - 0.25 * (y0 - y2) * delta
    return i + delta, value


def _extrema_positions(y: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Interior extrema in index units with parabolic refinement.

    Plateaus (runs of equal samples bounded by opposite slopes) yield a
    single extremum at the plateau midpoint, unrefined.  Returns
    (max_pos, max_val, min_pos, min_val).
    """
    dy = y[1:] - y[:-1]
    nz = np.flatnonzero(dy)
    if nz.size < 2:
        empty = np.empty(0)
        return empty, empty.copy(), empty.copy(), empty.copy()
    signs = dy[nz] > 0.0
    flips = np.flatnonzero(signs[:-1] != signs[1:])
    if flips.size == 0:
        empty = np.empty(0)
        return empty, empty.copy(), empty.copy(), empty.copy()
    i_left = nz[flips]
    i_right = nz[flips + 1]
    rising = signs[flips]
    pos = np.empty(flips.size)
    val = np.empty(flips.size)
    simple = i_right == i_left + 1
    if np.any(simple):
        # same arithmetic as _refine_parabolic, over all strict extrema at once
        ci = i_left[simple] + 1
        y0 = y[ci - 1]
        y1 = y[ci]
        y2 = y[ci + 1]
        denom = y0 - 2.0 * y1 + y2
        diff02 = y0 - y2
        safe = np.where(denom == 0.0, 1.0, denom)
        delta = np.where(denom == 0.0, 0.0, 0.5 * diff02 / safe)
        pos[simple] = ci + delta
        val[simple] = y1 - 0.25 * diff02 * delta
    flat = ~simple
    if np.any(flat):
        # plateau of equal samples from i_left+1 through i_right
        pos[flat] = 0.5 * (i_left[flat] + 1 + i_right[flat])
        val[flat] = y[i_left[flat] + 1]
    falling = ~rising
    return pos[rising], val[rising], pos[falling], val[falling]


def _count_zero_crossings(y: np.ndarray) -> int:
    signs = np.sign(y)
    signs = signs[signs != 0]
    if signs.size < 2:
        return 0
    return int(np.count_nonzero(signs[:-1] != signs[1:]))


def find_extrema(x: SampledSignal) -> ExtremaSet:
    """Locate refined local maxima and minima and count zero crossings.

    Needs at least 3 samples.  Extrema are interior only; a monotonic
    signal yields empty sets.
    """
    y = x.samples
    if y.size < 3:
        raise ContractError("find_extrema needs at least 3 samples")
    max_pos, max_val, min_pos, min_val = _extrema_positions(y)
    dt = 1.0 / x.sample_rate
    maxima = np.column_stack((x.t0 + max_pos * dt, max_val)) if max_pos.size else np.empty((0, 2))
    minima = np.column_stack((x.t0 + min_pos * dt, min_val)) if min_pos.size else np.empty((0, 2))
    return ExtremaSet(maxima=maxima, minima=minima, zero_crossings=_count_zero_crossings(y))


def cubic_spline(knot_times, knot_values, query_times) -> np.ndarray:
    """Natural cubic spline through (knot_times, knot_values).

    Knot times must be strictly increasing and at least 2 long.  Two
    knots degenerate to the straight line through them (extrapolated
    linearly); three or more use the natural boundary condition (zero
    second derivative at both ends).
    """
    kt = np.asarray(knot_times, dtype=np.float64)
    kv = np.asarray(knot_values, dtype=np.float64)
    q = np.asarray(query_times, dtype=np.float64)
    if kt.ndim != 1 or kt.shape != kv.shape:
        raise ContractError("knot arrays must be 1-D and of equal length")
    if kt.size < 2:
        raise ContractError("spline needs at least 2 knots")
    dk = np.diff(kt)
    if np.any(dk == 0.0):
        raise ContractError("duplicate knot times")
    if np.any(dk < 0.0):
        raise ContractError("knot times must be strictly increasing")
    return _spline_eval(kt, kv, q)


def _spline_coeffs(
    kt: np.ndarray, kv: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Per-interval cubic coefficients of the natural spline (3+ knots)."""
    h = kt[1:] - kt[:-1]
    slopes = (kv[1:] - kv[:-1]) / h
    m = kt.size
    # second derivatives at the knots; natural ends are zero and drop
    # out of the interior tridiagonal system
    sec = np.zeros(m)
    diag = (h[:-1] + h[1:]) / 3.0
    rhs = slopes[1:] - slopes[:-1]
    if m == 3:
        sec[1] = rhs[0] / diag[0]
    else:
        upper = h[1:-1] / 6.0
        _, _, _, sol, info = _GTSV(
            upper.copy(), diag, upper, rhs, True, True, True, True
        )
        if info != 0:
            raise np.linalg.LinAlgError("singular tridiagonal system")
        sec[1:-1] = sol
    c0 = kv[:-1]
    c1 = slopes - h * (2.0 * sec[:-1] + sec[1:]) / 6.0
    c2 = sec[:-1] / 2.0
    c3 = (sec[1:] - sec[:-1]) / (6.0 * h)
    return c0, c1, c2, c3


def _spline_eval(kt: np.ndarray, kv: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Natural cubic spline through (kt, kv) evaluated at q.

    Hand-rolled rather than scipy.interpolate.CubicSpline because the
    sifting loop builds tens of thousands of envelopes and the generic
    PPoly path spends most of its time on validation and bookkeeping.
    Queries outside the knot span follow the end-interval cubics, same
    as PPoly with extrapolate=True.
    """
    if kt.size == 2:
        slope = (kv[1] - kv[0]) / (kt[1] - kt[0])
        return kv[0] + slope * (q - kt[0])
    c0, c1, c2, c3 = _spline_coeffs(kt, kv)
    idx = (np.searchsorted(kt, q, side="right") - 1).clip(0, kt.size - 2)
    u = q - kt[idx]
    return ((c3[idx] * u + c2[idx]) * u + c1[idx]) * u + c0[idx]


def _spline_eval_grid(kt: np.ndarray, kv: np.ndarray, grid: np.ndarray) -> np.ndarray:
    """_spline_eval specialized to queries 0, 1, ..., n-1.

    On that grid the interval index of every query follows from the
    ceiling of each knot, so the per-sample binary search collapses to
    one np.repeat.  Interval assignment matches _spline_eval exactly:
    sample j belongs to interval k when kt[k] <= j < kt[k+1], with the
    end intervals extended outward.
    """
    n = grid.size
    if kt.size == 2:
        slope = (kv[1] - kv[0]) / (kt[1] - kt[0])
        return kv[0] + slope * (grid - kt[0])
    c0, c1, c2, c3 = _spline_coeffs(kt, kv)
    bounds = np.ceil(kt[1:-1]).astype(np.intp).clip(0, n)
    counts = np.empty(kt.size - 1, dtype=np.intp)
    counts[0] = bounds[0]
    counts[1:-1] = bounds[1:] - bounds[:-1]
    counts[-1] = n - bounds[-1]
    idx = np.repeat(np.arange(kt.size - 1), counts)
    u = grid - kt[idx]
    return ((c3[idx] * u + c2[idx]) * u + c1[idx]) * u + c0[idx]


def _mirror_knots(
    pos: np.ndarray, val: np.ndarray, lo: float, hi: float
) -> tuple[np.ndarray, np.ndarray]:
    """Reflect the two extrema nearest each end about the end points.

    Keeps the spline supported past [lo, hi] so envelopes do not sag at
    the signal edges.  Reflections that collide with existing knots are
    dropped.
    """
    # mirrors of an ascending prefix/suffix are descending, and interior
    # extrema sit strictly inside [lo, hi], so this concatenation is
    # already sorted and no argsort is needed
    p = np.concatenate((2.0 * lo - pos[1::-1], pos, 2.0 * hi - pos[:-3:-1]))
    v = np.concatenate((val[1::-1], val, val[:-3:-1]))
    span = max(p[-1] - p[0], 1.0)
    keep = (p[1:] - p[:-1]) > 1e-12 * span
    if not keep.all():
        mask = np.concatenate(([True], keep))
        p = p[mask]
        v = v[mask]
    return p, v


def _envelope_arrays(y: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Upper/lower/mean envelope samples of ``y`` on its own grid."""
    max_pos, max_val, min_pos, min_val = _extrema_positions(y)
    if max_pos.size < 2 or min_pos.size < 2:
        raise NotSiftableError(
            "signal needs at least 2 maxima and 2 minima to build envelopes "
            f"(found {max_pos.size} and {min_pos.size})"
        )
    lo, hi = 0.0, float(y.size - 1)
    grid = np.arange(y.size, dtype=np.float64)
    up_p, up_v = _mirror_knots(max_pos, max_val, lo, hi)
    lo_p, lo_v = _mirror_knots(min_pos, min_val, lo, hi)
    upper = _spline_eval_grid(up_p, up_v, grid)
    lower = _spline_eval_grid(lo_p, lo_v, grid)
    return upper, lower, 0.5 * (upper + lower)


def envelopes(x: SampledSignal) -> EnvelopePair:
    """Spline envelopes through the refined maxima and minima of ``x``.

    Raises NotSiftableError when fewer than 2 maxima or 2 minima exist,
    since the envelopes are then unsupported on one side.  End effects
    are controlled by mirroring the two nearest extrema about each
    endpoint before fitting.
    """
    if len(x) < 3:
        raise ContractError("envelopes need at least 3 samples")
    upper, lower, mean = _envelope_arrays(x.samples)
    return EnvelopePair(upper=upper, lower=lower, mean=mean)
