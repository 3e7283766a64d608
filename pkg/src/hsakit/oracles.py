"""Closed-form test signals and their exact modulation laws.

These generators double as ground truth: each one can emit the signal
and the analytic IA/IF that a demodulator should recover.  Samples near
points where a closed form is singular (triangle extrema, carrier
zeros) are saturated at their one-sample-away value and flagged via the
component's ``singular`` mask so downstream metrics can exclude them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, NamedTuple

import numpy as np

from .errors import ContractError
from .signal import AMFMComponent, SampledSignal, derivative

__all__ = [
    "TriangleParams",
    "SinFMParams",
    "FMMessageSpec",
    "FSCoeff",
    "gen_triangle",
    "triangle_fs_coeffs",
    "triangle_shc_components",
    "triangle_fm_solution",
    "triangle_am_solution",
    "triangle_hc_solution",
    "gen_sin_fm",
    "sin_fm_solution",
    "bessel_j",
    "sin_fm_bessel_coeffs",
    "gen_example_signal",
    "example1_spec",
    "example2_spec",
    "gen_two_tone",
    "two_tone_envelope",
]


def _times(length: int, sample_rate: float, t0: float) -> np.ndarray:
    if length < 1:
        raise ContractError("length must be positive")
    if sample_rate <= 0.0:
        raise ContractError("sample_rate must be positive")
    return t0 + np.arange(length) / float(sample_rate)


@dataclass
class TriangleParams:
    """Symmetric triangle wave: peak amplitude and fundamental rad/s."""

    amplitude: float = 1.0
    omega0: float = 2.0 * np.pi

    def __post_init__(self) -> None:
        if self.amplitude <= 0.0:
            raise ContractError("amplitude must be positive")
        if self.omega0 <= 0.0:
            raise ContractError("omega0 must be positive")

    @property
    def period(self) -> float:
        return 2.0 * np.pi / self.omega0


def gen_triangle(
    p: TriangleParams, length: int, sample_rate: float, t0: float = 0.0
) -> SampledSignal:
    """Triangle wave with a maximum of +amplitude at t = 0.

    Piecewise linear with slope -/+ 2*A*omega0/pi, zero mean, zero at
    odd multiples of a quarter period.
    """
    t = _times(length, sample_rate, t0)
    period = p.period
    tau = np.mod(t + 0.5 * period, period) - 0.5 * period
    x = p.amplitude - (2.0 * p.amplitude * p.omega0 / np.pi) * np.abs(tau)
    return SampledSignal(x, sample_rate, t0)


class FSCoeff(NamedTuple):
    amplitude: float
    omega: float


def triangle_fs_coeffs(p: TriangleParams, k: int) -> FSCoeff:
    """k-th Fourier-series term of the triangle: only odd harmonics
    survive, with amplitude 8A / (pi^2 (2k+1)^2) at (2k+1) * omega0."""
    if k < 0:
        raise ContractError("k must be nonnegative")
    n = 2 * k + 1
    return FSCoeff(8.0 * p.amplitude / (np.pi**2 * n**2), n * p.omega0)


def triangle_shc_components(
    p: TriangleParams, n_components: int, length: int, sample_rate: float, t0: float = 0.0
) -> list[AMFMComponent]:
    """First n Fourier terms of the triangle as constant-law components."""
    if n_components < 1:
        raise ContractError("n_components must be >= 1")
    comps = []
    for k in range(n_components):
        amp, omega = triangle_fs_coeffs(p, k)
        comps.append(
            AMFMComponent.from_modulations(
                ia=np.full(length, amp),
                if_=np.full(length, omega),
                phase_ref=omega * t0,
                sample_rate=sample_rate,
                t0=t0,
            )
        )
    return comps


def _triangle_phase(p: TriangleParams, t: np.ndarray) -> np.ndarray:
    """Monotonically increasing phase with cos(theta) = x/A, theta(0) = 0."""
    period = p.period
    n_period = np.floor(t / period)
    tau = t - n_period * period
    u = np.clip(1.0 - (2.0 * p.omega0 / np.pi) * np.abs(
        np.mod(tau + 0.5 * period, period) - 0.5 * period
    ), -1.0, 1.0)
    local = np.where(tau <= 0.5 * period, np.arccos(u), 2.0 * np.pi - np.arccos(u))
    return 2.0 * np.pi * n_period + local


def triangle_fm_solution(
    p: TriangleParams, length: int, sample_rate: float, t0: float = 0.0
) -> AMFMComponent:
    """Constant-amplitude reading of the triangle.

    IA = A everywhere; IF = (2*omega0/pi) / sqrt(1 - (x/A)^2), which
    averages omega0 over a period and equals 2*omega0/pi at the zero
    crossings.  The IF diverges at the wave's extrema, so samples within
    one sample period of an extremum are saturated and flagged.
    """
    t = _times(length, sample_rate, t0)
    dt = 1.0 / sample_rate
    x = gen_triangle(p, length, sample_rate, t0).samples
    u = x / p.amplitude
    u_edge = 1.0 - 2.0 * p.omega0 * dt / np.pi
    if u_edge <= 0.0:
        raise ContractError("sample_rate too low to resolve the triangle extrema")
    half = 0.5 * p.period
    dist = np.mod(t, half)
    dist = np.minimum(dist, half - dist)
    flagged = dist < dt
    u_sq = np.minimum(u * u, u_edge * u_edge)
    if_ = (2.0 * p.omega0 / np.pi) / np.sqrt(1.0 - u_sq)
    theta = _triangle_phase(p, t)
    return AMFMComponent(
        s=x,
        sample_rate=sample_rate,
        t0=t0,
        ia=np.full(length, p.amplitude),
        if_=if_,
        phase_ref=float(theta[0]),
        sigma=p.amplitude * np.sin(theta),
        singular=flagged,
    )


def triangle_am_solution(
    p: TriangleParams, length: int, sample_rate: float, t0: float = 0.0
) -> AMFMComponent:
    """Constant-frequency reading of the triangle.

    IF = omega0 everywhere; IA = x / cos(omega0 t), which is singular
    wherever the carrier crosses zero.  Samples within one sample period
    of a carrier zero use a saturated denominator and are flagged; the
    amplitude is legitimately sign-indefinite between flags.
    """
    t = _times(length, sample_rate, t0)
    dt = 1.0 / sample_rate
    x = gen_triangle(p, length, sample_rate, t0).samples
    c = np.cos(p.omega0 * t)
    floor = np.sin(min(p.omega0 * dt, 0.5 * np.pi))
    flagged = np.abs(c) < floor
    denom = np.where(c >= 0.0, 1.0, -1.0) * np.maximum(np.abs(c), floor)
    return AMFMComponent(
        s=x,
        sample_rate=sample_rate,
        t0=t0,
        ia=x / denom,
        if_=np.full(length, p.omega0),
        phase_ref=p.omega0 * t0,
        sigma=(x / denom) * np.sin(p.omega0 * t),
        singular=flagged,
    )


def triangle_hc_solution(
    p: TriangleParams,
    length: int,
    sample_rate: float,
    t0: float = 0.0,
    k_max: int = 10_000,
) -> AMFMComponent:
    """Harmonically correspondent reading of the triangle.

    Collapses the Fourier series onto the fundamental: with
    C(t) = sum_{k=0}^{k_max-1} e^{j 2 k omega0 t} / (2k+1)^2, the
    component is IA = (8A/pi^2) |C| and IF = omega0 + d/dt arg C.
    k_max counts series terms; k_max = 1 degenerates to the constant
    fundamental.  C never vanishes, so nothing is flagged.
    """
    if k_max < 1:
        raise ContractError("k_max must be >= 1")
    t = _times(length, sample_rate, t0)
    rot = np.exp(2j * p.omega0 * t)
    term = np.ones(length, dtype=np.complex128)
    acc = np.zeros(length, dtype=np.complex128)
    for k in range(k_max):
        acc += term / (2 * k + 1) ** 2
        term *= rot
    ia = (8.0 * p.amplitude / np.pi**2) * np.abs(acc)
    m0 = np.unwrap(np.angle(acc))
    theta = p.omega0 * t + m0
    if length >= 3:
        if_ = p.omega0 + derivative(m0, sample_rate)
    else:
        if_ = np.full(length, p.omega0)
    return AMFMComponent(
        s=ia * np.cos(theta),
        sample_rate=sample_rate,
        t0=t0,
        ia=ia,
        if_=if_,
        phase_ref=float(theta[0]),
        sigma=ia * np.sin(theta),
    )


@dataclass
class SinFMParams:
    """Sinusoidal FM: carrier omega_c, message omega_m, index B (all rad/s, B unitless)."""

    omega_c: float
    omega_m: float
    b: float

    def __post_init__(self) -> None:
        if self.omega_c <= 0.0 or self.omega_m <= 0.0:
            raise ContractError("omega_c and omega_m must be positive")
        if self.b < 0.0:
            raise ContractError("b must be nonnegative")


def gen_sin_fm(
    p: SinFMParams, length: int, sample_rate: float, t0: float = 0.0
) -> SampledSignal:
    """x(t) = cos(omega_c t + B sin(omega_m t))."""
    t = _times(length, sample_rate, t0)
    return SampledSignal(
        np.cos(p.omega_c * t + p.b * np.sin(p.omega_m * t)), sample_rate, t0
    )


def sin_fm_solution(
    p: SinFMParams, length: int, sample_rate: float, t0: float = 0.0
) -> AMFMComponent:
    """Exact modulation laws of gen_sin_fm: IA = 1,
    IF = omega_c + B * omega_m * cos(omega_m t)."""
    t = _times(length, sample_rate, t0)
    theta = p.omega_c * t + p.b * np.sin(p.omega_m * t)
    return AMFMComponent(
        s=np.cos(theta),
        sample_rate=sample_rate,
        t0=t0,
        ia=np.ones(length),
        if_=p.omega_c + p.b * p.omega_m * np.cos(p.omega_m * t),
        phase_ref=float(theta[0]),
        sigma=np.sin(theta),
    )


def bessel_j(k: int, x: float) -> float:
    """Bessel function of the first kind, integer order.

    Power series below |x| = 8; Miller's normalized downward recurrence
    above, where the alternating series sheds too many digits to
    cancellation.  Good to ~1e-12 relative over the orders used here.
    """
    k = int(k)
    x = float(x)
    if k < 0:
        return bessel_j(-k, x) * (-1.0 if k % 2 else 1.0)
    if x < 0.0:
        return bessel_j(k, -x) * (-1.0 if k % 2 else 1.0)
    if x == 0.0:
        return 1.0 if k == 0 else 0.0
    if x <= 8.0:
        return _bessel_series(k, x)
    return _bessel_miller(k, x)


def _bessel_series(k: int, x: float) -> float:
    half = 0.5 * x
    term = half**k / math.factorial(k)
    total = term
    m = 0
    while True:
        m += 1
        term *= -(half * half) / (m * (k + m))
        total += term
        if abs(term) <= 1e-18 * max(abs(total), 1e-300) and m > half:
            return total


def _bessel_miller(k: int, x: float) -> float:
    top = max(k, int(x)) + 40
    if top % 2:
        top += 1
    jp = 0.0
    jc = 1e-300
    norm = 0.0
    wanted = 0.0
    for m in range(top, 0, -1):
        jm = (2.0 * m / x) * jc - jp
        jp = jc
        jc = jm
        if m - 1 == k:
            wanted = jc
        if (m - 1) % 2 == 0 and m - 1 > 0:
            norm += 2.0 * jc
        if abs(jc) > 1e250:
            jc *= 1e-250
            jp *= 1e-250
            norm *= 1e-250
            wanted *= 1e-250
    norm += jc
    if k == 0:
        wanted = jc
    return wanted / norm


def sin_fm_bessel_coeffs(
    p: SinFMParams, k_range: Iterable[int]
) -> list[tuple[int, float, float]]:
    """Constant-line expansion of gen_sin_fm.

    Expanding e^{jB sin(omega_m t)} in Bessel functions turns the FM
    signal into sum_k J_k(B) cos((omega_c + k omega_m) t): signed
    constant amplitudes at shifted carriers, all with zero phase offset.
    Returns (k, amplitude, omega) triples.
    """
    return [
        (int(k), bessel_j(int(k), p.b), p.omega_c + int(k) * p.omega_m)
        for k in k_range
    ]


@dataclass
class FMMessageSpec:
    """An AM law plus an FM message around a carrier.

    units_mode selects how carrier and fm_law are read: "hz" treats the
    carrier and message as Hz deviations (IF = 2*pi*(carrier + m(t)) in
    rad/s), "rad_per_s" treats them as angular quantities directly.
    fm_integral, when given, must be the exact antiderivative of fm_law
    with value 0 at t = 0; otherwise the phase integral is numeric.
    """

    carrier: float
    am_law: Callable[[np.ndarray], np.ndarray]
    fm_law: Callable[[np.ndarray], np.ndarray]
    fm_integral: Callable[[np.ndarray], np.ndarray] | None = None
    units_mode: str = "hz"

    def __post_init__(self) -> None:
        if self.units_mode not in ("hz", "rad_per_s"):
            raise ContractError(f"units_mode must be 'hz' or 'rad_per_s', got {self.units_mode!r}")


def gen_example_signal(
    spec: FMMessageSpec, length: int, sample_rate: float, t0: float = 0.0
) -> tuple[SampledSignal, np.ndarray, np.ndarray]:
    """Synthesize an AM-FM example and return (signal, true IA, true IF).

    The returned IF is always rad/s regardless of units_mode.
    """
    t = _times(length, sample_rate, t0)
    m = np.asarray(spec.fm_law(t), dtype=np.float64)
    if spec.fm_integral is not None:
        big_m = np.asarray(spec.fm_integral(t), dtype=np.float64)
    else:
        from scipy.integrate import cumulative_trapezoid

        big_m = cumulative_trapezoid(m, t, initial=0.0)
    if spec.units_mode == "hz":
        theta = 2.0 * np.pi * (spec.carrier * t + big_m)
        if_true = 2.0 * np.pi * (spec.carrier + m)
    else:
        theta = spec.carrier * t + big_m
        if_true = spec.carrier + m
    ia_true = np.asarray(spec.am_law(t), dtype=np.float64)
    return SampledSignal(ia_true * np.cos(theta), sample_rate, t0), ia_true, if_true


def example1_spec(units_mode: str = "hz") -> FMMessageSpec:
    """Gaussian-envelope sweep: 3 kHz carrier, message
    250 sin(140 pi t) + 2000 (e^{-4t} - 1) Hz."""
    carrier_hz = 3000.0

    def am(t):
        return np.exp(-((t - 0.5) ** 2) / 25.0)

    def fm(t):
        return 250.0 * np.sin(140.0 * np.pi * t) + 2000.0 * (np.exp(-4.0 * t) - 1.0)

    def fm_int(t):
        return 250.0 * (1.0 - np.cos(140.0 * np.pi * t)) / (140.0 * np.pi) + 2000.0 * (
            (1.0 - np.exp(-4.0 * t)) / 4.0 - t
        )

    if units_mode == "hz":
        return FMMessageSpec(carrier_hz, am, fm, fm_int, "hz")
    return FMMessageSpec(
        2.0 * np.pi * carrier_hz,
        am,
        lambda t: 2.0 * np.pi * fm(t),
        lambda t: 2.0 * np.pi * fm_int(t),
        "rad_per_s",
    )


def example2_spec(units_mode: str = "rad_per_s") -> FMMessageSpec:
    """Two-tone AM around a 500 Hz carrier with a slow 150 rad/s
    sinusoidal message."""

    def am(t):
        return 0.5 + np.sin(100.0 * np.pi * t) / 3.0 + np.sin(200.0 * np.pi * t) / 5.0

    def fm(t):
        return 150.0 * np.sin(2.0 * np.pi * t)

    def fm_int(t):
        return 150.0 * (1.0 - np.cos(2.0 * np.pi * t)) / (2.0 * np.pi)

    if units_mode == "rad_per_s":
        return FMMessageSpec(1000.0 * np.pi, am, fm, fm_int, "rad_per_s")
    return FMMessageSpec(
        500.0,
        am,
        lambda t: fm(t) / (2.0 * np.pi),
        lambda t: fm_int(t) / (2.0 * np.pi),
        "hz",
    )


def gen_two_tone(
    omega_a: float,
    omega_b: float,
    length: int,
    sample_rate: float,
    t0: float = 0.0,
) -> SampledSignal:
    """cos(omega_a t) + cos(omega_b t), omega_b >= omega_a > 0."""
    if omega_a <= 0.0 or omega_b < omega_a:
        raise ContractError("need omega_b >= omega_a > 0")
    t = _times(length, sample_rate, t0)
    return SampledSignal(np.cos(omega_a * t) + np.cos(omega_b * t), sample_rate, t0)


def two_tone_envelope(omega_a: float, omega_b: float, times: np.ndarray) -> np.ndarray:
    """Beat envelope of the two-tone sum: 2 |cos((omega_b - omega_a) t / 2)|."""
    return 2.0 * np.abs(np.cos(0.5 * (omega_b - omega_a) * np.asarray(times)))
