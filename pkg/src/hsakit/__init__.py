"""Hilbert spectral analysis via latent AM-FM components.

Decomposes a sampled signal into AM-FM modes (plain, ensemble, and
complementary-ensemble sifting with optional tone masking), demodulates
each mode without a Hilbert transform, and writes portable spectrum
files.  Closed-form oracle signals and two classical demodulation
baselines ship alongside for validation.
"""

__version__ = "0.1.0"

from .decompose import (
    DecomposeConfig,
    MaskingSignal,
    amplitude_weighted_if,
    ceemd,
    eemd,
    emd,
    make_masking_noise,
    tone_mask,
)
from .demod import (
    FMSignal,
    gabor_as_demod,
    ia_est,
    imf_demod,
    iter_am_removal,
    quadrature_fm,
    teo_demod,
)
from .envelope import EnvelopePair, ExtremaSet, cubic_spline, envelopes, find_extrema
from .errors import ContractError, NotSiftableError, NumericError
from .hsa import HSAConfig, hsa_imf
from .io import (
    SCHEMA_VERSION,
    SpectrumFile,
    read_signal,
    read_spectrum,
    write_spectrum,
)
from .oracles import (
    FMMessageSpec,
    SinFMParams,
    TriangleParams,
    bessel_j,
    example1_spec,
    example2_spec,
    gen_example_signal,
    gen_sin_fm,
    gen_triangle,
    gen_two_tone,
    sin_fm_bessel_coeffs,
    sin_fm_solution,
    triangle_am_solution,
    triangle_fm_solution,
    triangle_fs_coeffs,
    triangle_hc_solution,
    triangle_shc_components,
    two_tone_envelope,
)
from .sift import ImfCheck, SiftConfig, SiftState, is_imf, sift
from .signal import (
    AMFMComponent,
    HilbertSpectrum,
    SampledSignal,
    cumulative_integral,
    derivative,
    moving_average,
    synthesize,
)
from .stft import STFTParams, STFTResult, stft_magnitude

__all__ = [
    "__version__",
    "AMFMComponent",
    "ContractError",
    "DecomposeConfig",
    "EnvelopePair",
    "ExtremaSet",
    "FMMessageSpec",
    "FMSignal",
    "HSAConfig",
    "HilbertSpectrum",
    "ImfCheck",
    "MaskingSignal",
    "NotSiftableError",
    "NumericError",
    "SCHEMA_VERSION",
    "STFTParams",
    "STFTResult",
    "SampledSignal",
    "SiftConfig",
    "SiftState",
    "SinFMParams",
    "SpectrumFile",
    "TriangleParams",
    "amplitude_weighted_if",
    "bessel_j",
    "ceemd",
    "cubic_spline",
    "cumulative_integral",
    "derivative",
    "eemd",
    "emd",
    "envelopes",
    "example1_spec",
    "example2_spec",
    "find_extrema",
    "gabor_as_demod",
    "gen_example_signal",
    "gen_sin_fm",
    "gen_triangle",
    "gen_two_tone",
    "hsa_imf",
    "ia_est",
    "imf_demod",
    "is_imf",
    "iter_am_removal",
    "make_masking_noise",
    "moving_average",
    "quadrature_fm",
    "read_signal",
    "read_spectrum",
    "sift",
    "sin_fm_bessel_coeffs",
    "sin_fm_solution",
    "stft_magnitude",
    "synthesize",
    "teo_demod",
    "tone_mask",
    "triangle_am_solution",
    "triangle_fm_solution",
    "triangle_fs_coeffs",
    "triangle_hc_solution",
    "triangle_shc_components",
    "two_tone_envelope",
    "write_spectrum",
]
