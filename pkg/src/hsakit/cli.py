"""Command-line surface.

Subcommands mirror the library: synth writes oracle signals or their
closed-form spectra, emd/eemd/ceemd write delimited decomposition
tables, demod and hsa write portable spectrum JSON (frequencies in Hz),
stft writes a magnitude grid, info prints a file summary.

Exit codes: 0 success, 2 argument/parse/contract problems, 3 numeric
failures on otherwise valid input.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import __version__
from .decompose import DecomposeConfig, ceemd, eemd, emd
from .demod import gabor_as_demod, imf_demod, teo_demod
from .envelope import find_extrema
from .errors import ContractError, NumericError
from .hsa import HSAConfig, hsa_imf
from .io import (
    SpectrumFile,
    read_signal,
    write_component_csv,
    write_imfs_csv,
    write_signal_csv,
    write_spectrum,
    write_stft_csv,
)
from .oracles import (
    SinFMParams,
    TriangleParams,
    example1_spec,
    example2_spec,
    gen_example_signal,
    gen_sin_fm,
    gen_triangle,
    gen_two_tone,
    sin_fm_solution,
    triangle_am_solution,
    triangle_fm_solution,
    triangle_hc_solution,
    triangle_shc_components,
)
from .sift import SiftConfig
from .signal import HilbertSpectrum, SampledSignal
from .stft import STFTParams, stft_magnitude

__all__ = ["main"]


def _add_input_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("input", help="signal file (csv/wav)")
    p.add_argument("--format", choices=("csv", "wav"), default=None,
                   help="override format inference from the extension")
    p.add_argument("--rate", type=float, default=None,
                   help="sample rate in Hz for single-column text input")


def _add_sift_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--alpha", type=float, default=0.95,
                   help="fraction of the envelope mean removed per pass")
    p.add_argument("--resolution-db", type=float, default=50.0,
                   help="sift stop threshold in dB")
    p.add_argument("--max-iterations", type=int, default=50,
                   help="sifting pass cap")


def _add_decompose_args(p: argparse.ArgumentParser, noisy: bool) -> None:
    _add_sift_args(p)
    p.add_argument("--energy-threshold", type=float, default=1e-10,
                   help="stop once residual energy falls below this fraction of the input")
    p.add_argument("--max-components", type=int, default=16)
    if noisy:
        p.add_argument("-I", "--trials", type=int, default=1,
                       help="ensemble size")
        p.add_argument("--beta", type=float, nargs="+", default=[0.0],
                       help="per-level noise amplitude as a fraction of std(x)")
        p.add_argument("--seed", type=int, required=True,
                       help="base seed; trial i uses seed + i")


def _decompose_config(args, noisy: bool) -> DecomposeConfig:
    return DecomposeConfig(
        sift=SiftConfig(
            alpha=args.alpha,
            resolution_db=args.resolution_db,
            max_iterations=args.max_iterations,
        ),
        trials=args.trials if noisy else 1,
        snr_factors=tuple(args.beta) if noisy else (0.0,),
        energy_threshold=args.energy_threshold,
        noise_seed=args.seed if noisy else 0,
        max_components=args.max_components,
    )


def _grid(args) -> tuple[int, float, float]:
    length = int(round(args.duration * args.rate))
    if length < 1:
        raise ContractError("duration * rate must give at least one sample")
    return length, args.rate, args.t0


def _write_truth(path: str, x: SampledSignal, ia: np.ndarray, if_rad: np.ndarray) -> None:
    from .io import _fmt

    lines = ["t,ia,if_hz"]
    for ti, ai, wi in zip(x.times, ia, if_rad):
        lines.append(f"{_fmt(ti)},{_fmt(ai)},{_fmt(wi / (2.0 * np.pi))}")
    from pathlib import Path

    Path(path).write_text("\n".join(lines) + "\n")


def _cmd_synth(args) -> int:
    length, rate, t0 = _grid(args)
    header = not args.no_header
    if args.kind == "triangle":
        p = TriangleParams(args.amplitude, 2.0 * np.pi * args.f0)
        if args.solution is None:
            write_signal_csv(gen_triangle(p, length, rate, t0), args.output, header)
            return 0
        if args.solution == "shc":
            comps = triangle_shc_components(p, args.num_components, length, rate, t0)
        elif args.solution == "fm":
            comps = [triangle_fm_solution(p, length, rate, t0)]
        elif args.solution == "am":
            comps = [triangle_am_solution(p, length, rate, t0)]
        else:
            comps = [triangle_hc_solution(p, length, rate, t0, args.k_max)]
        spectrum = HilbertSpectrum(
            components=comps, residual=SampledSignal(np.zeros(length), rate, t0)
        )
        sf = SpectrumFile.from_spectrum(
            spectrum,
            config={
                "command": "synth",
                "kind": "triangle",
                "solution": args.solution,
                "amplitude": args.amplitude,
                "f0": args.f0,
            },
            tool_version=__version__,
        )
        write_spectrum(sf, args.output)
        return 0
    if args.kind == "sinfm":
        p = SinFMParams(
            2.0 * np.pi * args.carrier_hz, 2.0 * np.pi * args.mod_hz, args.index
        )
        x = gen_sin_fm(p, length, rate, t0)
        write_signal_csv(x, args.output, header)
        if args.truth:
            sol = sin_fm_solution(p, length, rate, t0)
            _write_truth(args.truth, x, sol.ia, sol.if_)
        return 0
    if args.kind == "twotone":
        x = gen_two_tone(
            2.0 * np.pi * args.fa, 2.0 * np.pi * args.fb, length, rate, t0
        )
        write_signal_csv(x, args.output, header)
        return 0
    spec = example1_spec(args.units or "hz") if args.kind == "example1" else \
        example2_spec(args.units or "rad_per_s")
    x, ia, if_rad = gen_example_signal(spec, length, rate, t0)
    write_signal_csv(x, args.output, header)
    if args.truth:
        _write_truth(args.truth, x, ia, if_rad)
    return 0


def _cmd_decompose(args) -> int:
    noisy = args.command in ("eemd", "ceemd")
    x = read_signal(args.input, args.format, args.rate)
    cfg = _decompose_config(args, noisy)
    driver = {"emd": emd, "eemd": eemd, "ceemd": ceemd}[args.command]
    spectrum = driver(x, cfg)
    write_imfs_csv(spectrum, args.output, header=not args.no_header)
    return 0


def _cmd_demod(args) -> int:
    x = read_signal(args.input, args.format, args.rate)
    if args.method == "imf":
        comp = imf_demod(x, args.smooth_ms / 1000.0)
    elif args.method == "gabor":
        comp = gabor_as_demod(x)
    else:
        comp = teo_demod(x)
    spectrum = HilbertSpectrum(
        components=[comp],
        residual=SampledSignal(np.zeros(len(x)), x.sample_rate, x.t0),
    )
    sf = SpectrumFile.from_spectrum(
        spectrum,
        config={"command": "demod", "method": args.method, "smooth_ms": args.smooth_ms},
        tool_version=__version__,
    )
    write_spectrum(sf, args.output)
    if args.csv:
        write_component_csv(comp, args.csv, header=not args.no_header)
    return 0


def _cmd_hsa(args) -> int:
    x = read_signal(args.input, args.format, args.rate)
    cfg = HSAConfig(
        decompose=_decompose_config(args, noisy=True),
        demod_smooth_seconds=args.smooth_ms / 1000.0,
        mask_kind=args.mask_kind,
        cutoff_fraction=args.cutoff_fraction,
    )
    spectrum = hsa_imf(x, cfg)
    sf = SpectrumFile.from_spectrum(
        spectrum,
        config={
            "command": "hsa",
            "alpha": args.alpha,
            "resolution_db": args.resolution_db,
            "max_iterations": args.max_iterations,
            "energy_threshold": args.energy_threshold,
            "max_components": args.max_components,
            "trials": args.trials,
            "beta": list(args.beta),
            "seed": args.seed,
            "mask_kind": args.mask_kind,
            "cutoff_fraction": args.cutoff_fraction,
            "smooth_ms": args.smooth_ms,
        },
        tool_version=__version__,
    )
    write_spectrum(sf, args.output)
    if args.csv:
        from .io import _fmt
        from pathlib import Path

        names = ["t"]
        cols = [spectrum.residual.times]
        for k, c in enumerate(spectrum.components):
            names += [f"a{k + 1}", f"omega_hz{k + 1}", f"s{k + 1}"]
            cols += [c.ia, c.if_ / (2.0 * np.pi), c.s]
        names.append("residual")
        cols.append(spectrum.residual.samples)
        lines = [",".join(names)] if not args.no_header else []
        for i in range(len(x)):
            lines.append(",".join(_fmt(col[i]) for col in cols))
        Path(args.csv).write_text("\n".join(lines) + "\n")
    return 0


def _cmd_stft(args) -> int:
    x = read_signal(args.input, args.format, args.rate)
    result = stft_magnitude(x, STFTParams(args.window, args.hop))
    write_stft_csv(result, args.output, header=not args.no_header)
    return 0


def _cmd_info(args) -> int:
    x = read_signal(args.input, args.format, args.rate)
    ext = find_extrema(x)
    y = x.samples
    print(f"samples:        {len(x)}")
    print(f"sample rate:    {x.sample_rate:g} Hz")
    print(f"t0:             {x.t0:g} s")
    print(f"duration:       {x.duration:g} s")
    print(f"min/max:        {y.min():.6g} / {y.max():.6g}")
    print(f"rms:            {np.sqrt(np.mean(y * y)):.6g}")
    print(f"maxima:         {ext.maxima.shape[0]}")
    print(f"minima:         {ext.minima.shape[0]}")
    print(f"zero crossings: {ext.zero_crossings}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hsakit",
        description="Hilbert spectral analysis via AM-FM decomposition",
    )
    parser.add_argument("--version", action="version", version=f"hsakit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="write an oracle signal or closed-form spectrum")
    p.add_argument("kind", choices=("triangle", "sinfm", "twotone", "example1", "example2"))
    p.add_argument("--rate", type=float, default=8000.0)
    p.add_argument("--duration", type=float, default=1.0)
    p.add_argument("--t0", type=float, default=0.0)
    p.add_argument("--amplitude", type=float, default=1.0, help="triangle peak")
    p.add_argument("--f0", type=float, default=25.0, help="triangle fundamental, Hz")
    p.add_argument("--solution", choices=("shc", "fm", "am", "hc"), default=None,
                   help="triangle only: write this closed-form spectrum as JSON")
    p.add_argument("--num-components", type=int, default=3,
                   help="series terms for --solution shc")
    p.add_argument("--k-max", type=int, default=10_000,
                   help="series terms for --solution hc")
    p.add_argument("--carrier-hz", type=float, default=55.0)
    p.add_argument("--mod-hz", type=float, default=2.0)
    p.add_argument("--index", type=float, default=25.0, help="FM modulation index")
    p.add_argument("--fa", type=float, default=100.0, help="two-tone low frequency, Hz")
    p.add_argument("--fb", type=float, default=110.0, help="two-tone high frequency, Hz")
    p.add_argument("--units", choices=("hz", "rad_per_s"), default=None,
                   help="message units for example1/example2")
    p.add_argument("--truth", default=None, help="also write t,ia,if_hz ground truth")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--no-header", action="store_true")
    p.set_defaults(func=_cmd_synth)

    for name, noisy in (("emd", False), ("eemd", True), ("ceemd", True)):
        p = sub.add_parser(name, help=f"{name} decomposition to a delimited table")
        _add_input_args(p)
        _add_decompose_args(p, noisy)
        p.add_argument("-o", "--output", required=True)
        p.add_argument("--no-header", action="store_true")
        p.set_defaults(func=_cmd_decompose)

    p = sub.add_parser("demod", help="demodulate a single mode to a spectrum file")
    p.add_argument("method", choices=("imf", "gabor", "teo"))
    _add_input_args(p)
    p.add_argument("--smooth-ms", type=float, default=0.0,
                   help="IF moving-average window (imf method only)")
    p.add_argument("-o", "--output", required=True, help="spectrum JSON path")
    p.add_argument("--csv", default=None, help="also write t,a,omega_hz,s CSV")
    p.add_argument("--no-header", action="store_true")
    p.set_defaults(func=_cmd_demod)

    p = sub.add_parser("hsa", help="full masked-ensemble analysis to a spectrum file")
    _add_input_args(p)
    _add_decompose_args(p, noisy=True)
    p.add_argument("--mask-kind", choices=("filtered_noise", "sifted_noise"),
                   default="filtered_noise")
    p.add_argument("--cutoff-fraction", type=float, default=0.9)
    p.add_argument("--smooth-ms", type=float, default=1.0)
    p.add_argument("-o", "--output", required=True, help="spectrum JSON path")
    p.add_argument("--csv", default=None, help="also write a wide delimited table")
    p.add_argument("--no-header", action="store_true")
    p.set_defaults(func=_cmd_hsa)

    p = sub.add_parser("stft", help="short-time Fourier magnitude grid")
    _add_input_args(p)
    p.add_argument("--window", type=int, default=1024)
    p.add_argument("--hop", type=int, default=16)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--no-header", action="store_true")
    p.set_defaults(func=_cmd_stft)

    p = sub.add_parser("info", help="print a signal summary")
    _add_input_args(p)
    p.set_defaults(func=_cmd_info)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ContractError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
