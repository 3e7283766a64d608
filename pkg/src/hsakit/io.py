"""File ingestion and the portable spectrum format.

Signals come in as delimited text (one or two columns) or WAV; spectra
go out as a versioned JSON document with every float printed at 17
significant digits.  That precision round-trips IEEE doubles exactly,
so write -> read -> write is byte-identical, and the serializer keeps a
fixed key order for the same reason.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.io import wavfile

from .errors import ContractError
from .signal import AMFMComponent, HilbertSpectrum, SampledSignal
from .stft import STFTResult

__all__ = [
    "SCHEMA_VERSION",
    "SpectrumFile",
    "read_signal",
    "write_signal_csv",
    "write_imfs_csv",
    "write_component_csv",
    "write_stft_csv",
    "write_spectrum",
    "read_spectrum",
]

SCHEMA_VERSION = 1

# maximum relative deviation of the time column from a uniform grid
_UNIFORM_TOL = 1e-6


def _fmt(value: float) -> str:
    return format(float(value), ".17g")


def read_signal(
    path: str | Path, fmt: str | None = None, sample_rate: float | None = None
) -> SampledSignal:
    """Load a signal from CSV/TSV-style text or a WAV file.

    Text files carry either a single sample column (``sample_rate`` is
    then required) or time,value pairs whose time column must be
    uniform to one part in 1e6.  A header row is detected and skipped.
    WAV input uses the first channel; PCM16/PCM24 scale to [-1, 1) by
    their full-scale value, float data passes through.
    """
    path = Path(path)
    if fmt is None:
        suffix = path.suffix.lower()
        if suffix == ".wav":
            fmt = "wav"
        elif suffix in (".csv", ".txt", ".tsv", ".dat"):
            fmt = "csv"
        else:
            raise ContractError(f"cannot infer format from {path.name!r}; pass fmt")
    if fmt == "wav":
        return _read_wav(path)
    if fmt == "csv":
        return _read_csv(path, sample_rate)
    raise ContractError(f"unknown format {fmt!r}; expected 'csv' or 'wav'")


def _read_csv(path: Path, sample_rate: float | None) -> SampledSignal:
    try:
        text = path.read_text()
    except OSError as exc:
        raise ContractError(f"cannot read {path}: {exc}") from exc
    rows = []
    for line_no, line in enumerate(text.splitlines()):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = [p for p in line.replace("\t", ",").split(",") if p.strip()]
        try:
            rows.append([float(p) for p in parts])
        except ValueError:
            if line_no == 0:
                continue  # header row
            raise ContractError(f"{path}: non-numeric data on line {line_no + 1}")
    if not rows:
        raise ContractError(f"{path}: no data rows")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ContractError(f"{path}: inconsistent column count")
    data = np.asarray(rows, dtype=np.float64)
    if width == 1:
        if sample_rate is None:
            raise ContractError("single-column input needs an explicit sample rate")
        return SampledSignal(data[:, 0], sample_rate, 0.0)
    if width == 2:
        t, x = data[:, 0], data[:, 1]
        if t.size < 2:
            raise ContractError(f"{path}: need at least 2 samples to infer the rate")
        dt = np.diff(t)
        med = float(np.median(dt))
        if med <= 0.0:
            raise ContractError(f"{path}: time column must increase")
        if float(np.max(np.abs(dt - med))) > _UNIFORM_TOL * med:
            raise ContractError(f"{path}: time grid is not uniform (tolerance {_UNIFORM_TOL})")
        fs = (t.size - 1) / float(t[-1] - t[0])
        return SampledSignal(x, fs, float(t[0]))
    raise ContractError(f"{path}: expected 1 or 2 columns, found {width}")


def _read_wav(path: Path) -> SampledSignal:
    try:
        rate, data = wavfile.read(path)
    except (OSError, ValueError) as exc:
        raise ContractError(f"cannot read WAV {path}: {exc}") from exc
    if data.ndim > 1:
        data = data[:, 0]
    if data.size == 0:
        raise ContractError(f"{path}: empty WAV file")
    if data.dtype == np.int16:
        samples = data / 32768.0
    elif data.dtype == np.int32:
        samples = data / 2147483648.0
    elif data.dtype == np.uint8:
        samples = (data.astype(np.float64) - 128.0) / 128.0
    elif data.dtype in (np.float32, np.float64):
        samples = data.astype(np.float64)
    else:
        raise ContractError(f"{path}: unsupported WAV sample format {data.dtype}")
    return SampledSignal(samples, float(rate), 0.0)


def write_signal_csv(x: SampledSignal, path: str | Path, header: bool = True) -> None:
    lines = ["t,x"] if header else []
    t = x.times
    lines.extend(f"{_fmt(ti)},{_fmt(vi)}" for ti, vi in zip(t, x.samples))
    Path(path).write_text("\n".join(lines) + "\n")


def write_imfs_csv(spectrum: HilbertSpectrum, path: str | Path, header: bool = True) -> None:
    """Delimited decomposition table: t, c1..cK, residual."""
    n = len(spectrum.residual)
    cols = [spectrum.residual.times] + [c.s for c in spectrum.components]
    cols.append(spectrum.residual.samples)
    names = ["t"] + [f"c{k + 1}" for k in range(len(spectrum.components))] + ["residual"]
    lines = [",".join(names)] if header else []
    for i in range(n):
        lines.append(",".join(_fmt(col[i]) for col in cols))
    Path(path).write_text("\n".join(lines) + "\n")


def write_component_csv(comp: AMFMComponent, path: str | Path, header: bool = True) -> None:
    """Delimited demodulation table: t, a, omega_hz, s."""
    if not comp.is_demodulated:
        raise ContractError("component is not demodulated")
    lines = ["t,a,omega_hz,s"] if header else []
    omega_hz = comp.if_ / (2.0 * np.pi)
    for ti, ai, fi, si in zip(comp.times, comp.ia, omega_hz, comp.s):
        lines.append(f"{_fmt(ti)},{_fmt(ai)},{_fmt(fi)},{_fmt(si)}")
    Path(path).write_text("\n".join(lines) + "\n")


def write_stft_csv(result: STFTResult, path: str | Path, header: bool = True) -> None:
    """Frame-major magnitude grid; first column is the frame time."""
    lines = []
    if header:
        lines.append(",".join(["t"] + [_fmt(f) for f in result.frequencies_hz]))
    for i, ti in enumerate(result.times):
        lines.append(",".join([_fmt(ti)] + [_fmt(v) for v in result.magnitude[i]]))
    Path(path).write_text("\n".join(lines) + "\n")


@dataclass
class SpectrumFile:
    """In-memory image of the portable spectrum document.

    components hold plain dicts with keys t, a, omega_hz, s (parallel
    float lists) and singular (flagged sample indices).  metadata always
    carries sample_rate, t0, length, tool_version, and the config echo.
    """

    metadata: dict
    components: list[dict] = field(default_factory=list)
    residual: list[float] = field(default_factory=list)
    schema_version: int = SCHEMA_VERSION

    @classmethod
    def from_spectrum(
        cls,
        spectrum: HilbertSpectrum,
        config: dict | None = None,
        tool_version: str = "0",
    ) -> "SpectrumFile":
        meta = {
            "sample_rate": float(spectrum.sample_rate),
            "t0": float(spectrum.t0),
            "length": len(spectrum.residual),
            "frequency_unit": "hz",
            "tool_version": tool_version,
            "config": config or {},
        }
        comps = []
        for k, c in enumerate(spectrum.components):
            if not c.is_demodulated:
                raise ContractError(f"component {k} is not demodulated; cannot serialize")
            omega_hz = c.if_ / (2.0 * np.pi)
            if not np.all(np.isfinite(omega_hz)):
                raise ContractError(f"component {k} has non-finite frequency samples")
            singular = (
                np.flatnonzero(c.singular).tolist() if c.singular is not None else []
            )
            comps.append(
                {
                    "t": c.times.tolist(),
                    "a": c.ia.tolist(),
                    "omega_hz": omega_hz.tolist(),
                    "s": c.s.tolist(),
                    "singular": singular,
                }
            )
        return cls(
            metadata=meta,
            components=comps,
            residual=spectrum.residual.samples.tolist(),
        )

    def to_spectrum(self) -> HilbertSpectrum:
        fs = float(self.metadata["sample_rate"])
        t0 = float(self.metadata["t0"])
        comps = []
        for c in self.components:
            n = len(c["s"])
            singular = np.zeros(n, dtype=bool)
            if c.get("singular"):
                singular[np.asarray(c["singular"], dtype=int)] = True
            a = np.asarray(c["a"], dtype=np.float64)
            if_ = 2.0 * np.pi * np.asarray(c["omega_hz"], dtype=np.float64)
            theta0 = _phase_at_start(a, c["s"])
            comps.append(
                AMFMComponent(
                    s=np.asarray(c["s"], dtype=np.float64),
                    sample_rate=fs,
                    t0=t0,
                    ia=a,
                    if_=if_,
                    phase_ref=theta0,
                    singular=singular if c.get("singular") else None,
                )
            )
        return HilbertSpectrum(
            components=comps, residual=SampledSignal(self.residual, fs, t0)
        )


def _phase_at_start(a: np.ndarray, s_list: list) -> float:
    s0 = float(s_list[0])
    a0 = float(a[0])
    if a0 == 0.0:
        return 0.0
    return float(np.arccos(np.clip(s0 / a0, -1.0, 1.0)))


def _emit(obj, out: list[str]) -> None:
    if isinstance(obj, dict):
        out.append("{")
        for i, (key, val) in enumerate(obj.items()):
            if i:
                out.append(",")
            out.append(json.dumps(str(key)))
            out.append(":")
            _emit(val, out)
        out.append("}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        out.append("[")
        for i, val in enumerate(obj):
            if i:
                out.append(",")
            _emit(val, out)
        out.append("]")
    elif isinstance(obj, bool):
        out.append("true" if obj else "false")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        if not np.isfinite(obj):
            raise ContractError("cannot serialize non-finite float")
        out.append(_fmt(obj))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif obj is None:
        out.append("null")
    else:
        raise ContractError(f"cannot serialize {type(obj).__name__}")


def write_spectrum(sf: SpectrumFile, path: str | Path) -> None:
    """Serialize with fixed key order and exact float text."""
    doc = {
        "schema_version": sf.schema_version,
        "metadata": sf.metadata,
        "components": sf.components,
        "residual": sf.residual,
    }
    out: list[str] = []
    _emit(doc, out)
    Path(path).write_bytes(("".join(out) + "\n").encode("utf-8"))


def read_spectrum(path: str | Path) -> SpectrumFile:
    """Parse and validate a spectrum document."""
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ContractError(f"cannot parse spectrum file {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise ContractError(f"{path}: top level must be an object")
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ContractError(
            f"{path}: unsupported schema version {version!r} (expected {SCHEMA_VERSION})"
        )
    meta = doc.get("metadata")
    if not isinstance(meta, dict):
        raise ContractError(f"{path}: missing metadata object")
    for key in ("sample_rate", "t0", "length", "tool_version"):
        if key not in meta:
            raise ContractError(f"{path}: metadata missing {key!r}")
    comps = doc.get("components")
    residual = doc.get("residual")
    if not isinstance(comps, list) or not isinstance(residual, list):
        raise ContractError(f"{path}: components and residual must be arrays")
    n = int(meta["length"])
    if len(residual) != n:
        raise ContractError(f"{path}: residual length {len(residual)} != {n}")
    for k, c in enumerate(comps):
        for key in ("t", "a", "omega_hz", "s"):
            if key not in c or len(c[key]) != n:
                raise ContractError(f"{path}: component {k} field {key!r} missing or wrong length")
        if not np.all(np.isfinite(np.asarray(c["omega_hz"], dtype=np.float64))):
            raise ContractError(f"{path}: component {k} has non-finite omega_hz")
    return SpectrumFile(
        metadata=meta,
        components=comps,
        residual=residual,
        schema_version=int(version),
    )
