"""Reader for the portable spectrum JSON format.

The format carries per-component time, amplitude, frequency (Hz), and
real-waveform series plus singular-sample indices, with grid metadata.
This module only reads; the analysis tool that writes these files is a
separate package and nothing here depends on it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

__all__ = ["SpectrumFormatError", "SpectrumComponent", "LoadedSpectrum", "load"]

SUPPORTED_SCHEMA_VERSION = 1

_COMPONENT_KEYS = ("t", "a", "omega_hz", "s", "singular")
_METADATA_KEYS = ("sample_rate", "t0", "length", "frequency_unit")


class SpectrumFormatError(ValueError):
    """The file is not a spectrum document this renderer understands."""


@dataclass
class SpectrumComponent:
    t: np.ndarray
    a: np.ndarray
    omega_hz: np.ndarray
    s: np.ndarray
    singular: np.ndarray

    def gapped(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """a, omega_hz, s with singular samples replaced by NaN.

        Flagged samples are interpolations, not measurements; plotting
        them as gaps keeps closed-form corner cases from drawing spikes.
        """
        a = self.a.copy()
        omega = self.omega_hz.copy()
        s = self.s.copy()
        if self.singular.size:
            a[self.singular] = np.nan
            omega[self.singular] = np.nan
            s[self.singular] = np.nan
        return a, omega, s


@dataclass
class LoadedSpectrum:
    sample_rate: float
    t0: float
    length: int
    components: list[SpectrumComponent]
    residual: np.ndarray | None
    metadata: dict = field(default_factory=dict)

    @property
    def nyquist_hz(self) -> float:
        return self.sample_rate / 2.0

    @property
    def t_end(self) -> float:
        return self.t0 + max(self.length - 1, 0) / self.sample_rate


def _vector(raw, name: str, length: int | None = None) -> np.ndarray:
    try:
        arr = np.asarray(raw, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise SpectrumFormatError(f"{name} is not a numeric array") from exc
    if arr.ndim != 1:
        raise SpectrumFormatError(f"{name} must be one-dimensional")
    if length is not None and arr.size != length:
        raise SpectrumFormatError(
            f"{name} has {arr.size} samples, expected {length}"
        )
    return arr


def _component(raw: dict, index: int) -> SpectrumComponent:
    for key in _COMPONENT_KEYS:
        if key not in raw:
            raise SpectrumFormatError(f"component {index} is missing '{key}'")
    t = _vector(raw["t"], f"component {index} t")
    n = t.size
    a = _vector(raw["a"], f"component {index} a", n)
    omega = _vector(raw["omega_hz"], f"component {index} omega_hz", n)
    s = _vector(raw["s"], f"component {index} s", n)
    for name, arr in (("a", a), ("omega_hz", omega), ("s", s)):
        if not np.all(np.isfinite(arr)):
            raise SpectrumFormatError(
                f"component {index} {name} contains non-finite values"
            )
    sing_raw = np.asarray(raw["singular"], dtype=np.int64).reshape(-1)
    if sing_raw.size and (sing_raw.min() < 0 or sing_raw.max() >= n):
        raise SpectrumFormatError(f"component {index} singular index out of range")
    return SpectrumComponent(t=t, a=a, omega_hz=omega, s=s, singular=sing_raw)


def load(path: str | Path) -> LoadedSpectrum:
    """Parse and validate one spectrum file."""
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise SpectrumFormatError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise SpectrumFormatError("top-level value must be an object")
    version = doc.get("schema_version")
    if version != SUPPORTED_SCHEMA_VERSION:
        raise SpectrumFormatError(
            f"unsupported schema_version {version!r}, "
            f"expected {SUPPORTED_SCHEMA_VERSION}"
        )
    meta = doc.get("metadata")
    if not isinstance(meta, dict):
        raise SpectrumFormatError("metadata object is missing")
    for key in _METADATA_KEYS:
        if key not in meta:
            raise SpectrumFormatError(f"metadata is missing '{key}'")
    if meta["frequency_unit"] != "hz":
        raise SpectrumFormatError(
            f"unsupported frequency_unit {meta['frequency_unit']!r}"
        )
    sample_rate = float(meta["sample_rate"])
    if not sample_rate > 0.0:
        raise SpectrumFormatError("sample_rate must be positive")
    length = int(meta["length"])
    if length < 0:
        raise SpectrumFormatError("length must be nonnegative")

    raw_components = doc.get("components", [])
    if not isinstance(raw_components, list):
        raise SpectrumFormatError("components must be a list")
    components = [_component(c, i) for i, c in enumerate(raw_components)]

    residual = None
    if doc.get("residual") is not None:
        residual = _vector(doc["residual"], "residual")

    return LoadedSpectrum(
        sample_rate=sample_rate,
        t0=float(meta["t0"]),
        length=length,
        components=components,
        residual=residual,
        metadata=meta,
    )
