"""Static figure renderer for AM-FM spectrum JSON files."""

from .render import RenderSpec, VIEWS, render
from .spectrum import (
    LoadedSpectrum,
    SpectrumComponent,
    SpectrumFormatError,
    load,
)

__all__ = [
    "LoadedSpectrum",
    "RenderSpec",
    "SpectrumComponent",
    "SpectrumFormatError",
    "VIEWS",
    "load",
    "render",
]

__version__ = "0.1.0"
