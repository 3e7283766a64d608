"""Figure rendering: one 3-D component view and three flat projections.

Every component is drawn as a line colored by its instantaneous
amplitude on a shared color scale, so weak components fade rather than
clutter. Each rendered view is written as PNG and SVG plus a small
JSON sidecar with the pixel geometry of the axes, which lets scripts
map data coordinates to image pixels without re-parsing the figure.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
from matplotlib.cm import ScalarMappable
from matplotlib.collections import LineCollection
from matplotlib.colors import Normalize
from mpl_toolkits.mplot3d.art3d import Line3DCollection

from .spectrum import LoadedSpectrum, load

__all__ = ["RenderSpec", "render", "VIEWS"]

VIEWS = ("3d", "time_frequency", "time_real", "real_frequency")

_FIGSIZE = (8.0, 6.0)


@dataclass
class RenderSpec:
    """What to draw and where to put it.

    stem defaults to the input file's stem; outputs are named
    <stem>_<view>.png, <stem>_<view>.svg, and <stem>_<view>.axes.json.
    """

    input: str | Path
    views: tuple[str, ...] = VIEWS
    colormap: str = "viridis"
    outdir: str | Path = "."
    stem: str | None = None
    dpi: int = 100

    def __post_init__(self) -> None:
        self.views = tuple(self.views)
        if not self.views:
            raise ValueError("at least one view is required")
        unknown = [v for v in self.views if v not in VIEWS]
        if unknown:
            raise ValueError(f"unknown views {unknown}, choose from {VIEWS}")
        if self.dpi <= 0:
            raise ValueError(f"dpi must be positive, got {self.dpi}")
        if self.colormap not in matplotlib.colormaps:
            raise ValueError(f"unknown colormap {self.colormap!r}")


def _flat_segments(
    x: np.ndarray, y: np.ndarray, a: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Per-sample line segments with their color values.

    Segments touching a NaN sample (a singular-sample gap) are dropped,
    which is what breaks the drawn line there.
    """
    pts = np.column_stack([x, y])
    segs = np.stack([pts[:-1], pts[1:]], axis=1)
    vals = 0.5 * (a[:-1] + a[1:])
    good = np.isfinite(segs).all(axis=(1, 2)) & np.isfinite(vals)
    return segs[good], vals[good]


def _amplitude_limit(sp: LoadedSpectrum) -> float:
    amp = max(
        (float(np.max(np.abs(c.s))) for c in sp.components if c.s.size),
        default=0.0,
    )
    if sp.residual is not None and sp.residual.size:
        amp = max(amp, float(np.max(np.abs(sp.residual))))
    return amp if amp > 0.0 else 1.0


def _draw_view(sp: LoadedSpectrum, view: str, spec: RenderSpec, norm: Normalize):
    fig = plt.figure(figsize=_FIGSIZE, dpi=spec.dpi)
    cmap = matplotlib.colormaps[spec.colormap]

    t_lo = sp.t0
    t_hi = sp.t_end
    if not t_hi > t_lo:
        t_hi = t_lo + 1.0
    amp = 1.05 * _amplitude_limit(sp)
    s_lim = (-amp, amp)
    f_lim = (0.0, sp.nyquist_hz)

    if view == "3d":
        ax = fig.add_subplot(projection="3d")
        for comp in sp.components:
            a, omega, s = comp.gapped()
            pts = np.column_stack([comp.t, s, omega])
            segs = np.stack([pts[:-1], pts[1:]], axis=1)
            vals = 0.5 * (a[:-1] + a[1:])
            good = np.isfinite(segs).all(axis=(1, 2)) & np.isfinite(vals)
            coll = Line3DCollection(segs[good], cmap=cmap, norm=norm)
            coll.set_array(vals[good])
            ax.add_collection3d(coll)
        ax.set_xlim(t_lo, t_hi)
        ax.set_ylim(*s_lim)
        ax.set_zlim(*f_lim)
        ax.set_xlabel("t (s)")
        ax.set_ylabel("amplitude")
        ax.set_zlabel("frequency (Hz)")
    else:
        ax = fig.add_subplot()
        for comp in sp.components:
            a, omega, s = comp.gapped()
            if view == "time_frequency":
                x, y = comp.t, omega
            elif view == "time_real":
                x, y = comp.t, s
            else:
                x, y = s, omega
            segs, vals = _flat_segments(x, y, a)
            coll = LineCollection(segs, cmap=cmap, norm=norm)
            coll.set_array(vals)
            ax.add_collection(coll)
        if view == "time_frequency":
            ax.set_xlim(t_lo, t_hi)
            ax.set_ylim(*f_lim)
            ax.set_xlabel("t (s)")
            ax.set_ylabel("frequency (Hz)")
        elif view == "time_real":
            ax.set_xlim(t_lo, t_hi)
            ax.set_ylim(*s_lim)
            ax.set_xlabel("t (s)")
            ax.set_ylabel("amplitude")
        else:
            ax.set_xlim(*s_lim)
            ax.set_ylim(*f_lim)
            ax.set_xlabel("amplitude")
            ax.set_ylabel("frequency (Hz)")

    fig.colorbar(ScalarMappable(norm=norm, cmap=cmap), ax=ax, label="|a|")
    return fig, ax


def _axes_metadata(fig, ax, view: str, dpi: int) -> dict:
    bbox = ax.get_window_extent()
    width, height = fig.canvas.get_width_height()
    meta = {
        "view": view,
        "width_px": int(width),
        "height_px": int(height),
        "dpi": dpi,
        "axes_bbox_px": {
            "x0": float(bbox.x0),
            "y0": float(bbox.y0),
            "x1": float(bbox.x1),
            "y1": float(bbox.y1),
        },
        "y_origin": "bottom",
        "xlim": [float(v) for v in ax.get_xlim()],
        "ylim": [float(v) for v in ax.get_ylim()],
    }
    if hasattr(ax, "get_zlim"):
        meta["zlim"] = [float(v) for v in ax.get_zlim()]
    return meta


def render(spec: RenderSpec) -> list[Path]:
    """Render every requested view, returning the written paths."""
    sp = load(spec.input)
    outdir = Path(spec.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    stem = spec.stem if spec.stem else Path(spec.input).stem

    vmax = max(
        (float(np.max(np.abs(c.a))) for c in sp.components if c.a.size),
        default=0.0,
    )
    norm = Normalize(vmin=0.0, vmax=vmax if vmax > 0.0 else 1.0)

    written: list[Path] = []
    # fixed hash salt keeps SVG element ids stable across runs
    with plt.rc_context({"svg.hashsalt": "hsaplot"}):
        for view in spec.views:
            fig, ax = _draw_view(sp, view, spec, norm)
            fig.canvas.draw()
            base = outdir / f"{stem}_{view}"
            png = Path(f"{base}.png")
            svg = Path(f"{base}.svg")
            sidecar = Path(f"{base}.axes.json")
            fig.savefig(png)
            fig.savefig(svg, metadata={"Date": None})
            sidecar.write_text(
                json.dumps(_axes_metadata(fig, ax, view, spec.dpi),
                           indent=1, sort_keys=True) + "\n"
            )
            plt.close(fig)
            written.extend([png, svg, sidecar])
    return written
