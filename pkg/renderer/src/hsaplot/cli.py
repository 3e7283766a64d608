"""Batch rendering command line, mirroring RenderSpec field by field."""

from __future__ import annotations

import argparse
import sys

from .render import RenderSpec, VIEWS, render
from .spectrum import SpectrumFormatError


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="hsaplot",
        description="Render a spectrum JSON file to static figures.",
    )
    parser.add_argument("input", help="spectrum JSON file")
    parser.add_argument(
        "--views", nargs="+", choices=VIEWS, default=list(VIEWS),
        metavar="VIEW",
        help=f"views to draw, any of {', '.join(VIEWS)} (default: all)",
    )
    parser.add_argument("--colormap", default="viridis",
                        help="matplotlib colormap name (default: viridis)")
    parser.add_argument("-o", "--outdir", default=".",
                        help="output directory (default: current)")
    parser.add_argument("--stem",
                        help="output basename (default: input file stem)")
    parser.add_argument("--dpi", type=int, default=100)
    args = parser.parse_args(argv)

    try:
        spec = RenderSpec(
            input=args.input,
            views=tuple(args.views),
            colormap=args.colormap,
            outdir=args.outdir,
            stem=args.stem,
            dpi=args.dpi,
        )
    except ValueError as exc:
        parser.error(str(exc))

    try:
        written = render(spec)
    except (SpectrumFormatError, OSError) as exc:
        print(f"hsaplot: {exc}", file=sys.stderr)
        return 2

    for path in written:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
