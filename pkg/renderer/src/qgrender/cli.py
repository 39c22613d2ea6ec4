"""Command line front end: render grid file pairs into one panel figure.

Exit codes mirror the producer's convention: 0 success, 2 bad invocation
(empty glob, malformed or undersized layout, unknown colormap), 3 invalid
input data (a file pair or rings table fails validation), 4 I/O failure.
"""

from __future__ import annotations

import argparse
import glob
import re
import sys
from pathlib import Path

from . import __version__
from .gridio import GridFileError, resolve_base
from .panels import DEFAULT_COLORMAP, PlotSpec, render, sort_inputs

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_IO = 4


def _layout_arg(text: str) -> tuple[int, int]:
    match = re.fullmatch(r"(\d+)x(\d+)", text)
    if match is None:
        raise argparse.ArgumentTypeError("must look like RxC, e.g. 3x3")
    rows, cols = int(match.group(1)), int(match.group(2))
    if rows < 1 or cols < 1:
        raise argparse.ArgumentTypeError("must look like RxC, e.g. 3x3")
    return rows, cols


def _expand_pattern(pattern: str) -> list[Path]:
    """Glob matches collapsed to unique pair bases, first-seen order."""
    bases: list[Path] = []
    seen: set[Path] = set()
    for match in sorted(glob.glob(pattern)):
        base = resolve_base(Path(match))
        if base not in seen:
            seen.add(base)
            bases.append(base)
    return bases


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qgrender",
        description="Render qgrating grid files into a multi-panel PNG figure.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    sp = sub.add_parser("render", help="render grid file pairs into one figure")
    sp.add_argument("--in", dest="pattern", required=True,
                    help="glob matching grid file pairs (either file of a pair)")
    sp.add_argument("--out", required=True, type=Path, help="output PNG path")
    sp.add_argument("--rings", type=Path, default=None,
                    help="analytic rings table to overlay as circles")
    sp.add_argument("--layout", type=_layout_arg, default=None,
                    help="panel grid as RxC (default: one row)")
    sp.add_argument("--cmap", default=DEFAULT_COLORMAP,
                    help=f"matplotlib colormap name (default: {DEFAULT_COLORMAP})")
    sp.add_argument("--dpi", type=int, default=150, help="raster resolution")
    sp.add_argument("--quiet", action="store_true", help="suppress output path print")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    inputs = _expand_pattern(args.pattern)
    if not inputs:
        print(f"usage error: '--in {args.pattern}' matches no files", file=sys.stderr)
        return EXIT_USAGE
    try:
        spec = PlotSpec(
            inputs=sort_inputs(inputs),
            out_path=args.out,
            layout=args.layout if args.layout is not None else (1, len(inputs)),
            rings_path=args.rings,
            colormap=args.cmap,
            dpi=args.dpi,
        )
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        out_path = render(spec)
    except GridFileError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    if not args.quiet:
        print(out_path)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
