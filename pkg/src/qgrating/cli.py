"""Command-line surface: config in, GridFiles out, optional worker pool.

Exit codes: 0 success, 2 configuration/usage error, 3 runtime or numeric
error, 4 I/O error.

Parallelism never changes results: grids are cut into the same fixed row
blocks whether one worker or many evaluate them, and blocks are merged in
submission order, so the written files are byte-identical for any
``--workers`` value.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .config import ConfigError, RunConfig, parse_config
from .diffraction import field_grid
from .gridfile import write_grid, write_rings_table
from .kinematics import confluence_velocity, visible_rings
from .spectra import (
    elastic_grid,
    elastic_row_block,
    ionization_grid,
    ionization_row_block,
    row_blocks,
)
from .units import CONSTANTS_VERSION

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3
EXIT_IO = 4

_MODE_HELP = {
    "diffraction": "far-field intensity of the diffracted atom on the detection plane",
    "elastic": "elastic-scattering interference map over (theta, p_az_f)",
    "ionization": "ion-impact emission spectrum over (k_z, k_perp)",
    "rings": "analytic ring-bound table for the emission spectrum",
    "sweep": "one ionization grid per f value in the config's f_list",
}


def _evaluate_rows(job, row_fn, n_rows: int, workers: int) -> np.ndarray:
    """Evaluate all row blocks, optionally across processes, ordered merge."""
    blocks = row_blocks(n_rows)
    if workers <= 1 or len(blocks) == 1:
        parts = [row_fn(job, lo, hi) for lo, hi in blocks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(row_fn, job, lo, hi) for lo, hi in blocks]
            parts = [fut.result() for fut in futures]
    return np.vstack(parts)


def _emit(grid, base: Path, cfg: RunConfig, quiet: bool, written: list[Path]) -> None:
    csv_path, meta_path = write_grid(
        grid, base, cfg.document, __version__, CONSTANTS_VERSION
    )
    written.extend([csv_path, meta_path])
    if not grid.normalized and not quiet:
        print(f"warning: {base.name}: no support on this grid (all values zero)", file=sys.stderr)


def _velocity_schedule(cfg: RunConfig) -> list[tuple[float, float]]:
    """(f, velocity) pairs covered by this run; singleton outside sweep/f_list."""
    if cfg.f_list:
        return [(f, cfg.velocity_for_f(f)) for f in cfg.f_list]
    return [(cfg.velocity / confluence_velocity(cfg.beam), cfg.velocity)]


def _run(cfg: RunConfig, out_dir: Path, workers: int, quiet: bool) -> list[Path]:
    written: list[Path] = []
    if cfg.mode == "diffraction":
        grid = field_grid(cfg.beam, cfg.grating, cfg.diff_extent, cfg.diff_samples)
        _emit(grid, out_dir / "diffraction", cfg, quiet, written)

    elif cfg.mode == "elastic":
        job = cfg.elastic_job()
        raw = _evaluate_rows(job, elastic_row_block, job.theta_axis.samples, workers)
        _emit(elastic_grid(job, raw=raw), out_dir / "elastic", cfg, quiet, written)

    elif cfg.mode == "ionization":
        job = cfg.ionization_job()
        raw = _evaluate_rows(job, ionization_row_block, job.kz_axis.samples, workers)
        _emit(ionization_grid(job, raw=raw), out_dir / "ionization", cfg, quiet, written)

    elif cfg.mode == "sweep":
        for f, velocity in _velocity_schedule(cfg):
            job = cfg.ionization_job(velocity)
            raw = _evaluate_rows(job, ionization_row_block, job.kz_axis.samples, workers)
            grid = ionization_grid(job, raw=raw)
            grid.meta["f"] = f  # exact configured value, not v/v0 round-trip
            _emit(grid, out_dir / f"ionization_f{f:g}", cfg, quiet, written)

    elif cfg.mode == "rings":
        per_f = []
        for f, velocity in _velocity_schedule(cfg):
            proj = cfg.projectile(velocity)
            corners = [
                (kz, kp)
                for kz in (cfg.axis1.lo, cfg.axis1.hi)
                for kp in (cfg.axis2.lo, cfg.axis2.hi)
            ]
            r_max = max(np.hypot(kz - velocity, kp) for kz, kp in corners)
            orders = [
                {
                    "n": rb.order,
                    "b_minus": rb.b_minus,
                    "b_plus": rb.b_plus,
                    "r_inner": rb.r_inner,
                    "r_outer": rb.r_outer,
                }
                for rb in visible_rings(cfg.beam, proj, cfg.grating, r_max)
            ]
            per_f.append({"f": f, "velocity": velocity, "orders": orders})
        written.append(
            write_rings_table(per_f, out_dir / "rings", cfg.document, __version__, CONSTANTS_VERSION)
        )
    return written


def _workers_arg(text: str) -> int:
    if text == "auto":
        return max(os.cpu_count() or 1, 1)
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("must be a positive integer or 'auto'") from None
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer or 'auto'")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qgrating",
        description="Collision observables for an atom structured by a macroscopic grating.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="mode")
    for name, help_text in _MODE_HELP.items():
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--config", required=True, type=Path, help="JSON run configuration")
        sp.add_argument("--out", type=Path, default=Path("."), help="output directory")
        sp.add_argument(
            "--workers", type=_workers_arg, default=1,
            help="worker processes for grid evaluation (or 'auto')",
        )
        sp.add_argument("--quiet", action="store_true", help="suppress progress output")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text = args.config.read_text(encoding="utf-8")
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        cfg = parse_config(text, mode=args.command)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        written = _run(cfg, args.out, args.workers, args.quiet)
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, ArithmeticError, RuntimeError) as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    if not args.quiet:
        for path in written:
            print(path)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
