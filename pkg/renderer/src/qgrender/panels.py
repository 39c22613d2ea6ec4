"""Multi-panel heatmap figures from grid file pairs.

Rendering is deliberately dumb: the only numerical work is colour
mapping.  Each matrix goes to the screen exactly as read — the display
transpose is the sole rearrangement (axis1 runs along x, axis2 along y,
origin at the lower left), and the image extent is padded by half a cell
so pixel centres sit exactly on sample coordinates.  Normalized grids
always get the fixed [0, 1] colour scale; non-normalized ones are scaled
to their own maximum and say so in the panel title; empty grids are
annotated "no support" instead of painted.  Ring circles from an
analytic rings table are overlaid as vector geometry centred on the
collision velocity, never rasterized into the data.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import matplotlib
import matplotlib.pyplot as plt
from matplotlib.patches import Circle

from .gridio import PanelData, read_grid_pair, read_rings, resolve_base, rings_for_f

DEFAULT_COLORMAP = "viridis"  # perceptually uniform
RING_STYLE = {"fill": False, "edgecolor": "white", "linewidth": 0.9}


@dataclass(frozen=True)
class PlotSpec:
    """Everything render() needs: inputs, layout, overlays, destination.

    `layout` is (rows, cols); the grid must have at least as many panels
    as there are inputs.  Panels are placed in input order, row-major.
    """

    inputs: tuple[Path, ...]
    out_path: Path
    layout: tuple[int, int]
    rings_path: Path | None = None
    colormap: str = DEFAULT_COLORMAP
    dpi: int = 150

    def __post_init__(self):
        if not self.inputs:
            raise ValueError("PlotSpec needs at least one input grid")
        rows, cols = self.layout
        if rows < 1 or cols < 1:
            raise ValueError(f"layout {rows}x{cols} must be at least 1x1")
        if rows * cols < len(self.inputs):
            raise ValueError(
                f"layout {rows}x{cols} has {rows * cols} panels for {len(self.inputs)} inputs"
            )
        if self.colormap not in matplotlib.colormaps:
            raise ValueError(f"unknown colormap '{self.colormap}'")


def _sidecar_f(path: Path) -> float | None:
    """Cheap sidecar peek for ordering; full validation happens on read."""
    meta_path = resolve_base(path)
    meta_path = meta_path.with_name(meta_path.name + ".meta.json")
    try:
        meta = json.loads(meta_path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError):
        return None
    val = meta.get("f") if isinstance(meta, dict) else None
    return float(val) if isinstance(val, (int, float)) else None


def sort_inputs(paths) -> tuple[Path, ...]:
    """Deterministic panel order: ascending sweep ratio f, then file name.

    Files whose sidecar carries no f (elastic, diffraction) sort after
    the sweep members, by name.
    """
    def key(path: Path):
        f = _sidecar_f(path)
        return (0, f, path.name) if f is not None else (1, 0.0, path.name)

    return tuple(sorted((Path(p) for p in paths), key=key))


def _panel_title(panel: PanelData) -> str:
    title = f"f = {panel.f:g}" if panel.f is not None else panel.kind
    if not panel.normalized and not panel.empty:
        title += f" (max {float(panel.values.max()):.6g})"
    return title


def _padded_extent(panel: PanelData) -> tuple[float, float, float, float]:
    """Image extent placing pixel centres exactly on sample coordinates."""
    h1, h2 = panel.axis1.step / 2.0, panel.axis2.step / 2.0
    return (
        panel.axis1.lo - h1,
        panel.axis1.hi + h1,
        panel.axis2.lo - h2,
        panel.axis2.hi + h2,
    )


def _draw_panel(ax, panel: PanelData, rings_block: dict | None, colormap: str) -> None:
    extent = _padded_extent(panel)
    if panel.empty:
        ax.set_xlim(extent[0], extent[1])
        ax.set_ylim(extent[2], extent[3])
        ax.text(0.5, 0.5, "no support", transform=ax.transAxes,
                ha="center", va="center", style="italic")
    else:
        vmax = 1.0 if panel.normalized else float(panel.values.max())
        ax.imshow(
            panel.values.T,
            origin="lower",
            extent=extent,
            aspect="auto",
            interpolation="nearest",
            cmap=colormap,
            vmin=0.0,
            vmax=vmax,
        )
    ax.set_xlabel(f"{panel.axis1.label} [{panel.axis1.unit}]")
    ax.set_ylabel(f"{panel.axis2.label} [{panel.axis2.unit}]")
    ax.set_title(_panel_title(panel))

    if rings_block is not None:
        center = (float(rings_block["velocity"]), 0.0)
        for order in rings_block["orders"]:
            for radius in (float(order["r_inner"]), float(order["r_outer"])):
                if radius > 0.0:
                    ax.add_patch(Circle(center, radius, **RING_STYLE))


def build_figure(spec: PlotSpec):
    """Assemble the figure; returns (fig, axes, panels) for inspection.

    The caller owns the figure and must close it.  All inputs must agree
    on axis labels and units — mixing grid kinds in one figure is an
    error, not a silently mislabeled plot.
    """
    panels = [read_grid_pair(path) for path in spec.inputs]

    labels = {(p.axis1.label, p.axis1.unit, p.axis2.label, p.axis2.unit) for p in panels}
    if len(labels) > 1:
        raise ValueError(f"input grids disagree on axis labels: {sorted(labels)}")

    table = read_rings(spec.rings_path) if spec.rings_path is not None else None

    rows, cols = spec.layout
    fig, axes = plt.subplots(
        rows, cols, figsize=(4.0 * cols, 3.2 * rows), layout="constrained", squeeze=False
    )
    flat = axes.ravel().tolist()
    for ax, panel in zip(flat, panels):
        block = rings_for_f(table, panel.f) if table is not None and panel.f is not None else None
        _draw_panel(ax, panel, block, spec.colormap)
    for ax in flat[len(panels):]:
        ax.set_axis_off()
    return fig, flat, panels


def render(spec: PlotSpec) -> Path:
    """Build the figure and write it as a PNG; returns the output path."""
    fig, _axes, _panels = build_figure(spec)
    try:
        spec.out_path.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(spec.out_path, format="png", dpi=spec.dpi)
    finally:
        plt.close(fig)
    return spec.out_path
