"""qgrender: read-only panel-figure renderer for qgrating output files.

Consumes the simulator's portable grid file pairs (`<name>.csv` +
`<name>.meta.json`) and analytic rings tables through their documented
on-disk formats only — this package never imports the simulator.
"""

from .gridio import (
    AxisMeta,
    GridFileError,
    PanelData,
    read_grid_pair,
    read_rings,
    rings_for_f,
)
from .panels import PlotSpec, build_figure, render, sort_inputs

__version__ = "0.1.0"

__all__ = [
    "AxisMeta",
    "GridFileError",
    "PanelData",
    "PlotSpec",
    "__version__",
    "build_figure",
    "read_grid_pair",
    "read_rings",
    "render",
    "rings_for_f",
    "sort_inputs",
]
