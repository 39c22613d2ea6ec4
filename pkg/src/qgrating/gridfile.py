"""Portable on-disk grid format: `<name>.csv` plus `<name>.meta.json`.

The CSV holds the value matrix only — row-major, axis1 = rows, no header
row, LF line endings, each number in its shortest round-trip decimal form
(Python repr), so payloads re-read bit-exactly and diff cleanly across
runs.  Everything else lives in the JSON sidecar: the canonical config
echo (re-runnable as-is), axis definitions, normalization state, tool and
constants versions, and the SHA-256 of the CSV bytes so consumers can
prove they did not silently transform the matrix.

Sidecars are serialized canonically (sorted keys, fixed indentation), so
identical runs produce byte-identical file pairs.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np

from .grids import GridAxis, SpectrumGrid

GRID_FORMAT = "grid-csv-v1"
RINGS_FORMAT = "rings-table-v1"


def canonical_json(obj) -> str:
    """Deterministic JSON text: sorted keys, 2-space indent, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def payload_text(values: np.ndarray) -> str:
    """CSV body for a 2D matrix, shortest round-trip decimals, LF endings."""
    values = np.asarray(values, dtype=float)
    if values.ndim != 2:
        raise ValueError(f"payload must be 2D (got shape {values.shape})")
    lines = [",".join(repr(x) for x in row) for row in values.tolist()]
    return "\n".join(lines) + "\n"


def payload_sha256(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def _axis_meta(axis: GridAxis) -> dict:
    return {
        "label": axis.label,
        "unit": axis.unit,
        "lo": axis.lo,
        "hi": axis.hi,
        "samples": axis.samples,
    }


def grid_meta(grid: SpectrumGrid, config_doc: dict, tool_version: str, constants: str) -> dict:
    """Sidecar dictionary for a grid; extra per-grid facts ride in grid.meta."""
    csv_text = payload_text(grid.values)
    meta = {
        "format": GRID_FORMAT,
        "tool": {"name": "qgrating", "version": tool_version},
        "constants_version": constants,
        "config": config_doc,
        "axes": {"axis1": _axis_meta(grid.axis1), "axis2": _axis_meta(grid.axis2)},
        "shape": [grid.axis1.samples, grid.axis2.samples],
        "normalized": grid.normalized,
        "payload_sha256": payload_sha256(csv_text),
    }
    for key, val in grid.meta.items():
        meta.setdefault(key, val)
    return meta


def write_grid(
    grid: SpectrumGrid,
    base: Path | str,
    config_doc: dict,
    tool_version: str,
    constants: str,
) -> tuple[Path, Path]:
    """Write `<base>.csv` + `<base>.meta.json`; returns the two paths."""
    base = Path(base)
    csv_path = base.with_name(base.name + ".csv")
    meta_path = base.with_name(base.name + ".meta.json")
    csv_text = payload_text(grid.values)
    meta = grid_meta(grid, config_doc, tool_version, constants)
    base.parent.mkdir(parents=True, exist_ok=True)
    csv_path.write_text(csv_text, encoding="utf-8", newline="\n")
    meta_path.write_text(canonical_json(meta), encoding="utf-8", newline="\n")
    return csv_path, meta_path


def _parse_axis_meta(node: dict, which: str) -> GridAxis:
    try:
        return GridAxis(
            node["label"], node["unit"], float(node["lo"]), float(node["hi"]), int(node["samples"])
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"invalid {which} definition in sidecar: {exc}") from exc


def read_grid(base: Path | str) -> tuple[SpectrumGrid, dict]:
    """Load and cross-validate a grid file pair; returns (grid, sidecar dict).

    Accepts the base path (no suffix) or the path of either file of the pair.
    """
    base = Path(base)
    name = base.name
    for suffix in (".meta.json", ".csv"):
        if name.endswith(suffix):
            name = name[: -len(suffix)]
    base = base.with_name(name)
    csv_path = base.with_name(base.name + ".csv")
    meta_path = base.with_name(base.name + ".meta.json")

    meta = json.loads(meta_path.read_text(encoding="utf-8"))
    if meta.get("format") != GRID_FORMAT:
        raise ValueError(f"{meta_path}: unsupported format {meta.get('format')!r}")

    csv_text = csv_path.read_text(encoding="utf-8")
    digest = payload_sha256(csv_text)
    if digest != meta.get("payload_sha256"):
        raise ValueError(f"{csv_path}: payload hash mismatch (file corrupted or edited)")

    values = np.array(
        [[float(tok) for tok in line.split(",")] for line in csv_text.splitlines() if line],
        dtype=float,
    )
    axis1 = _parse_axis_meta(meta.get("axes", {}).get("axis1", {}), "axis1")
    axis2 = _parse_axis_meta(meta.get("axes", {}).get("axis2", {}), "axis2")
    if list(values.shape) != list(meta.get("shape", [])) or values.shape != (
        axis1.samples,
        axis2.samples,
    ):
        raise ValueError(
            f"{csv_path}: payload shape {values.shape} does not match sidecar axes"
        )
    extra = {
        k: v
        for k, v in meta.items()
        if k
        not in (
            "format", "tool", "constants_version", "config", "axes", "shape",
            "normalized", "payload_sha256",
        )
    }
    grid = SpectrumGrid(axis1, axis2, values, bool(meta["normalized"]), extra)
    return grid, meta


def write_rings_table(
    per_f: list[dict],
    base: Path | str,
    config_doc: dict,
    tool_version: str,
    constants: str,
) -> Path:
    """Write the analytic ring table as `<base>.json`.

    per_f entries: {"f": float, "velocity": float, "orders": [{"n", "b_minus",
    "b_plus", "r_inner", "r_outer"}, ...]} — one block per collision velocity.
    """
    base = Path(base)
    path = base.with_name(base.name + ".json")
    table = {
        "format": RINGS_FORMAT,
        "tool": {"name": "qgrating", "version": tool_version},
        "constants_version": constants,
        "config": config_doc,
        "rings": per_f,
    }
    base.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(canonical_json(table), encoding="utf-8", newline="\n")
    return path


def read_rings_table(path: Path | str) -> dict:
    table = json.loads(Path(path).read_text(encoding="utf-8"))
    if table.get("format") != RINGS_FORMAT:
        raise ValueError(f"{path}: unsupported rings-table format {table.get('format')!r}")
    return table
