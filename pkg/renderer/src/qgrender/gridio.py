"""Read-only access to the simulator's portable output files.

The renderer deliberately re-implements the two published layouts instead
of importing the producer: a `<name>.csv` matrix payload (row-major,
axis1 = rows, shortest round-trip decimals, LF endings) next to a
`<name>.meta.json` sidecar (axes, normalization state, and the SHA-256
of the CSV bytes), plus the analytic rings table (a single canonical JSON
document).  Re-deriving the checksum locally is the point of the design:
by hashing a re-serialization of the matrix it actually ingested, the
renderer can prove it painted the producer's numbers and not a silently
transformed copy.

Every loaded matrix is returned write-protected, so downstream code
cannot modify it even by accident.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

GRID_FORMAT = "grid-csv-v1"
RINGS_FORMAT = "rings-table-v1"


class GridFileError(ValueError):
    """A grid or rings file is malformed or fails cross-validation."""


def payload_text(values: np.ndarray) -> str:
    """CSV body for a 2D matrix, shortest round-trip decimals, LF endings."""
    values = np.asarray(values, dtype=float)
    if values.ndim != 2:
        raise ValueError(f"payload must be 2D (got shape {values.shape})")
    lines = [",".join(repr(x) for x in row) for row in values.tolist()]
    return "\n".join(lines) + "\n"


def payload_sha256(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class AxisMeta:
    """One grid axis as described by the sidecar: endpoints inclusive."""

    label: str
    unit: str
    lo: float
    hi: float
    samples: int

    @property
    def step(self) -> float:
        return (self.hi - self.lo) / (self.samples - 1)

    def values(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.samples)


@dataclass(frozen=True, eq=False)
class PanelData:
    """One ingested grid file pair, cross-validated against its sidecar."""

    base: Path
    values: np.ndarray
    normalized: bool
    axis1: AxisMeta
    axis2: AxisMeta
    meta: dict = field(repr=False)

    @property
    def f(self) -> float | None:
        """Collision-velocity ratio carried by sweep outputs, if any."""
        val = self.meta.get("f")
        return float(val) if isinstance(val, (int, float)) else None

    @property
    def kind(self) -> str:
        return str(self.meta.get("kind", "grid"))

    @property
    def empty(self) -> bool:
        """True when nothing is on support (the all-zero matrix)."""
        return not self.values.any()

    def matrix_checksum(self) -> str:
        """SHA-256 of this matrix re-serialized under the payload rules.

        Equal to the sidecar's recorded `payload_sha256` if and only if
        the in-memory matrix is still bit-for-bit the producer's.
        """
        return payload_sha256(payload_text(self.values))


def resolve_base(path: Path | str) -> Path:
    path = Path(path)
    name = path.name
    for suffix in (".meta.json", ".csv"):
        if name.endswith(suffix):
            name = name[: -len(suffix)]
    return path.with_name(name)


def _parse_axis(node, which: str, base: Path) -> AxisMeta:
    if not isinstance(node, dict):
        raise GridFileError(f"{base}: sidecar {which} is not an object")
    try:
        axis = AxisMeta(
            str(node["label"]),
            str(node["unit"]),
            float(node["lo"]),
            float(node["hi"]),
            int(node["samples"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise GridFileError(f"{base}: invalid {which} definition in sidecar: {exc}") from exc
    if axis.samples < 2 or not axis.hi > axis.lo:
        raise GridFileError(f"{base}: degenerate {which} definition in sidecar")
    return axis


def read_grid_pair(path: Path | str) -> PanelData:
    """Load a grid file pair; accepts the base path or either file of the pair.

    Raises GridFileError when the pair fails validation (format tag, payload
    hash, shape consistency, non-finite values) and OSError when a file of
    the pair cannot be read at all.
    """
    base = resolve_base(path)
    csv_path = base.with_name(base.name + ".csv")
    meta_path = base.with_name(base.name + ".meta.json")

    try:
        meta = json.loads(meta_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise GridFileError(f"{meta_path}: sidecar is not valid JSON: {exc}") from exc
    if not isinstance(meta, dict):
        raise GridFileError(f"{meta_path}: sidecar is not a JSON object")
    if meta.get("format") != GRID_FORMAT:
        raise GridFileError(f"{meta_path}: unsupported format {meta.get('format')!r}")

    csv_text = csv_path.read_text(encoding="utf-8")
    if payload_sha256(csv_text) != meta.get("payload_sha256"):
        raise GridFileError(f"{csv_path}: payload hash mismatch (file corrupted or edited)")

    try:
        values = np.array(
            [[float(tok) for tok in line.split(",")] for line in csv_text.splitlines() if line],
            dtype=float,
        )
    except ValueError as exc:
        raise GridFileError(f"{csv_path}: unparsable payload: {exc}") from exc

    axes = meta.get("axes")
    if not isinstance(axes, dict):
        raise GridFileError(f"{meta_path}: sidecar has no axes object")
    axis1 = _parse_axis(axes.get("axis1"), "axis1", meta_path)
    axis2 = _parse_axis(axes.get("axis2"), "axis2", meta_path)
    if values.ndim != 2 or list(values.shape) != list(meta.get("shape", [])) or values.shape != (
        axis1.samples,
        axis2.samples,
    ):
        raise GridFileError(f"{csv_path}: payload shape {values.shape} does not match sidecar axes")
    if not np.isfinite(values).all():
        raise GridFileError(f"{csv_path}: payload contains non-finite values")

    normalized = meta.get("normalized")
    if not isinstance(normalized, bool):
        raise GridFileError(f"{meta_path}: sidecar 'normalized' must be a boolean")

    values.setflags(write=False)
    return PanelData(base, values, normalized, axis1, axis2, meta)


def read_rings(path: Path | str) -> dict:
    """Load an analytic rings table, checking its format tag and structure."""
    path = Path(path)
    try:
        table = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise GridFileError(f"{path}: rings table is not valid JSON: {exc}") from exc
    if not isinstance(table, dict) or table.get("format") != RINGS_FORMAT:
        fmt = table.get("format") if isinstance(table, dict) else None
        raise GridFileError(f"{path}: unsupported rings-table format {fmt!r}")
    blocks = table.get("rings")
    if not isinstance(blocks, list):
        raise GridFileError(f"{path}: rings table has no 'rings' list")
    for block in blocks:
        if not isinstance(block, dict) or not {"f", "velocity", "orders"} <= block.keys():
            raise GridFileError(f"{path}: malformed rings block {block!r}")
    return table


def rings_for_f(table: dict, f: float, rel_tol: float = 1e-9) -> dict | None:
    """The per-velocity rings block matching the ratio f, or None."""
    for block in table.get("rings", []):
        if math.isclose(float(block["f"]), f, rel_tol=rel_tol, abs_tol=0.0):
            return block
    return None
