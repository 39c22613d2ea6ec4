"""On-disk grid pairs: bit-exact round trips and tamper detection."""

import json

import numpy as np
import pytest

from qgrating.gridfile import (
    GRID_FORMAT,
    RINGS_FORMAT,
    canonical_json,
    payload_sha256,
    payload_text,
    read_grid,
    read_rings_table,
    write_grid,
    write_rings_table,
)
from qgrating.grids import GridAxis, SpectrumGrid


def small_grid(values=None, normalized=True, meta=None):
    axis1 = GridAxis("k_z", "a.u.", 0.8, 1.9, 3)
    axis2 = GridAxis("k_perp", "a.u.", 0.0, 0.6, 4)
    if values is None:
        values = np.array(
            [[0.0, 0.25, 1.0, 0.5], [0.1, 0.0, 0.75, 0.3], [1e-300, 0.2, 0.4, 0.9]]
        )
    return SpectrumGrid(axis1, axis2, values, normalized, meta or {"kind": "ionization"})


CONFIG = {"mode": "ionization", "grid": {"k_z": {"lo": 0.8, "hi": 1.9, "samples": 3}}}


def test_payload_text_round_trip_is_exact():
    rng = np.random.default_rng(20260823)
    # mantissas at full precision, wide dynamic range, signed zeros
    values = rng.uniform(-1.0, 1.0, size=(8, 5)) * 10.0 ** rng.integers(-300, 300, (8, 5))
    values[0, 0] = 0.0
    text = payload_text(values)
    back = np.array([[float(t) for t in line.split(",")] for line in text.splitlines()])
    assert np.array_equal(back, values)
    assert "\r" not in text
    assert text.endswith("\n")


def test_payload_text_requires_2d():
    with pytest.raises(ValueError):
        payload_text(np.array([1.0, 2.0]))


def test_canonical_json_is_stable():
    a = canonical_json({"b": 1, "a": {"y": 2, "x": 3}})
    b = canonical_json({"a": {"x": 3, "y": 2}, "b": 1})
    assert a == b
    assert a.endswith("\n")


def test_write_read_round_trip(tmp_path):
    grid = small_grid()
    csv_path, meta_path = write_grid(
        grid, tmp_path / "spec", CONFIG, "0.1.0", "CODATA-2018"
    )
    assert csv_path.name == "spec.csv"
    assert meta_path.name == "spec.meta.json"
    back, meta = read_grid(tmp_path / "spec")
    assert np.array_equal(back.values, grid.values)
    assert back.axis1 == grid.axis1
    assert back.axis2 == grid.axis2
    assert back.normalized == grid.normalized
    assert back.meta["kind"] == "ionization"
    assert meta["format"] == GRID_FORMAT
    assert meta["config"] == CONFIG
    assert meta["tool"] == {"name": "qgrating", "version": "0.1.0"}
    assert meta["constants_version"] == "CODATA-2018"
    assert meta["payload_sha256"] == payload_sha256(csv_path.read_text())
    # a second write is byte-identical
    before = (csv_path.read_bytes(), meta_path.read_bytes())
    write_grid(grid, tmp_path / "spec", CONFIG, "0.1.0", "CODATA-2018")
    assert (csv_path.read_bytes(), meta_path.read_bytes()) == before


def test_read_accepts_any_of_the_pair_paths(tmp_path):
    grid = small_grid()
    write_grid(grid, tmp_path / "g", CONFIG, "0.1.0", "CODATA-2018")
    for p in (tmp_path / "g", tmp_path / "g.csv", tmp_path / "g.meta.json"):
        back, _ = read_grid(p)
        assert np.array_equal(back.values, grid.values)


def test_tampered_payload_is_rejected(tmp_path):
    grid = small_grid()
    csv_path, _ = write_grid(grid, tmp_path / "g", CONFIG, "0.1.0", "CODATA-2018")
    text = csv_path.read_text()
    csv_path.write_text(text.replace("0.25", "0.26"))
    with pytest.raises(ValueError, match="hash mismatch"):
        read_grid(tmp_path / "g")


def test_shape_mismatch_is_rejected(tmp_path):
    grid = small_grid()
    csv_path, meta_path = write_grid(grid, tmp_path / "g", CONFIG, "0.1.0", "CODATA-2018")
    meta = json.loads(meta_path.read_text())
    meta["axes"]["axis2"]["samples"] = 5
    meta["shape"] = [3, 5]
    meta_path.write_text(canonical_json(meta))
    with pytest.raises(ValueError, match="shape"):
        read_grid(tmp_path / "g")


def test_unknown_format_is_rejected(tmp_path):
    grid = small_grid()
    _, meta_path = write_grid(grid, tmp_path / "g", CONFIG, "0.1.0", "CODATA-2018")
    meta = json.loads(meta_path.read_text())
    meta["format"] = "grid-csv-v999"
    meta_path.write_text(canonical_json(meta))
    with pytest.raises(ValueError, match="format"):
        read_grid(tmp_path / "g")


def test_rings_table_round_trip(tmp_path):
    per_f = [
        {
            "f": 1.0,
            "velocity": 1.3416407864998738,
            "orders": [
                {"n": 0, "b_minus": -0.03354, "b_plus": 0.03354, "r_inner": 0.0, "r_outer": 0.1831},
                {"n": 1, "b_minus": 0.1006, "b_plus": 0.1677, "r_inner": 0.3172, "r_outer": 0.4095},
            ],
        }
    ]
    path = write_rings_table(per_f, tmp_path / "rings", CONFIG, "0.1.0", "CODATA-2018")
    assert path.name == "rings.json"
    table = read_rings_table(path)
    assert table["format"] == RINGS_FORMAT
    assert table["rings"] == per_f
    assert table["config"] == CONFIG
    # canonical: rewriting produces identical bytes
    before = path.read_bytes()
    write_rings_table(per_f, tmp_path / "rings", CONFIG, "0.1.0", "CODATA-2018")
    assert path.read_bytes() == before


def test_rings_table_rejects_other_formats(tmp_path):
    grid = small_grid()
    _, meta_path = write_grid(grid, tmp_path / "g", CONFIG, "0.1.0", "CODATA-2018")
    with pytest.raises(ValueError, match="rings-table format"):
        read_rings_table(meta_path)
