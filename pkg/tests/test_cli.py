"""End-to-end command-line runs: exit codes, determinism, reproducibility."""

import json

import numpy as np
import pytest

from qgrating.cli import EXIT_CONFIG, EXIT_IO, EXIT_OK, EXIT_RUNTIME, main
from qgrating.gridfile import canonical_json, read_grid, read_rings_table
from qgrating.kinematics import Projectile, confluence_velocity, visible_rings
from qgrating.units import PROTON_MASS_AU

GRATING = {"a_mm": 0.1, "b_mm": 0.1, "d_mm": 0.2, "n_slits": 5, "dist_mm": 200.0}
HE_BEAM = {"p_in": 50.0, "eps_bind": -0.9, "z_nucleus": 2, "n_electrons": 2, "mass": 7296.0}


def ionization_doc(kz=(0.8, 1.9, 48), kperp=(0.0, 0.6, 40), f=1.0):
    return {
        "mode": "ionization",
        "grating": dict(GRATING),
        "beam": dict(HE_BEAM),
        "projectile": {"species": "proton", "f": f},
        "grid": {
            "k_z": {"lo": kz[0], "hi": kz[1], "samples": kz[2]},
            "k_perp": {"lo": kperp[0], "hi": kperp[1], "samples": kperp[2]},
        },
    }


def write_config(tmp_path, doc, name="run.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc), encoding="utf-8")
    return path


# ---------------------------------------------------------------------------
# exit codes
# ---------------------------------------------------------------------------


def test_successful_run_lists_outputs(tmp_path, capsys):
    cfg = write_config(tmp_path, ionization_doc())
    out = tmp_path / "out"
    assert main(["ionization", "--config", str(cfg), "--out", str(out)]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines == [str(out / "ionization.csv"), str(out / "ionization.meta.json")]
    grid, meta = read_grid(out / "ionization")
    assert grid.normalized
    assert meta["config"]["mode"] == "ionization"


def test_quiet_suppresses_listing(tmp_path, capsys):
    cfg = write_config(tmp_path, ionization_doc())
    assert main(
        ["ionization", "--config", str(cfg), "--out", str(tmp_path / "o"), "--quiet"]
    ) == EXIT_OK
    assert capsys.readouterr().out == ""


def test_missing_config_file_is_io_error(tmp_path, capsys):
    rc = main(["ionization", "--config", str(tmp_path / "nope.json"), "--out", str(tmp_path)])
    assert rc == EXIT_IO
    assert "i/o error" in capsys.readouterr().err


def test_unwritable_out_is_io_error(tmp_path, capsys):
    cfg = write_config(tmp_path, ionization_doc())
    blocker = tmp_path / "blocker"
    blocker.write_text("a file, not a directory")
    rc = main(["ionization", "--config", str(cfg), "--out", str(blocker / "sub")])
    assert rc == EXIT_IO
    assert "i/o error" in capsys.readouterr().err


def test_invalid_config_is_config_error(tmp_path, capsys):
    doc = ionization_doc()
    doc["grating"]["d_mm"] = 0.05  # period below slit height
    cfg = write_config(tmp_path, doc)
    rc = main(["ionization", "--config", str(cfg), "--out", str(tmp_path)])
    assert rc == EXIT_CONFIG
    assert "config error" in capsys.readouterr().err


def test_subcommand_mode_mismatch_is_config_error(tmp_path, capsys):
    cfg = write_config(tmp_path, ionization_doc())
    rc = main(["elastic", "--config", str(cfg), "--out", str(tmp_path)])
    assert rc == EXIT_CONFIG
    assert "does not match subcommand" in capsys.readouterr().err


def test_runtime_failure_is_runtime_error(tmp_path, capsys):
    # parses fine (job invariants hold) but evaluation hits k = 0
    doc = ionization_doc(kz=(-0.1, 0.1, 3), kperp=(0.0, 0.6, 8))
    cfg = write_config(tmp_path, doc)
    rc = main(["ionization", "--config", str(cfg), "--out", str(tmp_path / "o")])
    assert rc == EXIT_RUNTIME
    assert "runtime error" in capsys.readouterr().err


def test_usage_errors_from_argparse():
    with pytest.raises(SystemExit) as exc:
        main([])  # subcommand is required
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["ionization", "--config", "x.json", "--workers", "0"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0


# ---------------------------------------------------------------------------
# determinism and reproducibility
# ---------------------------------------------------------------------------


def test_worker_count_never_changes_bytes(tmp_path):
    cfg = write_config(tmp_path, ionization_doc())
    for workers, sub in (("1", "serial"), ("3", "parallel")):
        assert main(
            ["ionization", "--config", str(cfg), "--out", str(tmp_path / sub),
             "--workers", workers, "--quiet"]
        ) == EXIT_OK
    for name in ("ionization.csv", "ionization.meta.json"):
        serial = (tmp_path / "serial" / name).read_bytes()
        parallel = (tmp_path / "parallel" / name).read_bytes()
        assert serial == parallel, name


def test_workers_auto_is_accepted(tmp_path):
    cfg = write_config(tmp_path, ionization_doc(kz=(0.8, 1.9, 20), kperp=(0.0, 0.6, 12)))
    assert main(
        ["ionization", "--config", str(cfg), "--out", str(tmp_path / "o"),
         "--workers", "auto", "--quiet"]
    ) == EXIT_OK


def test_embedded_config_reproduces_the_run(tmp_path):
    # the meta sidecar's config echo, fed back in, must yield identical bytes
    cfg = write_config(tmp_path, ionization_doc())
    assert main(
        ["ionization", "--config", str(cfg), "--out", str(tmp_path / "a"), "--quiet"]
    ) == EXIT_OK
    meta = json.loads((tmp_path / "a" / "ionization.meta.json").read_text())
    echo = write_config(tmp_path, meta["config"], "echo.json")
    assert main(
        ["ionization", "--config", str(echo), "--out", str(tmp_path / "b"), "--quiet"]
    ) == EXIT_OK
    for name in ("ionization.csv", "ionization.meta.json"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


# ---------------------------------------------------------------------------
# the other modes end to end
# ---------------------------------------------------------------------------


def test_diffraction_mode_writes_grid(tmp_path):
    doc = {
        "mode": "diffraction",
        "grating": dict(GRATING),
        "beam": dict(HE_BEAM),
        "grid": {"extent_x": 300.0, "extent_z": 300.0, "samples_x": 24, "samples_z": 24},
    }
    cfg = write_config(tmp_path, doc)
    assert main(
        ["diffraction", "--config", str(cfg), "--out", str(tmp_path / "o"), "--quiet"]
    ) == EXIT_OK
    grid, meta = read_grid(tmp_path / "o" / "diffraction")
    assert meta["kind"] == "diffraction"
    assert grid.values.shape == (24, 24)
    assert grid.values.max() == 1.0


def test_elastic_mode_writes_grid(tmp_path):
    doc = {
        "mode": "elastic",
        "grating": dict(GRATING),
        "beam": {"p_in": 100.0, "eps_bind": -0.44, "z_nucleus": 54,
                 "n_electrons": 54, "mass": 239333.0},
        "projectile": {"species": "electron", "energy_ev": 300.0},
        "grid": {"theta": {"lo": 0.002, "hi": 0.12, "samples": 32},
                 "p_az_f": {"lo": -0.35, "hi": 0.35, "samples": 40}},
    }
    cfg = write_config(tmp_path, doc)
    assert main(
        ["elastic", "--config", str(cfg), "--out", str(tmp_path / "o"), "--quiet"]
    ) == EXIT_OK
    grid, meta = read_grid(tmp_path / "o" / "elastic")
    assert meta["kind"] == "elastic"
    assert grid.normalized


def test_sweep_mode_writes_one_grid_per_f(tmp_path, capsys):
    doc = ionization_doc(kz=(0.8, 1.9, 24), kperp=(0.0, 0.6, 16))
    doc["mode"] = "sweep"
    doc["projectile"] = {"species": "proton"}
    doc["f_list"] = [0.95, 1.0, 1.05]
    cfg = write_config(tmp_path, doc)
    out = tmp_path / "o"
    assert main(["sweep", "--config", str(cfg), "--out", str(out)]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 6  # csv + meta per f
    for f in (0.95, 1.0, 1.05):
        grid, meta = read_grid(out / f"ionization_f{f:g}")
        assert meta["f"] == f  # the exact configured value
        assert meta["config"]["f_list"] == [0.95, 1.0, 1.05]
        assert grid.values.shape == (24, 16)


def test_empty_support_run_warns_but_succeeds(tmp_path, capsys):
    doc = ionization_doc(kz=(0.95, 1.05, 12), kperp=(0.0, 0.03, 8), f=0.93)
    cfg = write_config(tmp_path, doc)
    assert main(["ionization", "--config", str(cfg), "--out", str(tmp_path / "o")]) == EXIT_OK
    assert "no support" in capsys.readouterr().err
    grid, meta = read_grid(tmp_path / "o" / "ionization")
    assert not grid.normalized
    assert meta["empty_support"] is True
    assert np.all(grid.values == 0.0)


def test_rings_mode_matches_direct_enumeration(tmp_path):
    doc = ionization_doc(kz=(0.8, 1.9, 24), kperp=(0.0, 0.6, 16))
    doc["mode"] = "rings"
    doc["projectile"] = {"species": "proton"}
    doc["f_list"] = [0.93, 1.0]
    cfg = write_config(tmp_path, doc)
    out = tmp_path / "o"
    assert main(["rings", "--config", str(cfg), "--out", str(out), "--quiet"]) == EXIT_OK
    table = read_rings_table(out / "rings.json")
    assert [block["f"] for block in table["rings"]] == [0.93, 1.0]

    from qgrating.config import parse_config

    run = parse_config(json.dumps(doc))
    for block in table["rings"]:
        velocity = block["velocity"]
        assert velocity == pytest.approx(
            block["f"] * confluence_velocity(run.beam), rel=1e-15
        )
        proj = Projectile(1, PROTON_MASS_AU, velocity, "z")
        r_max = max(
            np.hypot(kz - velocity, kp) for kz in (0.8, 1.9) for kp in (0.0, 0.6)
        )
        expected = visible_rings(run.beam, proj, run.grating, r_max)
        assert [o["n"] for o in block["orders"]] == [rb.order for rb in expected]
        for entry, rb in zip(block["orders"], expected):
            assert entry["b_minus"] == rb.b_minus
            assert entry["b_plus"] == rb.b_plus
            assert entry["r_inner"] == rb.r_inner
            assert entry["r_outer"] == rb.r_outer
