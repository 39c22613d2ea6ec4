"""Strict JSON configuration: parsing, validation, canonical echo.

A run is described by one JSON object.  Grating lengths arrive in mm
(as an experimentalist would quote them), everything else in a.u.:

    {
      "mode": "ionization",
      "grating": {"a_mm": 0.1, "b_mm": 0.1, "d_mm": 0.2, "n_slits": 5,
                  "dist_mm": 200.0},
      "beam": {"p_in": 50.0, "eps_bind": -0.9, "z_nucleus": 2,
               "n_electrons": 2, "mass": 7296.0},
      "projectile": {"species": "proton", "f": 1.0},
      "recoil": {"p_r_z": 0.0, "q_x": 0.0, "q_y": 0.0},
      "grid": {"k_z": {"lo": 0.8, "hi": 1.9, "samples": 512},
               "k_perp": {"lo": 0.0, "hi": 0.6, "samples": 512}}
    }

The projectile carries exactly one velocity selector: "velocity" (a.u.),
"energy_ev", "energy_kev_u", or "f" (velocity in units of the confluence
velocity); sweep mode moves the choice into a top-level "f_list".  The
"mode" key may be omitted when the CLI subcommand already names it.

Unknown keys are rejected everywhere, and every domain invariant is
revalidated at parse time, so a config that parses will also run.
``RunConfig.document`` is the canonicalized echo (defaults filled,
numbers normalized) that serializers embed verbatim in grid metadata:
parsing that echo reproduces the run.
"""

from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass

import json
import numpy as np

from .atomic import ScreenedAtom, moliere_atom
from .grating import AtomBeam, GratingSpec, check_beam_grating
from .grids import GridAxis
from .kinematics import Projectile, RecoilSetting, confluence_velocity
from .spectra import ElasticJob, IonizationJob
from .units import (
    ALPHA_MASS_AU,
    HE_PLUS_MASS_AU,
    PROTON_MASS_AU,
    ev_to_au,
    mm_to_au,
    velocity_from_kev_per_u,
)

MODES = ("diffraction", "elastic", "ionization", "rings", "sweep")

PROJECTILE_SPECIES = {
    "electron": (-1, 1.0),
    "proton": (1, PROTON_MASS_AU),
    "he+": (1, HE_PLUS_MASS_AU),
    "alpha": (2, ALPHA_MASS_AU),
}

_VELOCITY_KEYS = ("velocity", "energy_ev", "energy_kev_u", "f")


class ConfigError(ValueError):
    """Invalid or inconsistent run configuration."""


# ---------------------------------------------------------------------------
# low-level checked readers
# ---------------------------------------------------------------------------


def _as_object(node, where: str) -> dict:
    if not isinstance(node, dict):
        raise ConfigError(f"'{where}' must be a JSON object")
    return node


def _check_keys(node: dict, where: str, allowed: set[str]) -> None:
    for key in node:
        if key not in allowed:
            raise ConfigError(f"unknown key '{key}' in '{where}'")


def _get(node: dict, where: str, key: str):
    if key not in node:
        raise ConfigError(f"missing key '{key}' in '{where}'")
    return node[key]


def _number(node: dict, where: str, key: str) -> float:
    val = _get(node, where, key)
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise ConfigError(f"key '{key}' in '{where}' must be a number")
    val = float(val)
    if not np.isfinite(val):
        raise ConfigError(f"key '{key}' in '{where}' must be finite")
    return val


def _integer(node: dict, where: str, key: str) -> int:
    val = _get(node, where, key)
    if isinstance(val, bool) or not isinstance(val, int):
        raise ConfigError(f"key '{key}' in '{where}' must be an integer")
    return val


@contextmanager
def _domain(where: str):
    """Re-raise domain ValueErrors as ConfigErrors with location context."""
    try:
        yield
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from exc


# ---------------------------------------------------------------------------
# section parsers
# ---------------------------------------------------------------------------


def _parse_grating(node) -> tuple[GratingSpec, dict]:
    node = _as_object(node, "grating")
    _check_keys(node, "grating", {"a_mm", "b_mm", "d_mm", "n_slits", "dist_mm"})
    a_mm = _number(node, "grating", "a_mm")
    b_mm = _number(node, "grating", "b_mm")
    d_mm = _number(node, "grating", "d_mm")
    n_slits = _integer(node, "grating", "n_slits")
    dist_mm = _number(node, "grating", "dist_mm")
    with _domain("grating"):
        spec = GratingSpec(
            mm_to_au(a_mm), mm_to_au(b_mm), mm_to_au(d_mm), n_slits, mm_to_au(dist_mm)
        )
    doc = {"a_mm": a_mm, "b_mm": b_mm, "d_mm": d_mm, "n_slits": n_slits, "dist_mm": dist_mm}
    return spec, doc


def _parse_beam(node) -> tuple[AtomBeam, dict]:
    node = _as_object(node, "beam")
    _check_keys(node, "beam", {"p_in", "eps_bind", "z_nucleus", "n_electrons", "mass"})
    p_in = _number(node, "beam", "p_in")
    eps = _number(node, "beam", "eps_bind")
    z_n = _integer(node, "beam", "z_nucleus")
    n_el = _integer(node, "beam", "n_electrons")
    mass = _number(node, "beam", "mass")
    with _domain("beam"):
        beam = AtomBeam(p_in, eps, z_n, n_el, mass)
    doc = {"p_in": p_in, "eps_bind": eps, "z_nucleus": z_n, "n_electrons": n_el, "mass": mass}
    return beam, doc


def _parse_recoil(node) -> tuple[RecoilSetting, dict]:
    if node is None:
        node = {}
    node = _as_object(node, "recoil")
    _check_keys(node, "recoil", {"p_r_z", "q_x", "q_y"})
    vals = {
        key: _number(node, "recoil", key) if key in node else 0.0
        for key in ("p_r_z", "q_x", "q_y")
    }
    return RecoilSetting(vals["p_r_z"], vals["q_x"], vals["q_y"]), vals


def _parse_axis(node, name: str, unit: str) -> tuple[GridAxis, dict]:
    node = _as_object(node, f"grid.{name}")
    _check_keys(node, f"grid.{name}", {"lo", "hi", "samples"})
    lo = _number(node, f"grid.{name}", "lo")
    hi = _number(node, f"grid.{name}", "hi")
    samples = _integer(node, f"grid.{name}", "samples")
    with _domain(f"grid.{name}"):
        axis = GridAxis(name, unit, lo, hi, samples)
    return axis, {"lo": lo, "hi": hi, "samples": samples}


def _parse_projectile(node, beam: AtomBeam, selector_required: bool):
    """Returns (charge, mass, velocity|None, doc); velocity None in sweep mode."""
    node = _as_object(node, "projectile")
    allowed = {"species", "z_p", "mass", *(_VELOCITY_KEYS if selector_required else ())}
    _check_keys(node, "projectile", allowed)

    doc: dict = {}
    if "species" in node:
        species = _get(node, "projectile", "species")
        if species not in PROJECTILE_SPECIES:
            known = ", ".join(sorted(PROJECTILE_SPECIES))
            raise ConfigError(f"unknown projectile species '{species}' (known: {known})")
        if "z_p" in node or "mass" in node:
            raise ConfigError("'projectile' takes either 'species' or explicit 'z_p'+'mass', not both")
        charge, mass = PROJECTILE_SPECIES[species]
        doc["species"] = species
    else:
        charge = _integer(node, "projectile", "z_p")
        mass = _number(node, "projectile", "mass")
        doc["z_p"] = charge
        doc["mass"] = mass

    if not selector_required:
        return charge, mass, None, doc

    present = [key for key in _VELOCITY_KEYS if key in node]
    if len(present) != 1:
        raise ConfigError(
            "'projectile' needs exactly one of "
            + "/".join(_VELOCITY_KEYS)
            + (f" (got {', '.join(present)})" if present else "")
        )
    key = present[0]
    val = _number(node, "projectile", key)
    doc[key] = val
    if key == "velocity":
        velocity = val
    elif key == "energy_ev":
        if val < 0.0:
            raise ConfigError("'projectile.energy_ev' must be >= 0")
        velocity = float(np.sqrt(2.0 * ev_to_au(val) / mass))
    elif key == "energy_kev_u":
        with _domain("projectile.energy_kev_u"):
            velocity = velocity_from_kev_per_u(val)
    else:  # f
        if val <= 0.0:
            raise ConfigError("'projectile.f' must be positive")
        velocity = val * confluence_velocity(beam)
    if velocity <= 0.0:
        raise ConfigError("projectile velocity must resolve to a positive value")
    return charge, mass, velocity, doc


# ---------------------------------------------------------------------------
# run configuration
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RunConfig:
    """Validated run setup plus the canonical document that reproduces it."""

    mode: str
    document: dict
    grating: GratingSpec
    beam: AtomBeam
    recoil: RecoilSetting
    proj_charge: int | None
    proj_mass: float | None
    velocity: float | None
    f_list: tuple[float, ...]
    axis1: GridAxis | None
    axis2: GridAxis | None
    diff_extent: tuple[float, float] | None
    diff_samples: tuple[int, int] | None

    def projectile(self, velocity: float | None = None) -> Projectile:
        v = self.velocity if velocity is None else velocity
        axis = "x" if self.mode == "elastic" else "z"
        return Projectile(self.proj_charge, self.proj_mass, v, axis)

    def velocity_for_f(self, f: float) -> float:
        return f * confluence_velocity(self.beam)

    def f_values(self) -> tuple[float, ...]:
        """The f value(s) this run covers (singleton outside sweep mode)."""
        if self.f_list:
            return self.f_list
        return (self.velocity / confluence_velocity(self.beam),)

    def atom_model(self) -> ScreenedAtom:
        return moliere_atom(self.beam.z_nucleus)

    def ionization_job(self, velocity: float | None = None) -> IonizationJob:
        with _domain("ionization job"):
            return IonizationJob(
                self.beam, self.projectile(velocity), self.grating,
                self.recoil, self.axis1, self.axis2,
            )

    def elastic_job(self) -> ElasticJob:
        with _domain("elastic job"):
            return ElasticJob(
                self.beam, self.projectile(), self.atom_model(),
                self.grating, self.axis1, self.axis2,
            )


def parse_config(text: str, mode: str | None = None) -> RunConfig:
    """Parse and fully validate a config document; see module docstring."""
    try:
        root = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    root = _as_object(root, "config")

    doc_mode = root.get("mode")
    if doc_mode is None and mode is None:
        raise ConfigError("missing key 'mode' in 'config' (and no subcommand given)")
    if doc_mode is not None:
        if doc_mode not in MODES:
            raise ConfigError(f"unknown mode '{doc_mode}' (known: {', '.join(MODES)})")
        if mode is not None and doc_mode != mode:
            raise ConfigError(f"config mode '{doc_mode}' does not match subcommand '{mode}'")
        mode = doc_mode

    allowed = {"mode", "grating", "beam"}
    if mode == "diffraction":
        allowed |= {"grid"}
    elif mode == "elastic":
        allowed |= {"projectile", "grid"}
    elif mode in ("ionization", "rings"):
        allowed |= {"projectile", "recoil", "grid"}
        if mode == "rings":
            allowed |= {"f_list"}
    elif mode == "sweep":
        allowed |= {"projectile", "recoil", "grid", "f_list"}
    _check_keys(root, "config", allowed)

    grating, grating_doc = _parse_grating(_get(root, "config", "grating"))
    beam, beam_doc = _parse_beam(_get(root, "config", "beam"))
    with _domain("beam/grating"):
        check_beam_grating(beam, grating)

    document: dict = {"mode": mode, "grating": grating_doc, "beam": beam_doc}

    f_list: tuple[float, ...] = ()
    if "f_list" in root:
        raw_list = _get(root, "config", "f_list")
        if not isinstance(raw_list, list) or not raw_list:
            raise ConfigError("'f_list' must be a non-empty array of numbers")
        cleaned = []
        for i, val in enumerate(raw_list):
            if isinstance(val, bool) or not isinstance(val, (int, float)) or not val > 0.0:
                raise ConfigError(f"'f_list[{i}]' must be a positive number")
            cleaned.append(float(val))
        f_list = tuple(cleaned)

    proj_charge = proj_mass = velocity = None
    if mode in ("elastic", "ionization", "rings", "sweep"):
        selector_required = not f_list and mode != "sweep"
        if mode == "sweep" and not f_list:
            raise ConfigError("missing key 'f_list' in 'config' (required in sweep mode)")
        proj_charge, proj_mass, velocity, proj_doc = _parse_projectile(
            _get(root, "config", "projectile"), beam, selector_required
        )
        document["projectile"] = proj_doc

    recoil = RecoilSetting()
    if mode in ("ionization", "rings", "sweep"):
        recoil, recoil_doc = _parse_recoil(root.get("recoil"))
        document["recoil"] = recoil_doc
        if mode == "rings" and recoil.p_r_z != 0.0:
            raise ConfigError("rings mode requires recoil p_r_z = 0 (analytic bounds)")

    axis1 = axis2 = None
    diff_extent = diff_samples = None
    if mode == "diffraction":
        grid = _as_object(_get(root, "config", "grid"), "grid")
        _check_keys(grid, "grid", {"extent_x", "extent_z", "samples_x", "samples_z"})
        ext_x = _number(grid, "grid", "extent_x")
        ext_z = _number(grid, "grid", "extent_z")
        ns_x = _integer(grid, "grid", "samples_x")
        ns_z = _integer(grid, "grid", "samples_z")
        if ext_x <= 0.0 or ext_z <= 0.0:
            raise ConfigError("'grid' extents must be positive")
        if ns_x < 2 or ns_z < 2:
            raise ConfigError("'grid' needs at least 2 samples per axis")
        diff_extent = (ext_x, ext_z)
        diff_samples = (ns_x, ns_z)
        document["grid"] = {
            "extent_x": ext_x, "extent_z": ext_z, "samples_x": ns_x, "samples_z": ns_z,
        }
    elif mode == "elastic":
        grid = _as_object(_get(root, "config", "grid"), "grid")
        _check_keys(grid, "grid", {"theta", "p_az_f"})
        axis1, ax1_doc = _parse_axis(_get(grid, "grid", "theta"), "theta", "rad")
        axis2, ax2_doc = _parse_axis(_get(grid, "grid", "p_az_f"), "p_az_f", "a.u.")
        document["grid"] = {"theta": ax1_doc, "p_az_f": ax2_doc}
    else:  # ionization family
        grid = _as_object(_get(root, "config", "grid"), "grid")
        _check_keys(grid, "grid", {"k_z", "k_perp"})
        axis1, ax1_doc = _parse_axis(_get(grid, "grid", "k_z"), "k_z", "a.u.")
        axis2, ax2_doc = _parse_axis(_get(grid, "grid", "k_perp"), "k_perp", "a.u.")
        document["grid"] = {"k_z": ax1_doc, "k_perp": ax2_doc}

    if f_list:
        document["f_list"] = list(f_list)

    cfg = RunConfig(
        mode=mode,
        document=document,
        grating=grating,
        beam=beam,
        recoil=recoil,
        proj_charge=proj_charge,
        proj_mass=proj_mass,
        velocity=velocity,
        f_list=f_list,
        axis1=axis1,
        axis2=axis2,
        diff_extent=diff_extent,
        diff_samples=diff_samples,
    )

    # revalidate the downstream invariants now, so parse failure == run failure
    if mode in ("ionization", "rings"):
        for f in cfg.f_values():
            cfg.ionization_job(cfg.velocity_for_f(f) if f_list else None)
    elif mode == "sweep":
        for f in f_list:
            cfg.ionization_job(cfg.velocity_for_f(f))
    elif mode == "elastic":
        cfg.elastic_job()
    return cfg
