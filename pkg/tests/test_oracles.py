"""Self-tests of the quadrature oracles (the machinery that checks `atomic`)."""

import json
from pathlib import Path

import mpmath
import numpy as np
import pytest

from qgrating.atomic import (
    ContinuumElectron,
    HydrogenicTarget,
    bound_free_matrix_element,
    elastic_form_factor,
    xenon_moliere,
)
from qgrating.oracles import (
    OracleConvergenceError,
    QuadratureSpec,
    _hyp1f1_ray,
    oracle_bound_norm,
    oracle_elastic_form_factor,
    oracle_ionization_ff,
    oracle_plane_wave_ff,
    plane_wave_form_factor,
)

ORACLE_FILE = Path(__file__).parent / "data" / "bound_free_oracle.json"

# keeps the live-quadrature tests fast; rtol is still refinement-enforced
CHEAP = QuadratureSpec(r_max_scale=40.0, points_per_unit=4.0, n_angular=200, rtol=1e-6)


def test_hyp1f1_spline_against_mpmath():
    for nu in (0.3, 2.0, 8.0):
        spline = _hyp1f1_ray(nu, 60.0, 0.01)
        for s in (0.25, 1.0, 5.0, 20.0, 55.0):
            mine = complex(spline(s))
            ref = complex(mpmath.hyp1f1(1j * nu, 1, 1j * s))
            # worst case is large nu at small s (fast oscillation vs the
            # fixed spline step); well inside the oracle's 1e-7 budget
            assert mine == pytest.approx(ref, rel=1e-8)
        assert complex(spline(0.0)) == 1.0 + 0j


def test_quadrature_machinery_plane_wave_limit():
    # with the Coulomb factor forced to 1 the integral is the exact 1s
    # Fourier transform — an independent end-to-end check of the reduction
    z = float(np.sqrt(1.8))
    cases = [
        ((0.0, 0.0, 1.0), (0.5, 0.0, 0.5)),
        ((0.0, 0.0, 0.4), (0.0, 0.0, 0.45)),  # near-coalescent q ~ k
        ((0.6, 0.0, 0.8), (2.0, 0.0, -1.0)),
    ]
    for k_vec, q_vec in cases:
        got = oracle_plane_wave_ff(z, k_vec, q_vec, CHEAP)
        exact = plane_wave_form_factor(z, k_vec, q_vec)
        assert got.real == pytest.approx(exact, rel=1e-8)
        assert abs(got.imag) < 1e-10 * abs(exact)


def test_bound_state_norm():
    for z in (0.7, 1.0, float(np.sqrt(1.8))):
        assert oracle_bound_norm(z) == pytest.approx(1.0, abs=1e-10)


def test_elastic_oracle_matches_closed_form():
    atom = xenon_moliere()
    for q in (0.0, 1.0, 4.7):
        assert oracle_elastic_form_factor(atom, q) == pytest.approx(
            elastic_form_factor(atom, q), rel=1e-8
        )
    with pytest.raises(ValueError):
        oracle_elastic_form_factor(atom, -1.0)


def test_live_quadrature_confirms_closed_form():
    target = HydrogenicTarget.from_binding_energy(-0.9)
    cases = [
        ((0.3, 0.0, 0.8), (0.05, 0.0, 0.4)),
        ((0.0, 0.0, 1.5), (1.0, 0.0, 1.2)),
    ]
    for k_vec, q_vec in cases:
        got = oracle_ionization_ff(target, ContinuumElectron(k_vec), q_vec, CHEAP)
        k_arr, q_arr = np.asarray(k_vec), np.asarray(q_vec)
        want = bound_free_matrix_element(
            target.z_eff,
            float(np.linalg.norm(k_arr)),
            float(np.linalg.norm(q_arr)),
            float(k_arr @ q_arr),
        )
        assert got == pytest.approx(want, rel=2e-6)


def test_unconverged_oracle_refuses_to_answer():
    coarse = QuadratureSpec(points_per_unit=0.5, n_angular=12, panel_order=6, rtol=1e-9)
    target = HydrogenicTarget.from_binding_energy(-0.9)
    with pytest.raises(OracleConvergenceError):
        oracle_ionization_ff(
            target, ContinuumElectron((0.0, 0.0, 2.0)), (2.1, 0.0, 2.1), coarse
        )


def test_oracle_rejects_zero_momentum_transfer():
    target = HydrogenicTarget.from_binding_energy(-0.9)
    with pytest.raises(ValueError):
        oracle_ionization_ff(target, ContinuumElectron((0.0, 0.0, 1.0)), (0.0, 0.0, 0.0))


def test_frozen_sample_consistent_with_defaults():
    # the checked-in sample must have been produced by the current defaults,
    # else test_atomic's comparisons silently lose their meaning
    data = json.loads(ORACLE_FILE.read_text())
    spec = QuadratureSpec()
    assert data["z_eff"] == pytest.approx(np.sqrt(1.8), rel=1e-15)
    assert data["quadrature"] == {
        "r_max_scale": spec.r_max_scale,
        "points_per_unit": spec.points_per_unit,
        "n_angular": spec.n_angular,
        "panel_order": spec.panel_order,
        "spline_step": spec.spline_step,
        "rtol": spec.rtol,
        "refine": spec.refine,
    }
    assert len(data["samples"]) == 20
