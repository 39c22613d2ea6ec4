"""Brute-force quadrature oracles for the closed-form matrix elements.

Test-only machinery: everything here recomputes what `atomic` provides in
closed form, by direct numerical integration, so the two can be compared
at fixed sample points.  Nothing in the production paths imports this
module.

The bound-free integral is reduced to 2D: with the azimuth taken around
k_vec, the exp(i q.r) azimuthal average is 2 pi J0(q sin(theta_q) r s),
leaving a (radial x polar) product rule.  The confluent hypergeometric
factor 1F1(i nu; 1; i s) is precomputed on a ray by integrating its ODE

    w'' + (1/s - i) w' + (nu/s) w = 0,      w(0) = 1, w'(0) = -nu,

(DOP853, rtol 1e-12) and cubic-spline interpolated; this was checked
against mpmath.hyp1f1 to ~1e-12 relative over s in [0.5, 200].

Every oracle result is accepted only after a refinement pass (finer
radial/angular resolution, larger cutoff) reproduces it within the
requested tolerance; otherwise OracleConvergenceError is raised — a
non-converged oracle value is never returned.  Summation order is fixed
and compensated (math.fsum), so repeated runs are bit-identical.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from math import fsum

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicSpline
from scipy.special import j0, loggamma, roots_legendre

from .atomic import ContinuumElectron, HydrogenicTarget, ScreenedAtom


class OracleConvergenceError(RuntimeError):
    """Raised when refinement fails to confirm an oracle value."""


@dataclass(frozen=True)
class QuadratureSpec:
    """Resolution knobs for the oracle integrals.

    r_max_scale : radial cutoff in units of the slowest decay length
    points_per_unit : radial points per unit of (k + q + z) * r
    n_angular : Gauss-Legendre order for the polar integral
    panel_order : Gauss-Legendre order within each radial panel
    spline_step : s-grid spacing for the 1F1 spline
    rtol : requested relative tolerance, enforced by refinement
    refine : resolution multiplier for the confirmation pass
    """

    r_max_scale: float = 50.0
    points_per_unit: float = 6.0
    n_angular: int = 400
    panel_order: int = 40
    spline_step: float = 0.01
    rtol: float = 1e-7
    refine: float = 1.5


def _hyp1f1_ray(nu: float, s_max: float, step: float) -> CubicSpline:
    """1F1(i nu; 1; i s) for s in [0, s_max] as a cubic spline."""
    s0 = 1e-3
    a = 1j * nu
    zc = 1j * s0
    w0 = 1.0 + 0j
    w0p = 0.0 + 0j
    fac = 1.0 + 0j
    for n in range(1, 40):
        fac *= (a + n - 1) / n / n
        w0 += fac * zc**n
        w0p += fac * n * zc ** (n - 1)
    w0p *= 1j  # d/ds of F(i s)

    def rhs(s, y):
        f, fp = y
        return [fp, -(1.0 / s - 1j) * fp - (nu / s) * f]

    ts = np.arange(s0, s_max + step, step)
    sol = solve_ivp(
        rhs, (s0, ts[-1]), [w0, w0p], t_eval=ts, rtol=1e-12, atol=1e-14, method="DOP853"
    )
    if not sol.success:
        raise OracleConvergenceError(f"1F1 ODE integration failed: {sol.message}")
    s_nodes = np.concatenate([[0.0], sol.t])
    w_nodes = np.concatenate([[1.0 + 0j], sol.y[0]])
    return CubicSpline(s_nodes, w_nodes)


def _radial_panels(r_max: float, n_points: int, order: int):
    """Panel edges and in-panel Gauss-Legendre rule covering [0, r_max]."""
    xg, wg = roots_legendre(order)
    edges = np.linspace(0.0, r_max, max(8, n_points // order) + 1)
    return edges, xg, wg


def _bound_free_quadrature(
    z: float, k_vec: np.ndarray, q_vec: np.ndarray, spec: QuadratureSpec, nu_override=None
) -> complex:
    """Direct integral <psi_k^- | e^{i q.r} | phi_1s>, reduced to 2D.

    nu_override = 0 replaces the Coulomb wave by a plane wave of the same
    momentum — used to test this very machinery against the exact Fourier
    transform of the bound state.
    """
    k = float(np.linalg.norm(k_vec))
    q = float(np.linalg.norm(q_vec))
    nu = z / k if nu_override is None else float(nu_override)
    cosq = float(k_vec @ q_vec) / (k * q)
    cosq = min(1.0, max(-1.0, cosq))
    sinq = np.sqrt(max(0.0, 1.0 - cosq * cosq))
    r_max = spec.r_max_scale / z

    if nu != 0.0:
        spline = _hyp1f1_ray(nu, 2.0 * k * r_max * 1.001, spec.spline_step)
    else:
        spline = lambda s: np.ones_like(s, dtype=complex)  # noqa: E731

    n_r = max(400, int(spec.points_per_unit * (k + q + z) * r_max))
    edges, xg, wg = _radial_panels(r_max, n_r, spec.panel_order)
    xc, wc = roots_legendre(spec.n_angular)
    s_perp = np.sqrt(np.maximum(0.0, 1.0 - xc * xc))

    parts = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        mid, hw = 0.5 * (hi + lo), 0.5 * (hi - lo)
        r = mid + hw * xg
        R = r[:, None]
        C = xc[None, :]
        phase = np.exp(1j * R * C * (q * cosq - k))
        f1 = spline(k * R * (1.0 + C))
        bess = j0(q * sinq * R * s_perp[None, :])
        ang = (phase * f1 * bess) @ wc
        parts.append(complex(np.sum(hw * wg * r * r * np.exp(-z * r) * ang)))

    radial = complex(fsum(p.real for p in parts), fsum(p.imag for p in parts))
    pref = (2.0 * np.pi) ** (-1.5) * np.exp(np.pi * nu / 2.0 + loggamma(1.0 - 1j * nu))
    pref *= z**1.5 / np.sqrt(np.pi) * 2.0 * np.pi
    return pref * radial


def _refined(spec: QuadratureSpec) -> QuadratureSpec:
    return replace(
        spec,
        r_max_scale=spec.r_max_scale * 1.25,
        points_per_unit=spec.points_per_unit * spec.refine,
        n_angular=int(spec.n_angular * spec.refine),
    )


def _confirm(value: complex, value_ref: complex, rtol: float, what: str) -> complex:
    scale = max(abs(value_ref), 1e-300)
    err = abs(value - value_ref) / scale
    if err > rtol:
        raise OracleConvergenceError(
            f"{what} did not converge: refinement moved the value by "
            f"{err:.3e} relative (requested {rtol:.1e})"
        )
    return value_ref


def oracle_ionization_ff(
    target: HydrogenicTarget,
    electron: ContinuumElectron,
    q_vec,
    spec: QuadratureSpec = QuadratureSpec(),
) -> complex:
    """Quadrature value of the bound-free matrix element, convergence-checked."""
    q_vec = np.asarray(q_vec, dtype=float)
    k_vec = np.asarray(electron.k_vec, dtype=float)
    if np.linalg.norm(q_vec) == 0.0:
        raise ValueError("oracle requires |q_vec| > 0")
    base = _bound_free_quadrature(target.z_eff, k_vec, q_vec, spec)
    fine = _bound_free_quadrature(target.z_eff, k_vec, q_vec, _refined(spec))
    return _confirm(base, fine, spec.rtol, "bound-free quadrature")


def plane_wave_form_factor(z: float, k_vec, q_vec) -> float:
    """Exact <e^{i k.r}(2pi)^{-3/2} | e^{i q.r} | phi_1s>: the 1s Fourier transform."""
    dq2 = float(np.sum((np.asarray(q_vec, float) - np.asarray(k_vec, float)) ** 2))
    return (2.0 * np.pi) ** (-1.5) * z**1.5 / np.sqrt(np.pi) * 8.0 * np.pi * z / (dq2 + z * z) ** 2


def oracle_plane_wave_ff(z: float, k_vec, q_vec, spec: QuadratureSpec = QuadratureSpec()) -> complex:
    """The same quadrature machinery with the Coulomb factor forced to 1."""
    return _bound_free_quadrature(
        z, np.asarray(k_vec, float), np.asarray(q_vec, float), spec, nu_override=0.0
    )


def _radial_density_integral(weights, r_max: float, n_points: int, order: int, fn) -> float:
    """fsum of panel-wise Gauss-Legendre integrals of fn(r) over [0, r_max]."""
    edges, xg, wg = _radial_panels(r_max, n_points, order)
    parts = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        mid, hw = 0.5 * (hi + lo), 0.5 * (hi - lo)
        r = mid + hw * xg
        parts.append(float(np.sum(hw * wg * fn(r))))
    return fsum(parts)


def oracle_elastic_form_factor(
    atom: ScreenedAtom, q: float, spec: QuadratureSpec = QuadratureSpec()
) -> float:
    """F(q) by Fourier-transforming the model electron density.

    The density behind the Yukawa sum is
    rho(r) = Z Σ A_i α_i² e^{-α_i r}/(4 pi r), so
    F(q) = ∫ 4 pi r² rho(r) j0(q r) dr, integrated by panels and
    confirmed by refinement.
    """
    if q < 0.0:
        raise ValueError("momentum transfer magnitude must be >= 0")
    alpha_min = min(alpha for _, alpha in atom.yukawa_weights)
    alpha_max = max(alpha for _, alpha in atom.yukawa_weights)

    def fn(r):
        dens = 0.0
        for a_i, alpha_i in atom.yukawa_weights:
            dens = dens + a_i * alpha_i * alpha_i * np.exp(-alpha_i * r) * r
        return atom.z_nucleus * dens * np.sinc(q * r / np.pi)

    def run(s: QuadratureSpec) -> float:
        r_max = s.r_max_scale / alpha_min
        n_r = max(400, int(s.points_per_unit * (q + alpha_max) * r_max))
        return _radial_density_integral(atom.yukawa_weights, r_max, n_r, s.panel_order, fn)

    return _confirm(run(spec), run(_refined(spec)), spec.rtol, "elastic form-factor quadrature")


def oracle_bound_norm(z_eff: float, spec: QuadratureSpec = QuadratureSpec()) -> float:
    """∫ |phi_1s|² d³r by the same radial panel rule (should be 1)."""

    def fn(r):
        return 4.0 * z_eff**3 * r * r * np.exp(-2.0 * z_eff * r)

    def run(s: QuadratureSpec) -> float:
        r_max = s.r_max_scale / z_eff
        n_r = max(400, int(s.points_per_unit * 3.0 * z_eff * r_max))
        return _radial_density_integral((), r_max, n_r, s.panel_order, fn)

    return _confirm(run(spec), run(_refined(spec)), spec.rtol, "bound-state norm quadrature")
