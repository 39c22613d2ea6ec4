"""Collision kinematics: momentum transfer, delta-function reduction, rings.

For fast ion impact with the energy balance reduced out, the minimal
longitudinal momentum transfer is q_min = (k²/2 - eps_bind)/v.  The
grating window in the recoil momentum balance then confines the emitted
electron to concentric annuli around (k_z, k_perp) = (v, 0):

    B_n      = q_min - P_Rz - k_z - p_in d n / dist          (window argument)
    B_n^± = v² - 2|eps| + 2 v p_in (d/dist) n ± v p_in a/dist  (annulus bounds)

with |B_n| ≤ p_in a/(2 dist)  ⟺  B_n⁻ ≤ (k_z - v)² + k_perp² ≤ B_n⁺
(at P_Rz = q_x = q_y = 0).  Orders with B⁺ ≤ 0 are invisible; the n = 0
structure is a filled disk exactly when B⁻₀ < 0 < B⁺₀, which at the
confluence velocity v₀ = √(2|eps|) is always the case.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import ceil, floor, sqrt

import numpy as np

from .grating import AtomBeam, GratingSpec, window_half_width
from .units import Momentum


@dataclass(frozen=True)
class Projectile:
    """Charged projectile; velocity in a.u., incident along +z or +x.

    incident_axis "z" is the ionization geometry (ion beam along the
    grating stacking direction), "x" the elastic one (beam crossing the
    slits sideways).
    """

    z_p: int
    mass: float
    velocity: float
    incident_axis: str = "z"

    def __post_init__(self):
        if self.z_p == 0:
            raise ValueError("projectile charge must be nonzero")
        if self.mass <= 0.0:
            raise ValueError(f"projectile mass must be positive (got {self.mass})")
        if self.velocity <= 0.0:
            raise ValueError(f"projectile velocity must be positive (got {self.velocity})")
        if self.incident_axis not in ("x", "z"):
            raise ValueError(f"incident_axis must be 'x' or 'z' (got {self.incident_axis!r})")

    @property
    def momentum(self) -> Momentum:
        return self.mass * self.velocity


@dataclass(frozen=True)
class EmissionPoint:
    """Emitted-electron momentum in the (k_z, k_perp) half-plane."""

    k_z: Momentum
    k_perp: Momentum

    def __post_init__(self):
        if self.k_perp < 0.0:
            raise ValueError(f"k_perp must be >= 0 (got {self.k_perp})")
        if self.k == 0.0:
            raise ValueError("emission point must have k > 0")

    @property
    def k(self) -> Momentum:
        return sqrt(self.k_z * self.k_z + self.k_perp * self.k_perp)


@dataclass(frozen=True)
class RecoilSetting:
    """Fixed recoil-ion longitudinal momentum and transverse momentum transfer."""

    p_r_z: Momentum = 0.0
    q_x: Momentum = 0.0
    q_y: Momentum = 0.0


@dataclass(frozen=True)
class RingBounds:
    """Squared-radius limits of the order-n annulus in the emission plane."""

    order: int
    b_minus: float
    b_plus: float

    def __post_init__(self):
        if not self.b_plus > self.b_minus:
            raise ValueError(f"b_plus must exceed b_minus (got [{self.b_minus}, {self.b_plus}])")

    @property
    def visible(self) -> bool:
        return self.b_plus > 0.0

    @property
    def is_disk(self) -> bool:
        """True when the annulus degenerates to a filled disk (inner edge gone)."""
        return self.b_minus < 0.0 < self.b_plus

    @property
    def r_inner(self) -> float:
        return sqrt(max(self.b_minus, 0.0))

    @property
    def r_outer(self) -> float:
        return sqrt(max(self.b_plus, 0.0))


def q_min(k, beam: AtomBeam, proj: Projectile):
    """Minimal longitudinal momentum transfer (k²/2 - eps_bind)/v; > 0 always."""
    k = np.asarray(k, dtype=float)
    if np.any(k < 0.0):
        raise ValueError("electron momentum magnitude must be >= 0")
    out = (0.5 * k * k - beam.eps_bind) / proj.velocity
    return out if np.ndim(out) else float(out)


def confluence_velocity(beam: AtomBeam) -> float:
    """v₀ = √(2|eps_bind|), where the k = v ridge meets the q_min minimum."""
    return sqrt(-2.0 * beam.eps_bind)


def order_spacing(beam: AtomBeam, grating: GratingSpec) -> Momentum:
    """Window-argument shift p_in·d/dist between consecutive orders."""
    return beam.p_in * grating.d / grating.dist


def ring_bounds(n: int, beam: AtomBeam, proj: Projectile, grating: GratingSpec) -> RingBounds:
    """Annulus bounds B±_n; empty (invisible) result is valid and flagged."""
    base = proj.velocity * proj.velocity + 2.0 * beam.eps_bind
    step = 2.0 * proj.velocity * order_spacing(beam, grating)
    half = 2.0 * proj.velocity * window_half_width(grating.a, beam, grating)
    return RingBounds(n, base + step * n - half, base + step * n + half)


def visible_rings(
    beam: AtomBeam, proj: Projectile, grating: GratingSpec, r_max: float
) -> list[RingBounds]:
    """All orders with B⁺ > 0 and inner radius ≤ r_max, ascending in n.

    The order range follows from inverting the linear-in-n bounds; no
    arbitrary cutoff is involved.
    """
    if r_max <= 0.0:
        raise ValueError(f"r_max must be positive (got {r_max})")
    base = proj.velocity * proj.velocity + 2.0 * beam.eps_bind
    step = 2.0 * proj.velocity * order_spacing(beam, grating)
    half = 2.0 * proj.velocity * window_half_width(grating.a, beam, grating)
    # B⁺ > 0: n > -(base + half)/step ; B⁻ ≤ r_max²: n ≤ (r_max² - base + half)/step
    n_lo = floor(-(base + half) / step) + 1
    n_hi = ceil((r_max * r_max - base + half) / step)
    rings = [ring_bounds(n, beam, proj, grating) for n in range(n_lo, n_hi + 1)]
    return [rb for rb in rings if rb.visible and rb.r_inner <= r_max]


def window_argument(k_z, k_perp, recoil: RecoilSetting, n: int,
                    beam: AtomBeam, proj: Projectile, grating: GratingSpec):
    """B_n = q_min(k) - P_Rz - k_z - p_in·d·n/dist, vectorized over the grid."""
    k_z = np.asarray(k_z, dtype=float)
    k_perp = np.asarray(k_perp, dtype=float)
    k = np.hypot(k_z, k_perp)
    out = q_min(k, beam, proj) - recoil.p_r_z - k_z - order_spacing(beam, grating) * n
    return out if np.ndim(out) else float(out)


def window_argument_b_n(point: EmissionPoint, recoil: RecoilSetting, n: int,
                        beam: AtomBeam, proj: Projectile, grating: GratingSpec) -> Momentum:
    """Scalar window argument for one emission point."""
    if proj.incident_axis != "z":
        raise ValueError("window argument defined for projectiles incident along z")
    return float(window_argument(point.k_z, point.k_perp, recoil, n, beam, proj, grating))


def elastic_q(theta, proj: Projectile):
    """Momentum transfer for elastic deflection by theta in the x-z plane.

    Incidence along +x with |p_f| = |p_i| (recoil energy dropped, target
    mass ≫ 1): q = (p(1 - cos θ), 0, -p sin θ), so |q| = 2 p sin(θ/2).
    Vectorized; returns an array with a trailing xyz axis.
    """
    if proj.incident_axis != "x":
        raise ValueError("elastic momentum transfer defined for incidence along x")
    theta = np.asarray(theta, dtype=float)
    p = proj.momentum
    q = np.stack(
        [p * (1.0 - np.cos(theta)), np.zeros_like(theta), -p * np.sin(theta)], axis=-1
    )
    return q


def reduction_validity_ratio(q_magnitude: float, proj: Projectile) -> float:
    """|q|/p_in, the small parameter of the reduced ionization formula."""
    return float(q_magnitude) / proj.momentum
