"""Observable maps: ion-impact ionization rings and the elastic fringe map.

The reduced ionization value at an emission point (k_z, k_perp) is

    (Z_p²/v²) · |M(q₀, k)|² / q₀⁴ · Σ_n F_a²(B_n),

with q₀ = (q_x, q_y, q_min) and the emitted-electron azimuth fixed at 0,
k_vec = (k_perp, 0, k_z).  Because the period d exceeds the slit height a,
the acceptance intervals of different orders never overlap and at most one
n contributes per point; the sum is evaluated exactly through the nearest
candidate order.

The elastic map over (theta, p_az_f) is |Z_p (Z_N - F(q))/q²|² times the
same window comb in q_z - p_az_f; the unresolved x-window is a constant
factor and is dropped with the other constants (grids are peak-normalized).

Grid evaluation is partitioned into fixed row blocks (independent of any
worker count) so parallel runs are byte-identical to serial ones.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .atomic import (
    HydrogenicTarget,
    ScreenedAtom,
    bound_free_matrix_element,
    elastic_amplitude,
)
from .grating import AtomBeam, GratingSpec, window_half_width, window_values
from .grids import GridAxis, SpectrumGrid, peak_normalize
from .kinematics import (
    EmissionPoint,
    Projectile,
    RecoilSetting,
    confluence_velocity,
    order_spacing,
    q_min,
)

# A reduced-formula grid is rejected when the momentum transfer exceeds
# this fraction of the projectile momentum (the |q| ≪ p_in condition).
REDUCTION_VALIDITY_FRACTION = 0.1

ROW_BLOCK = 16


def row_blocks(n_rows: int, block: int = ROW_BLOCK) -> list[tuple[int, int]]:
    """Fixed partition of [0, n_rows) used by serial and parallel paths alike."""
    return [(lo, min(lo + block, n_rows)) for lo in range(0, n_rows, block)]


def comb_window_sq(t, spacing: float, half_width: float):
    """Σ_n F²(t - n·spacing) for the three-valued window of given half-width.

    Exact despite checking only the nearest order: spacing > 2·half_width
    (slits narrower than the period), so acceptance intervals are disjoint.
    """
    t = np.asarray(t, dtype=float)
    n_star = np.round(t / spacing)
    w = window_values(t - spacing * n_star, half_width)
    return w * w


# ---------------------------------------------------------------------------
# ionization
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IonizationJob:
    """Everything needed for one emission-spectrum grid (axis1 = k_z rows)."""

    beam: AtomBeam
    proj: Projectile
    grating: GratingSpec
    recoil: RecoilSetting
    kz_axis: GridAxis
    kperp_axis: GridAxis

    def __post_init__(self):
        if self.proj.incident_axis != "z":
            raise ValueError("ionization geometry requires a projectile incident along z")
        if self.kperp_axis.lo < 0.0:
            raise ValueError("k_perp axis must be nonnegative")
        k_max = max(
            np.hypot(kz, kp)
            for kz in (self.kz_axis.lo, self.kz_axis.hi)
            for kp in (self.kperp_axis.lo, self.kperp_axis.hi)
        )
        q0_max = np.sqrt(
            self.recoil.q_x**2
            + self.recoil.q_y**2
            + q_min(k_max, self.beam, self.proj) ** 2
        )
        if q0_max > REDUCTION_VALIDITY_FRACTION * self.proj.momentum:
            raise ValueError(
                "reduced formula invalid: max momentum transfer "
                f"{q0_max:.4g} exceeds {REDUCTION_VALIDITY_FRACTION:g} of the projectile "
                f"momentum {self.proj.momentum:.4g}"
            )

    @property
    def target(self) -> HydrogenicTarget:
        return HydrogenicTarget.from_binding_energy(self.beam.eps_bind)

    @property
    def f_ratio(self) -> float:
        return self.proj.velocity / confluence_velocity(self.beam)


def ionization_matrix_factor(k_z, k_perp, job: IonizationJob):
    """(Z_p²/v²)·|M(q₀, k)|²/q₀⁴, the smooth factor multiplying the window comb."""
    k_z = np.asarray(k_z, dtype=float)
    k_perp = np.asarray(k_perp, dtype=float)
    k = np.hypot(k_z, k_perp)
    if np.any(k == 0.0):
        raise ValueError("emission grid contains k = 0")
    qm = q_min(k, job.beam, job.proj)
    rc = job.recoil
    q0 = np.sqrt(rc.q_x**2 + rc.q_y**2 + qm * qm)
    k_dot_q = k_perp * rc.q_x + k_z * qm  # k_vec = (k_perp, 0, k_z), q0_y unused
    m = bound_free_matrix_element(job.target.z_eff, k, q0, k_dot_q)
    msq = (m * m.conjugate()).real
    v = job.proj.velocity
    return (job.proj.z_p * job.proj.z_p) / (v * v) * msq / (q0**4)


def _ionization_values(k_z, k_perp, job: IonizationJob):
    """Window comb times matrix factor; the factor is only evaluated on support."""
    k_z = np.asarray(k_z, dtype=float)
    k_perp = np.asarray(k_perp, dtype=float)
    k = np.hypot(k_z, k_perp)
    if np.any(k == 0.0):
        raise ValueError("emission grid contains k = 0")
    b0 = q_min(k, job.beam, job.proj) - job.recoil.p_r_z - k_z
    wsum = comb_window_sq(
        b0,
        order_spacing(job.beam, job.grating),
        window_half_width(job.grating.a, job.beam, job.grating),
    )
    out = np.zeros_like(wsum)
    hit = wsum > 0.0
    if np.any(hit):
        kz_hit = np.broadcast_to(k_z, wsum.shape)[hit]
        kp_hit = np.broadcast_to(k_perp, wsum.shape)[hit]
        out[hit] = wsum[hit] * ionization_matrix_factor(kz_hit, kp_hit, job)
    return out


def ionization_point(point: EmissionPoint, job: IonizationJob) -> float:
    """Reduced ionization value (relative units) at one emission point."""
    kz = np.array([[point.k_z]])
    kp = np.array([[point.k_perp]])
    return float(_ionization_values(kz, kp, job)[0, 0])


def ionization_row_block(job: IonizationJob, lo: int, hi: int) -> np.ndarray:
    """Raw (un-normalized) values for k_z rows [lo, hi); pure and picklable."""
    kz = job.kz_axis.values()[lo:hi][:, None]
    kp = job.kperp_axis.values()[None, :]
    return _ionization_values(kz, kp, job)


def ionization_grid(job: IonizationJob, raw: np.ndarray | None = None) -> SpectrumGrid:
    """Peak-normalized emission spectrum; assembles row blocks serially.

    A parallel runner may pass the pre-assembled ``raw`` matrix (built from
    the same row blocks) to reuse the normalization and metadata path.
    """
    if raw is None:
        raw = np.vstack(
            [ionization_row_block(job, lo, hi) for lo, hi in row_blocks(job.kz_axis.samples)]
        )
    values, normalized, peak = peak_normalize(raw)
    meta = {
        "kind": "ionization",
        "f": job.f_ratio,
        "confluence_velocity": confluence_velocity(job.beam),
        "peak_raw": peak,
    }
    if not normalized:
        meta["empty_support"] = True
    return SpectrumGrid(job.kz_axis, job.kperp_axis, values, normalized, meta)


# ---------------------------------------------------------------------------
# elastic
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ElasticJob:
    """Elastic interference map over (theta rows, p_az_f columns)."""

    beam: AtomBeam
    proj: Projectile
    atom_model: ScreenedAtom
    grating: GratingSpec
    theta_axis: GridAxis
    paz_axis: GridAxis

    def __post_init__(self):
        if self.proj.incident_axis != "x":
            raise ValueError("elastic geometry requires a projectile incident along x")
        if np.any(self.theta_axis.values() == 0.0):
            raise ValueError("theta axis hits the forward singularity theta = 0")


def _elastic_values(theta, p_az_f, job: ElasticJob):
    """Amplitude² (theta only) times the window comb in q_z - p_az_f."""
    theta = np.asarray(theta, dtype=float)
    p_az_f = np.asarray(p_az_f, dtype=float)
    p = job.proj.momentum
    q_mag = 2.0 * p * np.abs(np.sin(0.5 * theta))
    amp = elastic_amplitude(job.atom_model, job.proj.z_p, q_mag)
    q_z = -p * np.sin(theta)
    wsum = comb_window_sq(
        q_z - p_az_f,
        order_spacing(job.beam, job.grating),
        window_half_width(job.grating.a, job.beam, job.grating),
    )
    return amp * amp * wsum


def elastic_point(theta: float, p_az_f: float, job: ElasticJob) -> float:
    """Elastic map value (relative units) at one (theta, p_az_f) point."""
    if theta == 0.0:
        raise ValueError("forward direction theta = 0 is singular")
    return float(_elastic_values(theta, p_az_f, job))


def elastic_row_block(job: ElasticJob, lo: int, hi: int) -> np.ndarray:
    """Raw values for theta rows [lo, hi); pure and picklable."""
    th = job.theta_axis.values()[lo:hi][:, None]
    paz = job.paz_axis.values()[None, :]
    return _elastic_values(th, paz, job)


def elastic_grid(job: ElasticJob, raw: np.ndarray | None = None) -> SpectrumGrid:
    """Peak-normalized elastic interference map."""
    if raw is None:
        raw = np.vstack(
            [elastic_row_block(job, lo, hi) for lo, hi in row_blocks(job.theta_axis.samples)]
        )
    values, normalized, peak = peak_normalize(raw)
    meta = {"kind": "elastic", "peak_raw": peak}
    if not normalized:
        meta["empty_support"] = True
    return SpectrumGrid(job.theta_axis, job.paz_axis, values, normalized, meta)
