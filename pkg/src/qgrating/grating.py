"""Macroscopic grating geometry and the momentum-space structure it imprints.

An atom of momentum ``P`` crossing a grating of slit size ``alpha`` at a
distance ``D`` behind it carries a diffraction-structured center-of-mass
wavefunction.  In a collision at that distance the grating shows up as

* a three-valued momentum acceptance window per transverse direction
  (``window``), of half-width ``P alpha / (2 D)``,
* the usual multi-slit interference factor sin(N u)/sin(u)
  (``grating_factor``) and single-slit envelope sin(u)/u (``slit_envelope``),
* spot-size and momentum-uncertainty estimates for the interaction region.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .units import Energy, Length, Momentum

# Far-field safety factor: the diffracted wave is an asymptotic form, so the
# grating-to-target distance must comfortably exceed the grating extent.
FAR_FIELD_FACTOR = 10.0

# "wavelength much smaller than the slits": require min(a, b) >= 100 / p_in.
WAVELENGTH_FACTOR = 100.0


@dataclass(frozen=True)
class GratingSpec:
    """Rectangular-slit grating, all lengths in a.u.

    Attributes
    ----------
    a : slit height (z-direction, the direction of the slit stack)
    b : slit width (x-direction)
    d : grating period along z
    n_slits : number of slits
    dist : distance from grating to the interaction volume
    """

    a: Length
    b: Length
    d: Length
    n_slits: int
    dist: Length

    def __post_init__(self):
        if self.a <= 0.0 or self.b <= 0.0:
            raise ValueError(f"slit dimensions must be positive (a={self.a}, b={self.b})")
        if self.d <= self.a:
            raise ValueError(f"period must exceed slit height (d={self.d} <= a={self.a})")
        if self.n_slits < 1:
            raise ValueError(f"need at least one slit (n_slits={self.n_slits})")
        extent = max(self.n_slits * self.d, self.b)
        if self.dist <= FAR_FIELD_FACTOR * extent:
            raise ValueError(
                "far-field condition violated: dist must exceed "
                f"{FAR_FIELD_FACTOR:g} * max(n_slits*d, b) = {FAR_FIELD_FACTOR * extent:.6g} "
                f"(got dist={self.dist:.6g})"
            )


@dataclass(frozen=True)
class AtomBeam:
    """Target atom behind the grating, in a.u.

    Attributes
    ----------
    p_in : incident center-of-mass momentum (along +y, towards the target)
    eps_bind : binding energy of the active electron (negative)
    z_nucleus : nuclear charge
    n_electrons : electron count
    mass : atomic mass
    """

    p_in: Momentum
    eps_bind: Energy
    z_nucleus: int
    n_electrons: int
    mass: float

    def __post_init__(self):
        if self.p_in <= 0.0:
            raise ValueError(f"beam momentum must be positive (p_in={self.p_in})")
        if self.eps_bind >= 0.0:
            raise ValueError(f"binding energy must be negative (eps_bind={self.eps_bind})")
        if self.z_nucleus < 1:
            raise ValueError(f"z_nucleus must be >= 1 (got {self.z_nucleus})")
        if self.n_electrons < 1:
            raise ValueError(f"n_electrons must be >= 1 (got {self.n_electrons})")
        if self.mass <= 0.0:
            raise ValueError(f"atomic mass must be positive (got {self.mass})")


def check_beam_grating(beam: AtomBeam, grating: GratingSpec) -> None:
    """Validate the short-wavelength condition 1/p_in << min(a, b)."""
    lam = 1.0 / beam.p_in
    smallest = min(grating.a, grating.b)
    if lam * WAVELENGTH_FACTOR > smallest:
        raise ValueError(
            "beam wavelength too large for the slits: need "
            f"min(a, b) >= {WAVELENGTH_FACTOR:g}/p_in = {lam * WAVELENGTH_FACTOR:.6g} a.u. "
            f"(got {smallest:.6g})"
        )


def window_half_width(slit: Length, beam: AtomBeam, grating: GratingSpec) -> Momentum:
    """Half-width ``p_in * slit / (2 dist)`` of the momentum acceptance window."""
    return beam.p_in * slit / (2.0 * grating.dist)


def window_values(eta, half_width: Momentum):
    """Three-valued acceptance window, vectorized over ``eta``.

    pi inside |eta| < half_width, pi/2 exactly on the edge, 0 outside.
    The edge branch is kept for fidelity even though generic float grids
    essentially never hit it.
    """
    eta = np.asarray(eta, dtype=float)
    mag = np.abs(eta)
    out = np.where(mag < half_width, np.pi, np.where(mag == half_width, np.pi / 2.0, 0.0))
    return out if out.ndim else float(out)


def window(eta: Momentum, slit: Length, beam: AtomBeam, grating: GratingSpec):
    """Momentum acceptance window of one slit dimension (``slit`` is a or b)."""
    if slit != grating.a and slit != grating.b:
        raise ValueError("slit must be grating.a or grating.b")
    return window_values(eta, window_half_width(slit, beam, grating))


def grating_factor(u, n_slits: int):
    """Multi-slit interference factor sin(N u)/sin(u), vectorized.

    The removable singularities at u = m*pi evaluate to their limit
    +/- N with sign (-1)^(m (N-1)).  Computed via the reduced offset
    delta = u - m*pi so the ratio stays accurate arbitrarily close to
    every singular point.  Intensity code must square this (the sign at
    the singular points is physically irrelevant but kept exact).
    """
    u = np.asarray(u, dtype=float)
    m = np.round(u / np.pi)
    delta = u - m * np.pi
    sign = np.where((m.astype(np.int64) * (n_slits - 1)) % 2 == 0, 1.0, -1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.sin(n_slits * delta) / np.sin(delta)
    out = sign * np.where(delta == 0.0, float(n_slits), ratio)
    return out if out.ndim else float(out)


def slit_envelope(u):
    """Normalized single-slit envelope sin(u)/u with limit 1 at u = 0."""
    u = np.asarray(u, dtype=float)
    out = np.sinc(u / np.pi)
    return out if out.ndim else float(out)


def spot_size_z(beam: AtomBeam, grating: GratingSpec) -> Length:
    """Size ``dist / (p_in a)`` of the single-atom spot along z at the target."""
    return grating.dist / (beam.p_in * grating.a)


def momentum_uncertainty(beam: AtomBeam, grating: GratingSpec) -> tuple[Momentum, Momentum]:
    """Momentum-balance uncertainties (along x, along z) induced by the grating.

    The grating exchanges uncontrolled transverse momentum with the atom,
    blurring the collision momentum balance by the full window widths
    ``(p_in b / dist, p_in a / dist)``.  The energy balance carries no such
    uncertainty (the grating is infinitely heavy and initially at rest).
    """
    return (beam.p_in * grating.b / grating.dist, beam.p_in * grating.a / grating.dist)
