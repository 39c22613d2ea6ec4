"""Far-field intensity of the grating-structured center-of-mass wave.

On a transverse plane (X', Z') at distance ``dist`` behind the grating the
atom's probability density factorizes into two single-slit envelopes and
the multi-slit interference factor,

    I(X', Z') ∝ [ sinc_b(X') · sinc_a(Z') · sin(N u_d)/sin(u_d) ]²,

with u_alpha = p_in·alpha·coord/(2 dist).  Constant prefactors are dropped;
grids are peak-normalized.  Principal maxima sit at Z' = 2·pi·dist·m/(p_in·d).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grating import (
    AtomBeam,
    FAR_FIELD_FACTOR,
    GratingSpec,
    check_beam_grating,
    grating_factor,
    slit_envelope,
)
from .grids import GridAxis, SpectrumGrid, peak_normalize
from .units import Length


@dataclass(frozen=True)
class TransversePoint:
    """Observation point on the detection plane, both coordinates in a.u."""

    x: Length
    z: Length


def _check_paraxial(coord: float, grating: GratingSpec) -> None:
    if abs(coord) * FAR_FIELD_FACTOR > grating.dist:
        raise ValueError(
            f"transverse coordinate {coord:.6g} outside the paraxial domain "
            f"(|coord| must stay below dist/{FAR_FIELD_FACTOR:g} = {grating.dist / FAR_FIELD_FACTOR:.6g})"
        )


def intensity_xz(x, z, beam: AtomBeam, grating: GratingSpec):
    """Relative intensity on the detection plane, vectorized over x and z."""
    scale = beam.p_in / (2.0 * grating.dist)
    amp = (
        slit_envelope(scale * grating.b * np.asarray(x, dtype=float))
        * slit_envelope(scale * grating.a * np.asarray(z, dtype=float))
        * grating_factor(scale * grating.d * np.asarray(z, dtype=float), grating.n_slits)
    )
    return amp * amp


def intensity_at(p: TransversePoint, beam: AtomBeam, grating: GratingSpec) -> float:
    """Relative |psi|² of the diffracted center-of-mass wave at one point."""
    check_beam_grating(beam, grating)
    _check_paraxial(p.x, grating)
    _check_paraxial(p.z, grating)
    return float(intensity_xz(p.x, p.z, beam, grating))


def principal_maximum_spacing(beam: AtomBeam, grating: GratingSpec) -> Length:
    """Z'-distance between adjacent principal maxima, 2·pi·dist/(p_in·d)."""
    return 2.0 * np.pi * grating.dist / (beam.p_in * grating.d)


def field_grid(
    beam: AtomBeam,
    grating: GratingSpec,
    extent: tuple[Length, Length],
    samples: tuple[int, int],
) -> SpectrumGrid:
    """Peak-normalized intensity on [-extent, +extent] per axis; x indexes rows."""
    ext_x, ext_z = float(extent[0]), float(extent[1])
    ns_x, ns_z = int(samples[0]), int(samples[1])
    if ext_x <= 0.0 or ext_z <= 0.0:
        raise ValueError(f"extents must be positive (got {extent})")
    if ns_x < 2 or ns_z < 2:
        raise ValueError(f"need at least 2 samples per axis (got {samples})")
    check_beam_grating(beam, grating)
    _check_paraxial(ext_x, grating)
    _check_paraxial(ext_z, grating)

    ax_x = GridAxis("x", "a.u.", -ext_x, ext_x, ns_x)
    ax_z = GridAxis("z", "a.u.", -ext_z, ext_z, ns_z)
    raw = intensity_xz(ax_x.values()[:, None], ax_z.values()[None, :], beam, grating)
    values, normalized, peak = peak_normalize(raw)
    meta = {"kind": "diffraction", "peak_raw": peak}
    return SpectrumGrid(ax_x, ax_z, values, normalized, meta)
