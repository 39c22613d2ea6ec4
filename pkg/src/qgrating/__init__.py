"""Collision observables for an atom structured by a macroscopic grating.

The package computes, in Hartree atomic units throughout:

* the far-field intensity of the diffracted atomic center-of-mass wave,
* elastic electron-atom interference maps carrying the grating period,
* reduced ion-impact ionization spectra with concentric interference
  rings, plus the analytic ring-bound table behind them.

Grids are written as portable CSV + JSON-sidecar pairs (see `gridfile`);
`qgrating --help` lists the command-line modes.
"""

__version__ = "0.1.0"

from .atomic import (
    ContinuumElectron,
    HydrogenicTarget,
    ScreenedAtom,
    bound_free_matrix_element,
    elastic_amplitude,
    elastic_form_factor,
    ionization_form_factor,
    moliere_atom,
    xenon_moliere,
)
from .diffraction import TransversePoint, field_grid, intensity_at, principal_maximum_spacing
from .grating import (
    AtomBeam,
    GratingSpec,
    grating_factor,
    momentum_uncertainty,
    slit_envelope,
    spot_size_z,
    window,
    window_half_width,
)
from .grids import GridAxis, SpectrumGrid
from .kinematics import (
    EmissionPoint,
    Projectile,
    RecoilSetting,
    RingBounds,
    confluence_velocity,
    elastic_q,
    q_min,
    ring_bounds,
    visible_rings,
    window_argument_b_n,
)
from .spectra import (
    ElasticJob,
    IonizationJob,
    elastic_grid,
    elastic_point,
    ionization_grid,
    ionization_point,
)

__all__ = [
    "AtomBeam",
    "ContinuumElectron",
    "ElasticJob",
    "EmissionPoint",
    "GratingSpec",
    "GridAxis",
    "HydrogenicTarget",
    "IonizationJob",
    "Projectile",
    "RecoilSetting",
    "RingBounds",
    "ScreenedAtom",
    "SpectrumGrid",
    "TransversePoint",
    "bound_free_matrix_element",
    "confluence_velocity",
    "elastic_amplitude",
    "elastic_form_factor",
    "elastic_grid",
    "elastic_point",
    "elastic_q",
    "field_grid",
    "grating_factor",
    "intensity_at",
    "ionization_form_factor",
    "ionization_grid",
    "ionization_point",
    "momentum_uncertainty",
    "moliere_atom",
    "principal_maximum_spacing",
    "q_min",
    "ring_bounds",
    "slit_envelope",
    "spot_size_z",
    "visible_rings",
    "window",
    "window_argument_b_n",
    "window_half_width",
    "xenon_moliere",
    "__version__",
]
