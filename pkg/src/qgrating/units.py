"""Unit conversions between laboratory units and Hartree atomic units.

Everything downstream works strictly in atomic units (hbar = m_e = e = 1);
this module is the only place laboratory units (mm, eV, keV/u) appear.
Conversion factors are pinned to CODATA-2018.
"""

import math

# CODATA-2018
BOHR_RADIUS_M = 5.29177210903e-11
HARTREE_EV = 27.211386245988
ELECTRON_MASSES_PER_U = 1822.888486209   # atomic mass unit in m_e
PROTON_MASS_AU = 1836.15267343           # m_p / m_e
ALPHA_MASS_AU = 7294.29954142            # m_alpha / m_e

# He+ ion: alpha particle plus one electron (electronic binding neglected,
# a few 1e-6 relative).
HE_PLUS_MASS_AU = ALPHA_MASS_AU + 1.0

AU_PER_MM = 1e-3 / BOHR_RADIUS_M

CONSTANTS_VERSION = "CODATA-2018"

# Type aliases for readability: plain floats, atomic units throughout.
Length = float     # Bohr radii
Energy = float     # Hartree
Momentum = float   # 1/Bohr


def mm_to_au(x_mm: float) -> Length:
    """Length in mm to Bohr radii. Physical lengths only (x >= 0)."""
    if x_mm < 0.0:
        raise ValueError(f"negative length: {x_mm} mm")
    return x_mm * AU_PER_MM


def au_to_mm(x_au: Length) -> float:
    """Length in Bohr radii to mm."""
    if x_au < 0.0:
        raise ValueError(f"negative length: {x_au} a.u.")
    return x_au / AU_PER_MM


def ev_to_au(energy_ev: float) -> Energy:
    """Energy in eV to Hartree."""
    return energy_ev / HARTREE_EV


def au_to_ev(energy_au: Energy) -> float:
    """Energy in Hartree to eV."""
    return energy_au * HARTREE_EV


def electron_momentum_from_energy(energy_au: Energy) -> Momentum:
    """Nonrelativistic electron momentum p = sqrt(2 E), E in Hartree."""
    if energy_au < 0.0:
        raise ValueError(f"negative kinetic energy: {energy_au} Hartree")
    return math.sqrt(2.0 * energy_au)


def velocity_from_kev_per_u(energy_kev_u: float) -> float:
    """Ion velocity in a.u. from kinetic energy per nucleon in keV/u.

    v = sqrt(2 E_u / m_u) with E_u the energy per nucleon and m_u the
    atomic mass unit; nonrelativistic (fine below ~1 MeV/u).
    """
    if energy_kev_u < 0.0:
        raise ValueError(f"negative beam energy: {energy_kev_u} keV/u")
    e_au = ev_to_au(energy_kev_u * 1e3)
    return math.sqrt(2.0 * e_au / ELECTRON_MASSES_PER_U)
