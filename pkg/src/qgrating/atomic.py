"""Atomic transition form factors entering the collision amplitudes.

Two models live here:

* elastic scattering from a neutral screened atom — three-term Yukawa fit
  of the Thomas-Fermi potential (Moliere's parametrization), giving the
  form factor F(q) and the first-Born amplitude Z_p (Z_N - F(q))/q²;
* single ionization of an effective one-electron (hydrogenic) target —
  the closed-form 1s -> Coulomb-continuum matrix element.

Continuum normalization convention (project-wide, fixed here once):
the final state is the incoming-wave Coulomb function

    psi_k^-(r) = (2 pi)^{-3/2} e^{pi nu/2} Gamma(1 + i nu)
                 e^{i k.r} 1F1(-i nu; 1; -i(kr + k.r)),      nu = z_eff/k,

normalized to <psi_k|psi_k'> = delta^3(k - k').  The bound state is
phi_1s(r) = (z_eff^{3/2}/sqrt(pi)) e^{-z_eff r}.  Under this convention
the squared matrix element obeys the hydrogenic scaling law
|M(z)|² = z^{-3} |M(1)|² at momenta scaled by z.

The closed form below is Nordsieck's evaluation of the bound-free
integral [Phys. Rev. 93, 785 (1954)]:

    u = |q - k|² + z²,   w = q² - k² + z² - 2 i z k,
    M = (2 pi)^{-3/2} e^{pi nu/2} Gamma(1 - i nu) (z^{3/2}/sqrt(pi))
        · (4 pi/u) (w/u)^{-i nu} · [ 2 z (1 - i nu)/u + 2 i nu (z - i k)/w ].

For q, k > 0 both u >= z² and |w| >= 2 z k are bounded away from zero, so
the kinematic coalescence |q_vec - k_vec| -> 0 is a finite limit, not a
singularity; the (w/u)^{-i nu} factor stays on the principal log branch
because Im(w) < 0.  Exp/Gamma factors are combined in log space so large
nu (slow electrons) cannot overflow.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import loggamma

from .units import Energy, Momentum

# ---------------------------------------------------------------------------
# elastic: screened-atom form factor
# ---------------------------------------------------------------------------

# Moliere's three-term fit of the Thomas-Fermi screening function
# [Z. Naturforsch. 2a, 133 (1947)]: weights and exponents in units of the
# Thomas-Fermi length a_TF = 0.88534 Z^{-1/3} a_0.
MOLIERE_WEIGHTS = (0.35, 0.55, 0.10)
MOLIERE_EXPONENTS = (0.3, 1.2, 6.0)
THOMAS_FERMI_PREFACTOR = 0.88534


@dataclass(frozen=True)
class ScreenedAtom:
    """Neutral atom with charge density modeled by a Yukawa-term sum.

    yukawa_weights is a tuple of (A_i, alpha_i) pairs with sum(A_i) = 1,
    which pins F(0) = z_nucleus (a neutral atom scatters nothing at q = 0
    beyond the nuclear term cancellation).
    """

    z_nucleus: int
    yukawa_weights: tuple[tuple[float, float], ...]

    def __post_init__(self):
        if self.z_nucleus < 1:
            raise ValueError(f"z_nucleus must be >= 1 (got {self.z_nucleus})")
        if not self.yukawa_weights:
            raise ValueError("need at least one Yukawa term")
        total = sum(a for a, _ in self.yukawa_weights)
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"Yukawa weights must sum to 1 (got {total!r})")
        if any(alpha <= 0.0 for _, alpha in self.yukawa_weights):
            raise ValueError("Yukawa screening exponents must be positive")


def moliere_atom(z_nucleus: int) -> ScreenedAtom:
    """Moliere Thomas-Fermi screening for a neutral atom of charge Z."""
    a_tf = THOMAS_FERMI_PREFACTOR * float(z_nucleus) ** (-1.0 / 3.0)
    terms = tuple(
        (w, e / a_tf) for w, e in zip(MOLIERE_WEIGHTS, MOLIERE_EXPONENTS)
    )
    return ScreenedAtom(z_nucleus, terms)


def xenon_moliere() -> ScreenedAtom:
    """The Xe target of the elastic map (Z = 54)."""
    return moliere_atom(54)


def elastic_form_factor(atom: ScreenedAtom, q):
    """F(q) = Z Σ A_i α_i²/(α_i² + q²); vectorized over q >= 0."""
    q = np.asarray(q, dtype=float)
    if np.any(q < 0.0):
        raise ValueError("momentum transfer magnitude must be >= 0")
    q2 = q * q
    acc = 0.0
    for a_i, alpha_i in atom.yukawa_weights:
        acc = acc + a_i * alpha_i * alpha_i / (alpha_i * alpha_i + q2)
    out = atom.z_nucleus * acc
    return out if np.ndim(out) else float(out)


def elastic_amplitude(atom: ScreenedAtom, z_p: int, q):
    """First-Born amplitude Z_p (Z_N - F(q))/q² in relative units.

    Positive for all q > 0 (partial screening never overshoots the nuclear
    term) up to the projectile-charge sign; q = 0 is genuinely singular.
    """
    q = np.asarray(q, dtype=float)
    if np.any(q <= 0.0):
        raise ValueError("elastic amplitude requires q > 0")
    out = z_p * (atom.z_nucleus - elastic_form_factor(atom, q)) / (q * q)
    return out if np.ndim(out) else float(out)


# ---------------------------------------------------------------------------
# ionization: hydrogenic bound -> Coulomb continuum
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HydrogenicTarget:
    """One-active-electron target: 1s state of effective charge z_eff."""

    z_eff: float
    eps_bind: Energy

    def __post_init__(self):
        if self.z_eff <= 0.0:
            raise ValueError(f"z_eff must be positive (got {self.z_eff})")
        expected = -0.5 * self.z_eff * self.z_eff
        if abs(self.eps_bind - expected) > 1e-12 * abs(expected):
            raise ValueError(
                f"eps_bind must equal -z_eff²/2 = {expected!r} (got {self.eps_bind!r})"
            )

    @classmethod
    def from_binding_energy(cls, eps_bind: Energy) -> "HydrogenicTarget":
        if eps_bind >= 0.0:
            raise ValueError(f"binding energy must be negative (got {eps_bind})")
        return cls(np.sqrt(-2.0 * eps_bind), eps_bind)


@dataclass(frozen=True)
class ContinuumElectron:
    """Emitted electron of momentum k_vec (a.u.), delta^3(k-k') normalized."""

    k_vec: tuple[float, float, float]

    def __post_init__(self):
        if len(self.k_vec) != 3:
            raise ValueError("k_vec must have three components")
        if self.k == 0.0:
            raise ValueError("emitted-electron momentum must be nonzero")

    @property
    def k(self) -> Momentum:
        return float(np.linalg.norm(self.k_vec))


def bound_free_matrix_element(z_eff, k_mag, q_mag, k_dot_q):
    """Vectorized closed form M(q, k); see the module docstring.

    Arguments broadcast: magnitudes k = |k_vec|, q = |q_vec| and the inner
    product k_vec·q_vec (all strictly k > 0, q > 0).
    """
    k = np.asarray(k_mag, dtype=float)
    q = np.asarray(q_mag, dtype=float)
    kq = np.asarray(k_dot_q, dtype=float)
    if np.any(k <= 0.0) or np.any(q <= 0.0):
        raise ValueError("bound-free matrix element requires k > 0 and q > 0")
    z = float(z_eff)
    nu = z / k
    u = q * q - 2.0 * kq + k * k + z * z
    w = q * q - k * k + z * z - 2j * z * k
    pref = (2.0 * np.pi) ** (-1.5) * np.exp(np.pi * nu / 2.0 + loggamma(1.0 - 1j * nu))
    pref = pref * (z ** 1.5 / np.sqrt(np.pi))
    ratio = 4.0 * np.pi / u * np.exp(-1j * nu * np.log(w / u))
    bracket = 2.0 * z * (1.0 - 1j * nu) / u + 2j * nu * (z - 1j * k) / w
    out = pref * ratio * bracket
    return out if np.ndim(out) else complex(out)


def ionization_form_factor(
    target: HydrogenicTarget, electron: ContinuumElectron, q_vec
) -> complex:
    """<psi_k^- | e^{i q.r} | phi_1s> for one (k_vec, q_vec) pair."""
    q_vec = np.asarray(q_vec, dtype=float)
    if q_vec.shape != (3,):
        raise ValueError("q_vec must have three components")
    q = float(np.linalg.norm(q_vec))
    if q == 0.0:
        raise ValueError("ionization form factor requires |q_vec| > 0")
    k_arr = np.asarray(electron.k_vec, dtype=float)
    return bound_free_matrix_element(
        target.z_eff, electron.k, q, float(k_arr @ q_vec)
    )
