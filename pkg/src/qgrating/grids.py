"""Shared 2D grid container for intensity maps and cross-section spectra.

One container serves the diffraction field, the elastic map and the
ionization spectra: two uniformly sampled axes plus a row-major value
matrix (axis1 = rows).  Values are stored in relative units; grids are
peak-normalized unless the whole grid vanished, in which case the
``normalized`` flag stays False and callers report it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class GridAxis:
    """Uniform sampling of the closed interval [lo, hi] with ``samples`` points."""

    label: str
    unit: str
    lo: float
    hi: float
    samples: int

    def __post_init__(self):
        if self.samples < 2:
            raise ValueError(f"axis '{self.label}' needs samples >= 2 (got {self.samples})")
        if not np.isfinite(self.lo) or not np.isfinite(self.hi) or self.hi <= self.lo:
            raise ValueError(f"axis '{self.label}' needs finite hi > lo (got [{self.lo}, {self.hi}])")

    def values(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.samples)

    @property
    def step(self) -> float:
        return (self.hi - self.lo) / (self.samples - 1)


@dataclass(frozen=True)
class SpectrumGrid:
    """2D map of nonnegative values on a pair of axes; axis1 indexes rows.

    ``meta`` carries the configuration echo that the serializer writes out
    verbatim; the physics modules fill in what they know (mode, parameters,
    normalization peak), the CLI layer completes it.
    """

    axis1: GridAxis
    axis2: GridAxis
    values: np.ndarray
    normalized: bool
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.axis1.samples, self.axis2.samples):
            raise ValueError(
                f"value matrix shape {v.shape} does not match axes "
                f"({self.axis1.samples}, {self.axis2.samples})"
            )
        if not np.all(np.isfinite(v)):
            raise ValueError("grid values must be finite")
        if np.any(v < 0.0):
            raise ValueError("grid values must be nonnegative")
        if self.normalized and (v.max() != 1.0):
            raise ValueError("normalized grid must have peak exactly 1")
        object.__setattr__(self, "values", v)


def peak_normalize(raw: np.ndarray) -> tuple[np.ndarray, bool, float]:
    """Scale ``raw`` to peak 1; an all-zero grid is returned unscaled.

    Returns (values, normalized, peak) with ``peak`` the pre-scaling maximum,
    recorded in metadata so absolute levels remain recoverable.
    """
    raw = np.asarray(raw, dtype=float)
    peak = float(raw.max()) if raw.size else 0.0
    if peak > 0.0:
        return raw / peak, True, peak
    return raw.copy(), False, 0.0
