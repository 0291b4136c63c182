"""Overlap matrix and the physical quantities derived from it.

The central object is U[p][n] = <W_p | psi_n(t)>: the projection of each
evolved (initially negative-energy) state onto the retained positive-energy
free modes.  The created-pair number is sum |U|^2; electron and positron
spatial densities follow by resumming the projections against the free-mode
fields, and both integrate to the same pair number by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from .grid import GridMismatchError, LAMBDA_C, SpatialGrid
from .free_basis import BasisSet

UNIT_TOL = 1e-9


@dataclass(frozen=True)
class OverlapMatrix:
    """Positive-mode x evolved-negative-mode overlaps at one instant."""

    values: np.ndarray
    t: float

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex)
        object.__setattr__(self, "values", values)
        mags = np.abs(values)
        if mags.size and mags.max() > 1.0 + UNIT_TOL:
            raise ValueError(f"|U| exceeds 1: max {mags.max():.12g}")
        col = np.sum(mags**2, axis=0)
        if col.size and col.max() > 1.0 + UNIT_TOL:
            raise ValueError(f"column norm exceeds 1: max {col.max():.12g}")

    @property
    def n_positive(self) -> int:
        return self.values.shape[0]

    @property
    def n_evolved(self) -> int:
        return self.values.shape[1]


def _as_state_array(evolved, grid: SpatialGrid) -> np.ndarray:
    if isinstance(evolved, np.ndarray):
        if evolved.ndim != 3 or evolved.shape[1] != 2 or evolved.shape[2] != grid.n_z:
            raise ValueError(f"state array must have shape (n, 2, {grid.n_z}), got {evolved.shape}")
        return evolved
    states = []
    for f in evolved:
        if f.grid != grid:
            raise GridMismatchError("evolved field grid differs from basis grid")
        states.append(f.data)
    return np.stack(states)


def overlap_matrix(evolved, positive_basis: BasisSet, t: float = 0.0) -> OverlapMatrix:
    """Project evolved states onto the positive basis: U[p][n] = <W_p|psi_n>."""
    grid = positive_basis.grid
    states = _as_state_array(evolved, grid)
    p_flat = positive_basis.fields.reshape(len(positive_basis), -1).conj()
    u = grid.dz * (p_flat @ states.reshape(states.shape[0], -1).T)
    return OverlapMatrix(u, t)


def pair_number(overlaps: Union[OverlapMatrix, np.ndarray]) -> float:
    """Created-pair count: sum of squared overlap magnitudes."""
    values = overlaps.values if isinstance(overlaps, OverlapMatrix) else np.asarray(overlaps)
    return float(np.sum(np.abs(values) ** 2))


@dataclass(frozen=True)
class DensityProfile:
    """Particles per unit length on the grid for one species at one instant."""

    grid: SpatialGrid
    values: np.ndarray
    species: str
    t: float

    def total(self) -> float:
        return float(self.grid.dz * np.sum(self.values))


def _density_values(u: np.ndarray, fields: np.ndarray, contract_positive: bool) -> np.ndarray:
    if contract_positive:
        # electron: sum_n |sum_p U_pn W_p(z)|^2
        mixed = np.einsum("pn,pcz->ncz", u, fields)
    else:
        # positron: sum_p |sum_n U_pn W_n(z)|^2
        mixed = np.einsum("pn,ncz->pcz", u, fields)
    return np.sum(np.abs(mixed) ** 2, axis=(0, 1)).real


def electron_density(overlaps: OverlapMatrix, positive_basis: BasisSet) -> DensityProfile:
    """Electron density; integrates to pair_number."""
    if overlaps.n_positive != len(positive_basis):
        raise ValueError("overlap rows do not match the positive basis size")
    values = _density_values(overlaps.values, positive_basis.fields, contract_positive=True)
    return DensityProfile(positive_basis.grid, values, "electron", overlaps.t)


def positron_density(overlaps: OverlapMatrix, negative_basis: BasisSet) -> DensityProfile:
    """Positron density; integrates to the same total as the electron density."""
    if overlaps.n_evolved != len(negative_basis):
        raise ValueError("overlap columns do not match the negative basis size")
    values = _density_values(overlaps.values, negative_basis.fields, contract_positive=False)
    return DensityProfile(negative_basis.grid, values, "positron", overlaps.t)


def window_density(overlaps: OverlapMatrix, basis: BasisSet, z_indices: np.ndarray, species: str) -> np.ndarray:
    """Density restricted to selected grid points (cheap per-sample probe)."""
    fields = basis.fields[:, :, z_indices]
    return _density_values(overlaps.values, fields, contract_positive=(species == "electron"))


def window_indices(grid: SpatialGrid, half_width: float) -> Tuple[np.ndarray, Tuple[float, float]]:
    """Grid indices with |z| <= half_width and the snapped window bounds."""
    if half_width > 0.5 * grid.box_length:
        raise ValueError(f"half_width {half_width} exceeds half the box {0.5 * grid.box_length}")
    mask = np.abs(grid.positions) <= half_width + 1e-12
    idx = np.nonzero(mask)[0]
    if idx.size == 0:
        return idx, (math.nan, math.nan)
    z = grid.positions[idx]
    return idx, (float(z[0]), float(z[-1]))


def in_well_number(profile: DensityProfile, half_width: float = 5 * LAMBDA_C) -> float:
    """Particles inside |z| <= half_width (window snapped to grid points)."""
    idx, _ = window_indices(profile.grid, half_width)
    return float(profile.grid.dz * np.sum(profile.values[idx]))


def pump_rate(total: float, in_well: float, floor: float = 1e-12) -> Optional[float]:
    """Fraction of particles already pumped out of the well.

    Returns None ("no pairs yet") when the total is at or below the noise
    floor, where the ratio would be meaningless.
    """
    if in_well < -UNIT_TOL or in_well > total + UNIT_TOL:
        raise ValueError(f"need 0 <= in_well <= total, got in_well={in_well}, total={total}")
    if total <= floor:
        return None
    return max(0.0, (total - in_well) / total)


def escape_tail_coefficient(times: Sequence[float], rates: Sequence[float]) -> float:
    """Least-squares beta in the long-time law rate(t) ~ 1 - beta/t.

    Diagnostic only; fitted over whatever samples the caller passes (NaNs and
    t = 0 are ignored).
    """
    t = np.asarray(times, dtype=float)
    a = np.asarray(rates, dtype=float)
    keep = (t > 0) & np.isfinite(a)
    if keep.sum() == 0:
        return math.nan
    # beta minimizing sum ((1 - a) - beta/t)^2
    x = 1.0 / t[keep]
    y = 1.0 - a[keep]
    return float(np.dot(x, y) / np.dot(x, x))
