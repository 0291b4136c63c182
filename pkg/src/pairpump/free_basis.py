"""Field-free plane-wave eigenmodes of the two-component Dirac Hamiltonian.

Each grid momentum k carries a positive- and a negative-energy branch with
E = branch * sqrt(c^4 + k^2 c^2).  Modes are box-normalized to 1 under the
discrete inner product, so sums of squared overlaps are dimensionless counts.
The sign(k) convention at k = 0 is +1; the affected spinor amplitude vanishes
there, so the choice is physically immaterial.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List

import numpy as np

from .grid import C2, SpatialGrid, SpinorField

POSITIVE = +1
NEGATIVE = -1


@dataclass(frozen=True)
class FreeMode:
    """Label of one free eigenmode: lattice momentum, branch, energy."""

    momentum: float
    branch: int
    energy: float
    dft_index: int


def free_energy(momentum, branch: int):
    """Free dispersion: branch * sqrt(c^4 + k^2 c^2)."""
    if branch not in (POSITIVE, NEGATIVE):
        raise ValueError(f"branch must be +1 or -1, got {branch}")
    momentum = np.asarray(momentum, dtype=float)
    e = np.sqrt(C2 * C2 + momentum * momentum * C2)
    out = branch * e
    return float(out) if out.ndim == 0 else out


def branch_spinors(momenta: np.ndarray, branch: int) -> np.ndarray:
    """Unit 2-spinors for an array of momenta on one energy branch."""
    momenta = np.asarray(momenta, dtype=float)
    e = np.abs(free_energy(momenta, POSITIVE))
    s = np.where(momenta >= 0.0, 1.0, -1.0)
    if branch == POSITIVE:
        upper = np.sqrt(e + C2)
        lower = s * np.sqrt(e - C2)
    elif branch == NEGATIVE:
        upper = -s * np.sqrt(e - C2)
        lower = np.sqrt(e + C2)
    else:
        raise ValueError(f"branch must be +1 or -1, got {branch}")
    return np.stack([upper, lower], axis=-1) / np.sqrt(2.0 * e)[..., None]


def _lattice_index(grid: SpatialGrid, k: float) -> int:
    idx = int(np.argmin(np.abs(grid.momenta - k)))
    spacing = 2.0 * np.pi / grid.box_length
    if abs(grid.momenta[idx] - k) > 1e-9 * spacing:
        raise ValueError(f"momentum {k} is not on the grid lattice (spacing {spacing:.6g})")
    return idx


def make_mode(grid: SpatialGrid, k: float, branch: int) -> SpinorField:
    """Normalized plane-wave eigenmode at lattice momentum k."""
    idx = _lattice_index(grid, k)
    k_exact = grid.momenta[idx]
    spinor = branch_spinors(np.array([k_exact]), branch)[0]
    wave = np.exp(1j * k_exact * grid.positions) / np.sqrt(grid.box_length)
    return SpinorField(grid, spinor[:, None] * wave[None, :])


def mode_order(grid: SpatialGrid) -> np.ndarray:
    """Lattice indices sorted by ascending |k|, ties broken k > 0 first."""
    keys = [(abs(k), 0 if k >= 0 else 1) for k in grid.momenta]
    return np.array(sorted(range(grid.n_z), key=lambda i: keys[i]), dtype=int)


class BasisSet:
    """Ordered, orthonormal set of free modes on one branch, stored densely.

    ``fields`` has shape (n_modes, 2, n_z); ``field(i)`` wraps one row as a
    SpinorField.  Immutable after construction.
    """

    __slots__ = ("grid", "branch", "modes", "fields", "momenta", "energies", "spinors", "dft_indices")

    def __init__(self, grid: SpatialGrid, branch: int, lattice_indices: np.ndarray):
        self.grid = grid
        self.branch = branch
        momenta = grid.momenta[lattice_indices]
        self.momenta = momenta
        self.energies = free_energy(momenta, branch)
        self.spinors = branch_spinors(momenta, branch)
        self.dft_indices = grid.dft_indices[lattice_indices]
        waves = np.exp(1j * momenta[:, None] * grid.positions[None, :]) / np.sqrt(grid.box_length)
        self.fields = self.spinors[:, :, None] * waves[:, None, :]
        self.fields.setflags(write=False)
        self.modes: List[FreeMode] = [
            FreeMode(float(momenta[i]), branch, float(self.energies[i]), int(self.dft_indices[i]))
            for i in range(len(momenta))
        ]

    def __len__(self) -> int:
        return len(self.modes)

    def field(self, i: int) -> SpinorField:
        return SpinorField(self.grid, self.fields[i].copy())


def build_basis(grid: SpatialGrid, n_keep: int, branch: int) -> BasisSet:
    """The n_keep modes of smallest |k| on one branch, deterministic order."""
    if not 1 <= n_keep <= grid.n_z:
        raise ValueError(f"n_keep must be in [1, {grid.n_z}], got {n_keep}")
    order = mode_order(grid)
    return BasisSet(grid, branch, order[:n_keep])
