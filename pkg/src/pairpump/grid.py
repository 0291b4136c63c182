"""Atomic-unit constants, the shared periodic grid, and two-component fields.

Everything downstream works in atomic units (m = hbar = e = 1).  The grid is
uniform and periodic; its momentum lattice is exactly the conjugate lattice of
the discrete Fourier transform used by the propagator, so spectral derivatives
and plane-wave overlaps are exact on it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

C = 137.0359991        # speed of light (inverse fine-structure constant)
C2 = C * C             # electron rest energy
LAMBDA_C = 1.0 / C     # electron Compton wavelength


@dataclass(frozen=True)
class PhysicalConstants:
    c: float = C
    lambda_C: float = LAMBDA_C

    @property
    def c2(self) -> float:
        return self.c * self.c


CONSTANTS = PhysicalConstants()


class GridMismatchError(ValueError):
    """Raised when two fields that must share a grid do not."""


class SpatialGrid:
    """Uniform periodic grid on [-L/2, L/2) with its DFT momentum lattice."""

    __slots__ = ("n_z", "box_length", "dz", "positions", "dft_indices", "momenta")

    def __init__(self, n_z: int, box_length: float):
        if n_z < 4 or n_z % 2 != 0:
            raise ValueError(f"n_z must be an even integer >= 4, got {n_z}")
        if box_length <= 0:
            raise ValueError(f"box_length must be positive, got {box_length}")
        self.n_z = int(n_z)
        self.box_length = float(box_length)
        self.dz = self.box_length / self.n_z
        self.positions = -0.5 * self.box_length + self.dz * np.arange(self.n_z)
        # signed DFT indices [0, 1, ..., n/2-1, -n/2, ..., -1]
        self.dft_indices = np.rint(np.fft.fftfreq(self.n_z) * self.n_z).astype(int)
        self.momenta = 2.0 * np.pi * self.dft_indices / self.box_length
        for arr in (self.positions, self.dft_indices, self.momenta):
            arr.setflags(write=False)

    @property
    def max_momentum(self) -> float:
        return np.pi * self.n_z / self.box_length

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SpatialGrid)
            and self.n_z == other.n_z
            and self.box_length == other.box_length
        )

    def __hash__(self) -> int:
        return hash((self.n_z, self.box_length))

    def __repr__(self) -> str:
        return f"SpatialGrid(n_z={self.n_z}, box_length={self.box_length})"


def make_grid(n_z: int, box_length: float) -> SpatialGrid:
    """Build the shared periodic grid; rejects odd/tiny n_z and L <= 0."""
    return SpatialGrid(n_z, box_length)


class SpinorField:
    """Two-component complex field sampled on a SpatialGrid.

    Treated as immutable by convention: all operations return new fields.
    """

    __slots__ = ("grid", "data")

    def __init__(self, grid: SpatialGrid, data: np.ndarray):
        data = np.asarray(data, dtype=complex)
        if data.shape != (2, grid.n_z):
            raise ValueError(f"spinor data must have shape (2, {grid.n_z}), got {data.shape}")
        self.grid = grid
        self.data = data

    @classmethod
    def zeros(cls, grid: SpatialGrid) -> "SpinorField":
        return cls(grid, np.zeros((2, grid.n_z), dtype=complex))

    @property
    def upper(self) -> np.ndarray:
        return self.data[0]

    @property
    def lower(self) -> np.ndarray:
        return self.data[1]

    def copy(self) -> "SpinorField":
        return SpinorField(self.grid, self.data.copy())

    def norm(self) -> float:
        return float(np.sqrt(self.grid.dz * np.sum(np.abs(self.data) ** 2)))

    def __repr__(self) -> str:
        return f"SpinorField(n_z={self.grid.n_z}, norm={self.norm():.6g})"


def inner_product(a: SpinorField, b: SpinorField) -> complex:
    """Discrete inner product dz * sum(conj(a) . b); conjugate-linear in a."""
    if a.grid != b.grid:
        raise GridMismatchError(f"fields live on different grids: {a.grid} vs {b.grid}")
    return complex(a.grid.dz * np.vdot(a.data, b.data))
