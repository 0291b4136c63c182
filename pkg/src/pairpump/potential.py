"""Smooth-edged well potential and its two periodic drive laws.

The well is a pair of opposed tanh walls of edge width D:

    V(z) = (depth/2) * [tanh((z - W/2)/D) - tanh((z + W/2)/D)]

which is -depth at the center, zero far outside, and never positive.  The two
drive modes modulate either the width or the depth sinusoidally between a
lower and an upper bound, starting and ending each cycle at the lower bound
with zero slope.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .grid import LAMBDA_C, SpatialGrid

DEFAULT_EDGE_WIDTH = 0.3 * LAMBDA_C


@dataclass(frozen=True)
class WellShape:
    """Static well parameters; depth is a positive magnitude."""

    depth: float
    width: float
    edge_width: float = DEFAULT_EDGE_WIDTH

    def __post_init__(self):
        if self.depth < 0:
            raise ValueError(f"depth must be >= 0, got {self.depth}")
        if self.width < 0:
            raise ValueError(f"width must be >= 0, got {self.width}")
        if self.edge_width <= 0:
            raise ValueError(f"edge_width must be > 0, got {self.edge_width}")


@dataclass(frozen=True)
class StaticDrive:
    shape: WellShape


@dataclass(frozen=True)
class WidthOscillation:
    """Width swings between width_min and width_max at fixed depth."""

    depth: float
    width_max: float
    omega: float
    width_min: float = 0.0
    edge_width: float = DEFAULT_EDGE_WIDTH

    def __post_init__(self):
        if self.omega <= 0:
            raise ValueError(f"omega must be > 0, got {self.omega}")
        if not 0 <= self.width_min <= self.width_max:
            raise ValueError(f"need 0 <= width_min <= width_max, got {self.width_min}, {self.width_max}")
        if self.depth < 0:
            raise ValueError(f"depth must be >= 0, got {self.depth}")

    @property
    def period(self) -> float:
        return 2.0 * math.pi / self.omega


@dataclass(frozen=True)
class DepthOscillation:
    """Depth swings between depth_min and depth_max at fixed width."""

    width: float
    depth_max: float
    omega: float
    depth_min: float = 0.0
    edge_width: float = DEFAULT_EDGE_WIDTH

    def __post_init__(self):
        if self.omega <= 0:
            raise ValueError(f"omega must be > 0, got {self.omega}")
        if not 0 <= self.depth_min <= self.depth_max:
            raise ValueError(f"need 0 <= depth_min <= depth_max, got {self.depth_min}, {self.depth_max}")
        if self.width < 0:
            raise ValueError(f"width must be >= 0, got {self.width}")

    @property
    def period(self) -> float:
        return 2.0 * math.pi / self.omega


DriveMode = Union[StaticDrive, WidthOscillation, DepthOscillation]


def _swing(lo: float, hi: float, omega: float, t: float) -> float:
    # starts at lo with zero slope, reaches hi half a period later
    return lo + 0.5 * (hi - lo) * (1.0 + math.sin(omega * t - 0.5 * math.pi))


def width_at(drive: WidthOscillation, t: float) -> float:
    """Instantaneous well width of a width-oscillating drive."""
    return _swing(drive.width_min, drive.width_max, drive.omega, t)


def depth_at(drive: DepthOscillation, t: float) -> float:
    """Instantaneous well depth of a depth-oscillating drive."""
    return _swing(drive.depth_min, drive.depth_max, drive.omega, t)


def shape_at(drive: DriveMode, t: float) -> WellShape:
    """Well shape at time t for any drive mode."""
    if isinstance(drive, StaticDrive):
        return drive.shape
    if isinstance(drive, WidthOscillation):
        return WellShape(drive.depth, width_at(drive, t), drive.edge_width)
    if isinstance(drive, DepthOscillation):
        return WellShape(depth_at(drive, t), drive.width, drive.edge_width)
    raise TypeError(f"not a drive mode: {drive!r}")


def peak_shape(drive: DriveMode) -> WellShape:
    """The deepest/widest shape reached over a drive cycle."""
    if isinstance(drive, StaticDrive):
        return drive.shape
    if isinstance(drive, WidthOscillation):
        return WellShape(drive.depth, drive.width_max, drive.edge_width)
    if isinstance(drive, DepthOscillation):
        return WellShape(drive.depth_max, drive.width, drive.edge_width)
    raise TypeError(f"not a drive mode: {drive!r}")


def drive_period(drive: DriveMode) -> float:
    """Drive period; infinite for a static well."""
    if isinstance(drive, StaticDrive):
        return math.inf
    return drive.period


def well_profile(shape: WellShape, z) -> np.ndarray:
    """Evaluate the well at position(s) z; result is <= 0 everywhere."""
    z = np.asarray(z, dtype=float)
    half = 0.5 * shape.width
    d = shape.edge_width
    return 0.5 * shape.depth * (np.tanh((z - half) / d) - np.tanh((z + half) / d))


def sample_potential(drive: DriveMode, grid: SpatialGrid, t: float) -> np.ndarray:
    """Potential values on the grid at time t; static drives ignore t."""
    return well_profile(shape_at(drive, t), grid.positions)
