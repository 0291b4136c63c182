"""Pair creation from a 1D well potential with oscillating width or depth.

Negative-energy free modes are propagated with a spectral split-operator
scheme; projections onto the positive-energy branch give the created-pair
number, spatial densities and pumping diagnostics.  A static-spectrum module
locates the bound-state diving points that organize the whole process.
"""

from .grid import C, C2, LAMBDA_C, CONSTANTS, PhysicalConstants, SpatialGrid, SpinorField, make_grid, inner_product
from .potential import (
    WellShape,
    StaticDrive,
    WidthOscillation,
    DepthOscillation,
    width_at,
    depth_at,
    well_profile,
    sample_potential,
    drive_period,
)
from .free_basis import FreeMode, BasisSet, free_energy, make_mode, build_basis
from .propagator import StepSchedule, kinetic_half_step, potential_step, strang_step, evolve, propagate_modes
from .observables import (
    OverlapMatrix,
    DensityProfile,
    overlap_matrix,
    pair_number,
    electron_density,
    positron_density,
    in_well_number,
    pump_rate,
)
from .spectrum import SpectrumScan, ScanFamily, build_hamiltonian, eigen_decompose, scan_spectrum, diving_points
from .experiment import ScenarioConfig, TimeSeries, run_scenario, adiabatic_sweep, boundary_monitor

__version__ = "0.1.0"
