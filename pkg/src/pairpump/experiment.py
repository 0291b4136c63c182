"""Scenario orchestration: evolve the retained sea, sample, sweep.

A scenario drives every retained negative-energy mode through an integer
number of drive cycles.  The batch of modes advances segment by segment; at
each sample boundary the overlap matrix is assembled and the cheap
diagnostics (pair number, in-well counts, pump rates, boundary densities)
are recorded.  Full spatial density profiles are captured only at the
configured snapshot instants, since they dominate the observable cost.

Times are always an integer number of steps; field-free flags are set exactly
at whole-cycle sample indices, where the drive amplitude vanishes to machine
precision by construction of the drive law.
"""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .grid import C, C2, LAMBDA_C, SpatialGrid, make_grid
from .free_basis import NEGATIVE, POSITIVE, build_basis
from .observables import (
    DensityProfile,
    OverlapMatrix,
    electron_density,
    overlap_matrix,
    pair_number,
    positron_density,
    pump_rate,
    window_density,
    window_indices,
)
from .potential import DepthOscillation, WidthOscillation, drive_period, peak_shape
from .propagator import propagate_modes

log = logging.getLogger(__name__)

OscillatingDrive = Union[WidthOscillation, DepthOscillation]


class ScenarioError(RuntimeError):
    """Raised when a scenario run fails; carries offending mode indices."""


@dataclass(frozen=True)
class ScenarioConfig:
    """Full description of one driven-well run."""

    drive: OscillatingDrive
    n_cycles: int
    n_z: int = 2048
    box_length: float = 2.5
    n_modes: int = 1024          # retained momenta per branch
    dt: Optional[float] = None   # requested; rounded down to divide the sample interval
    samples_per_cycle: int = 8
    snapshots: str = "field_free"   # 'field_free' | 'all' | 'none'
    half_width: float = 5 * LAMBDA_C
    boundary_fraction: float = 0.02
    boundary_threshold: float = 0.05
    workers: int = 1

    def __post_init__(self):
        if not isinstance(self.drive, (WidthOscillation, DepthOscillation)):
            raise ValueError("run scenarios need an oscillating drive")
        if self.n_cycles < 1:
            raise ValueError(f"n_cycles must be >= 1, got {self.n_cycles}")
        if self.samples_per_cycle < 1:
            raise ValueError(f"samples_per_cycle must be >= 1, got {self.samples_per_cycle}")
        if self.snapshots not in ("field_free", "all", "none"):
            raise ValueError(f"unknown snapshot policy {self.snapshots!r}")
        if self.dt is not None and self.dt <= 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if not 0 < self.boundary_fraction < 0.5:
            raise ValueError(f"boundary_fraction must be in (0, 0.5), got {self.boundary_fraction}")

    @property
    def total_time(self) -> float:
        return self.n_cycles * drive_period(self.drive)


@dataclass
class TimeSeries:
    """Sampled observables of one scenario run."""

    times: np.ndarray
    pair_number: np.ndarray
    in_well_electron: np.ndarray
    in_well_positron: np.ndarray
    pump_rate_electron: np.ndarray      # NaN where no pairs exist yet
    pump_rate_positron: np.ndarray
    field_free: np.ndarray
    boundary_electron: np.ndarray       # peak density in the outer windows
    boundary_positron: np.ndarray
    meta: Dict = field(default_factory=dict)

    def field_free_samples(self) -> np.ndarray:
        return np.nonzero(self.field_free)[0]


@dataclass(frozen=True)
class DensitySnapshot:
    t: float
    electron: DensityProfile
    positron: DensityProfile


@dataclass(frozen=True)
class BoundaryArrival:
    """First threshold crossings at the box edge, with the ballistic estimate."""

    electron: Optional[float]
    positron: Optional[float]
    transit_estimate: float
    threshold: float


def default_time_step(drive: OscillatingDrive, grid: SpatialGrid, n_modes: int) -> float:
    """Accuracy-driven step: (peak depth + retained bandwidth) * dt <= 0.1."""
    order = np.sort(np.abs(grid.momenta))
    k_max = order[min(n_modes, grid.n_z) - 1]
    e_max = math.sqrt(C2 * C2 + k_max * k_max * C2)
    return 0.1 / (peak_shape(drive).depth + e_max)


def _resolve_steps(period: float, dt_request: float, samples_per_cycle: int) -> Tuple[float, int]:
    """Largest dt <= request such that samples land on step boundaries."""
    steps_per_sample = max(1, math.ceil(period / (samples_per_cycle * dt_request) - 1e-12))
    dt = period / (samples_per_cycle * steps_per_sample)
    return dt, steps_per_sample


def run_scenario(config: ScenarioConfig) -> Tuple[TimeSeries, List[DensitySnapshot]]:
    """Evolve all retained negative modes and record observables on schedule."""
    t_start = time.perf_counter()
    grid = make_grid(config.n_z, config.box_length)
    drive = config.drive
    period = drive_period(drive)
    transit = grid.box_length / (2.0 * C)
    if config.total_time > transit:
        log.warning(
            "total time %.3e exceeds the boundary transit estimate L/(2c) = %.3e; "
            "late samples include wrap-around effects",
            config.total_time,
            transit,
        )
    dt_request = config.dt if config.dt is not None else default_time_step(drive, grid, config.n_modes)
    dt, steps_per_sample = _resolve_steps(period, dt_request, config.samples_per_cycle)
    steps_per_cycle = steps_per_sample * config.samples_per_cycle

    negative = build_basis(grid, config.n_modes, NEGATIVE)
    positive = build_basis(grid, config.n_modes, POSITIVE)
    states = negative.fields.copy()

    in_idx, in_bounds = window_indices(grid, config.half_width)
    outer = np.abs(grid.positions) >= (0.5 - config.boundary_fraction) * grid.box_length
    out_idx = np.nonzero(outer)[0]

    n_samples = config.n_cycles * config.samples_per_cycle
    times = np.empty(n_samples + 1)
    pairs = np.empty(n_samples + 1)
    in_el = np.empty(n_samples + 1)
    in_po = np.empty(n_samples + 1)
    bnd_el = np.empty(n_samples + 1)
    bnd_po = np.empty(n_samples + 1)
    flags = np.zeros(n_samples + 1, dtype=bool)
    snapshots: List[DensitySnapshot] = []

    def record(sample: int, t: float) -> None:
        u = overlap_matrix(states, positive, t)
        times[sample] = t
        pairs[sample] = pair_number(u)
        in_el[sample] = grid.dz * float(np.sum(window_density(u, positive, in_idx, "electron")))
        in_po[sample] = grid.dz * float(np.sum(window_density(u, negative, in_idx, "positron")))
        bnd_el[sample] = float(np.max(window_density(u, positive, out_idx, "electron"), initial=0.0))
        bnd_po[sample] = float(np.max(window_density(u, negative, out_idx, "positron"), initial=0.0))
        flags[sample] = sample % config.samples_per_cycle == 0
        want_snapshot = config.snapshots == "all" or (config.snapshots == "field_free" and flags[sample])
        if want_snapshot:
            snapshots.append(DensitySnapshot(t, electron_density(u, positive), positron_density(u, negative)))

    record(0, 0.0)
    for sample in range(1, n_samples + 1):
        start_step = (sample - 1) * steps_per_sample
        states = propagate_modes(states, grid, drive, start_step, steps_per_sample, dt, config.workers)
        norms = grid.dz * np.sum(np.abs(states) ** 2, axis=(1, 2))
        if not np.all(np.isfinite(norms)):
            bad = np.nonzero(~np.isfinite(norms))[0].tolist()
            raise ScenarioError(f"propagation produced non-finite states for mode indices {bad}")
        record(sample, sample * steps_per_sample * dt)

    with np.errstate(invalid="ignore"):
        alpha_el = np.array([x if (x := pump_rate(n, w)) is not None else math.nan
                             for n, w in zip(pairs, in_el)])
        alpha_po = np.array([x if (x := pump_rate(n, w)) is not None else math.nan
                             for n, w in zip(pairs, in_po)])

    series = TimeSeries(
        times=times,
        pair_number=pairs,
        in_well_electron=in_el,
        in_well_positron=in_po,
        pump_rate_electron=alpha_el,
        pump_rate_positron=alpha_po,
        field_free=flags,
        boundary_electron=bnd_el,
        boundary_positron=bnd_po,
        meta={
            "dt": dt,
            "steps_per_sample": steps_per_sample,
            "steps_per_cycle": steps_per_cycle,
            "samples_per_cycle": config.samples_per_cycle,
            "n_cycles": config.n_cycles,
            "n_z": config.n_z,
            "box_length": config.box_length,
            "n_modes": config.n_modes,
            "half_width": config.half_width,
            "in_well_bounds": in_bounds,
            "boundary_fraction": config.boundary_fraction,
            "boundary_threshold": config.boundary_threshold,
            "boundary_window_start": float(grid.positions[out_idx[0]]) if out_idx.size else math.nan,
            "transit_estimate": transit,
            "drive": repr(drive),
            "workers": config.workers,
            "final_mode_norms_max_drift": float(np.max(np.abs(
                grid.dz * np.sum(np.abs(states) ** 2, axis=(1, 2)) - 1.0))),
            "wall_seconds": time.perf_counter() - t_start,
        },
    )
    return series, snapshots


def converge_time_step(
    config: ScenarioConfig,
    rel_tol: float = 0.02,
    max_halvings: int = 4,
) -> Tuple[TimeSeries, List[DensitySnapshot], List[Tuple[float, float]]]:
    """Halve dt until the final pair number changes by less than rel_tol.

    Returns the finest run plus the (dt, final N) audit trail.
    """
    grid = make_grid(config.n_z, config.box_length)
    dt = config.dt if config.dt is not None else default_time_step(config.drive, grid, config.n_modes)
    history: List[Tuple[float, float]] = []
    series, snaps = run_scenario(_with_dt(config, dt))
    history.append((series.meta["dt"], float(series.pair_number[-1])))
    for _ in range(max_halvings):
        dt = 0.5 * history[-1][0]
        series_f, snaps_f = run_scenario(_with_dt(config, dt))
        history.append((series_f.meta["dt"], float(series_f.pair_number[-1])))
        prev, cur = history[-2][1], history[-1][1]
        series, snaps = series_f, snaps_f
        if abs(cur - prev) <= rel_tol * max(abs(cur), 1e-30):
            return series, snaps, history
    raise ScenarioError(f"time step did not converge after {max_halvings} halvings: {history}")


def _with_dt(config: ScenarioConfig, dt: float) -> ScenarioConfig:
    from dataclasses import replace

    return replace(config, dt=dt)


def adiabatic_sweep(
    mode: str,
    upper_bounds: Sequence[float],
    omega: float,
    *,
    depth: Optional[float] = None,
    width: Optional[float] = None,
    n_z: int = 2048,
    box_length: float = 2.5,
    n_modes: int = 1024,
    dt: Optional[float] = None,
    workers: int = 1,
    stacked: bool = True,
) -> List[Tuple[float, float]]:
    """Final pair number after exactly one drive cycle, per upper bound.

    ``mode`` is 'width' (requires the fixed ``depth``) or 'depth' (requires
    the fixed ``width``).  With ``stacked=True`` all sweep points advance in
    one vectorized batch; the sequential path gives identical results.
    """
    if mode == "width":
        if depth is None:
            raise ValueError("width sweeps need the fixed well depth")
        drives = [WidthOscillation(depth=depth, width_max=b, omega=omega) for b in upper_bounds]
    elif mode == "depth":
        if width is None:
            raise ValueError("depth sweeps need the fixed well width")
        drives = [DepthOscillation(width=width, depth_max=b, omega=omega) for b in upper_bounds]
    else:
        raise ValueError(f"mode must be 'width' or 'depth', got {mode!r}")

    grid = make_grid(n_z, box_length)
    period = 2.0 * math.pi / omega
    dt_request = dt if dt is not None else min(default_time_step(d, grid, n_modes) for d in drives)
    step, steps_per_sample = _resolve_steps(period, dt_request, 1)

    negative = build_basis(grid, n_modes, NEGATIVE)
    positive = build_basis(grid, n_modes, POSITIVE)

    results: List[Tuple[float, float]] = []
    if stacked:
        states = np.broadcast_to(negative.fields, (len(drives),) + negative.fields.shape).copy()
        states = propagate_modes(states, grid, list(drives), 0, steps_per_sample, step, workers)
        for g, bound in enumerate(upper_bounds):
            u = overlap_matrix(states[g], positive, period)
            results.append((float(bound), pair_number(u)))
    else:
        for drv, bound in zip(drives, upper_bounds):
            states = propagate_modes(negative.fields.copy(), grid, drv, 0, steps_per_sample, step, workers)
            u = overlap_matrix(states, positive, period)
            results.append((float(bound), pair_number(u)))
    return results


def boundary_monitor(series: TimeSeries, threshold: Optional[float] = None) -> BoundaryArrival:
    """First time each species' edge-window density exceeds the threshold."""
    thr = threshold if threshold is not None else series.meta.get("boundary_threshold", 0.05)
    transit = series.meta.get("transit_estimate", math.nan)

    def first_crossing(values: np.ndarray) -> Optional[float]:
        hits = np.nonzero(values > thr)[0]
        return float(series.times[hits[0]]) if hits.size else None

    return BoundaryArrival(
        electron=first_crossing(series.boundary_electron),
        positron=first_crossing(series.boundary_positron),
        transit_estimate=transit,
        threshold=thr,
    )
