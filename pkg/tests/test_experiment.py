import math

import numpy as np
import pytest

from pairpump.grid import C, C2, LAMBDA_C, make_grid
from pairpump.experiment import (
    ScenarioConfig,
    adiabatic_sweep,
    boundary_monitor,
    converge_time_step,
    default_time_step,
    run_scenario,
)
from pairpump.potential import DepthOscillation, WidthOscillation, sample_potential

W_DRIVE = WidthOscillation(depth=2.53 * C2, width_max=10 * LAMBDA_C, omega=0.3 * C2)
V_DRIVE = DepthOscillation(width=10 * LAMBDA_C, depth_max=2.53 * C2, omega=0.3 * C2)


def small_config(**overrides) -> ScenarioConfig:
    base = dict(
        drive=W_DRIVE,
        n_cycles=2,
        n_z=128,
        box_length=2.5,
        n_modes=48,
        samples_per_cycle=4,
        snapshots="none",
        workers=1,
    )
    base.update(overrides)
    return ScenarioConfig(**base)


def test_null_drive_creates_nothing():
    null = WidthOscillation(depth=2.53 * C2, width_max=0.0, omega=0.3 * C2)
    series, snaps = run_scenario(small_config(drive=null, snapshots="field_free"))
    assert np.all(series.pair_number < 1e-10)
    assert all(snap.electron.total() < 1e-10 for snap in snaps)


def test_field_free_flags_mark_exact_cycle_boundaries():
    config = small_config()
    series, _ = run_scenario(config)
    expected = np.arange(len(series.times)) % config.samples_per_cycle == 0
    assert np.array_equal(series.field_free, expected)
    grid = make_grid(config.n_z, config.box_length)
    for t, flagged in zip(series.times, series.field_free):
        v_max = float(np.max(np.abs(sample_potential(config.drive, grid, t))))
        if flagged:
            assert v_max < 1e-20 * config.drive.depth
        else:
            assert v_max > 1e-6 * config.drive.depth


def test_times_strictly_increasing_and_lengths_consistent():
    series, _ = run_scenario(small_config())
    n = len(series.times)
    assert np.all(np.diff(series.times) > 0)
    for arr in (
        series.pair_number,
        series.in_well_electron,
        series.in_well_positron,
        series.pump_rate_electron,
        series.pump_rate_positron,
        series.field_free,
        series.boundary_electron,
        series.boundary_positron,
    ):
        assert len(arr) == n


def test_pair_number_grows_under_supercritical_drive():
    series, _ = run_scenario(small_config())
    assert series.pair_number[0] < 1e-12
    assert series.pair_number[-1] > 0.1


def test_snapshot_policies():
    config = small_config(snapshots="field_free")
    _, snaps = run_scenario(config)
    assert len(snaps) == config.n_cycles + 1
    _, snaps_all = run_scenario(small_config(snapshots="all"))
    assert len(snaps_all) == config.n_cycles * config.samples_per_cycle + 1
    _, snaps_none = run_scenario(small_config(snapshots="none"))
    assert snaps_none == []


def test_three_way_consistency_every_sample():
    series, snaps = run_scenario(small_config(snapshots="all"))
    for i, snap in enumerate(snaps):
        n = series.pair_number[i]
        scale = max(n, 1e-30)
        assert abs(snap.electron.total() - n) < 1e-8 * scale
        assert abs(snap.positron.total() - n) < 1e-8 * scale


def test_worker_count_independence():
    s1, _ = run_scenario(small_config(workers=1))
    s2, _ = run_scenario(small_config(workers=2))
    assert np.max(np.abs(s1.pair_number - s2.pair_number)) < 1e-10


def test_repeated_runs_bit_stable():
    s1, _ = run_scenario(small_config())
    s2, _ = run_scenario(small_config())
    assert np.array_equal(s1.pair_number, s2.pair_number)
    assert np.array_equal(s1.in_well_electron, s2.in_well_electron)


def test_depth_drive_scenario_runs():
    series, _ = run_scenario(small_config(drive=V_DRIVE))
    assert series.pair_number[-1] > 0.0
    assert np.all(np.isfinite(series.pair_number))


def test_pump_rates_nan_before_first_pairs():
    series, _ = run_scenario(small_config())
    assert math.isnan(series.pump_rate_electron[0])
    assert math.isnan(series.pump_rate_positron[0])
    assert np.all(series.pump_rate_electron[1:] >= -1e-12)


def test_unitarity_tracked_in_meta():
    series, _ = run_scenario(small_config())
    assert series.meta["final_mode_norms_max_drift"] < 1e-10


def test_default_time_step_rule():
    grid = make_grid(512, 2.5)
    dt = default_time_step(W_DRIVE, grid, 256)
    order = np.sort(np.abs(grid.momenta))
    k_max = order[255]
    e_max = math.sqrt(C2 * C2 + k_max * k_max * C2)
    assert dt == pytest.approx(0.1 / (2.53 * C2 + e_max), rel=1e-12)


def test_resolved_dt_divides_sample_interval():
    config = small_config(dt=1.3e-6)
    series, _ = run_scenario(config)
    dt = series.meta["dt"]
    assert dt <= 1.3e-6 + 1e-18
    period = config.drive.period
    per_sample = period / config.samples_per_cycle
    assert per_sample / dt == pytest.approx(round(per_sample / dt), abs=1e-9)


def test_converge_time_step_audit():
    series, _, history = converge_time_step(small_config(), rel_tol=0.05)
    assert len(history) >= 2
    assert history[-1][0] == pytest.approx(0.5 * history[-2][0], rel=1e-12)
    last, prev = history[-1][1], history[-2][1]
    assert abs(last - prev) <= 0.05 * max(abs(last), 1e-30)


def test_boundary_monitor_flags_absent_when_no_pairs():
    null = WidthOscillation(depth=2.53 * C2, width_max=0.0, omega=0.3 * C2)
    series, _ = run_scenario(small_config(drive=null))
    arrival = boundary_monitor(series)
    assert arrival.electron is None
    assert arrival.positron is None
    assert arrival.transit_estimate == pytest.approx(2.5 / (2 * C), rel=1e-12)


def test_sweep_stacked_matches_sequential():
    bounds = [0.0, 4 * LAMBDA_C, 8 * LAMBDA_C]
    common = dict(
        omega=0.12 * C2,
        depth=2.53 * C2,
        n_z=128,
        n_modes=32,
        dt=2e-6,
    )
    stacked = adiabatic_sweep("width", bounds, stacked=True, **common)
    sequential = adiabatic_sweep("width", bounds, stacked=False, **common)
    for (b1, n1), (b2, n2) in zip(stacked, sequential):
        assert b1 == b2
        assert n1 == pytest.approx(n2, abs=1e-10)
    assert stacked[0][1] < 1e-10  # zero-amplitude point creates nothing


def test_sweep_requires_fixed_parameter():
    with pytest.raises(ValueError):
        adiabatic_sweep("width", [1.0], omega=0.1 * C2)
    with pytest.raises(ValueError):
        adiabatic_sweep("depth", [1.0], omega=0.1 * C2)
    with pytest.raises(ValueError):
        adiabatic_sweep("frequency", [1.0], omega=0.1 * C2, depth=1.0)


def test_config_validation():
    with pytest.raises(ValueError):
        small_config(n_cycles=0)
    with pytest.raises(ValueError):
        small_config(snapshots="sometimes")
    with pytest.raises(ValueError):
        small_config(dt=-1e-6)
    with pytest.raises(ValueError):
        ScenarioConfig(drive=None, n_cycles=1)


def test_total_time_property():
    config = small_config(n_cycles=3)
    assert config.total_time == pytest.approx(3 * W_DRIVE.period, rel=1e-12)
