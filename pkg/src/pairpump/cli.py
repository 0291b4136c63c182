"""Command-line surface: spectrum scans, scenario runs, sweeps, densities.

Exit codes: 0 success, 2 configuration error, 3 I/O error, 4 numerical
failure.  On failure one JSON line {"category": ..., "message": ...} goes to
stderr so wrappers can dispatch on the error class.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .grid import C2, LAMBDA_C
from .config import ConfigError, parse_config, parse_scan_config, parse_sweep_config, emit_config
from .experiment import ScenarioError, adiabatic_sweep, boundary_monitor, run_scenario
from .io import (
    RunManifest,
    write_density,
    write_diving_points,
    write_manifest,
    write_spectrum_scan,
    write_sweep,
    write_timeseries,
)
from .spectrum import BranchTrackingError, ScanFamily, diving_points, scan_spectrum
from .grid import make_grid

EXIT_CONFIG, EXIT_IO, EXIT_NUMERICAL = 2, 3, 4


def _fail(category: str, message: str, code: int) -> int:
    print(json.dumps({"category": category, "message": message}), file=sys.stderr)
    return code


def _read_config(path: str) -> str:
    return Path(path).read_text()


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _apply_overrides(config, args):
    if args.workers is not None:
        config = replace(config, workers=args.workers)
    if args.dt is not None:
        config = replace(config, dt=args.dt)
    return config


def cmd_evolve(args) -> int:
    text = _read_config(args.config)
    config = _apply_overrides(parse_config(text), args)
    t0 = time.perf_counter()
    series, snapshots = run_scenario(config)
    out = _out_dir(args)
    outputs = []
    ts_path = out / "timeseries.csv"
    write_timeseries(ts_path, series)
    outputs.append(str(ts_path))
    for i, snap in enumerate(snapshots[:: args.stride]):
        p = out / f"density_{i:04d}.csv"
        write_density(p, snap)
        outputs.append(str(p))
    arrival = boundary_monitor(series)
    manifest = RunManifest(
        command="evolve",
        version=__version__,
        config_text=emit_config(config),
        resolved={
            **series.meta,
            "boundary_arrival_electron": arrival.electron,
            "boundary_arrival_positron": arrival.positron,
        },
        outputs=outputs,
        wall_seconds=time.perf_counter() - t0,
    )
    write_manifest(out / "manifest.json", manifest)
    print(f"final N = {series.pair_number[-1]:.6g}; wrote {len(outputs)} files to {out}")
    return 0


def cmd_density(args) -> int:
    text = _read_config(args.config)
    config = _apply_overrides(parse_config(text), args)
    if config.snapshots == "none":
        config = replace(config, snapshots="field_free")
    t0 = time.perf_counter()
    series, snapshots = run_scenario(config)
    out = _out_dir(args)
    outputs = []
    for i, snap in enumerate(snapshots[:: args.stride]):
        p = out / f"density_{i:04d}.csv"
        write_density(p, snap)
        outputs.append(str(p))
    manifest = RunManifest(
        command="density",
        version=__version__,
        config_text=emit_config(config),
        resolved=series.meta,
        outputs=outputs,
        wall_seconds=time.perf_counter() - t0,
    )
    write_manifest(out / "manifest.json", manifest)
    print(f"wrote {len(outputs)} density snapshots to {out}")
    return 0


def cmd_sweep(args) -> int:
    text = _read_config(args.config)
    sweep = parse_sweep_config(text)
    workers = args.workers if args.workers is not None else sweep.workers
    t0 = time.perf_counter()
    results = adiabatic_sweep(
        sweep.mode,
        sweep.upper_bounds,
        sweep.omega,
        depth=sweep.fixed_depth,
        width=sweep.fixed_width,
        n_z=sweep.n_z,
        box_length=sweep.box_length,
        n_modes=sweep.n_modes,
        dt=args.dt if args.dt is not None else sweep.dt,
        workers=workers,
    )
    out = _out_dir(args)
    sweep_path = out / "sweep.csv"
    write_sweep(sweep_path, results, sweep.omega, sweep.mode)
    manifest = RunManifest(
        command="sweep",
        version=__version__,
        config_text=text,
        resolved={"mode": sweep.mode, "omega": sweep.omega, "n_points": len(results)},
        outputs=[str(sweep_path)],
        wall_seconds=time.perf_counter() - t0,
    )
    write_manifest(out / "manifest.json", manifest)
    print(f"swept {len(results)} points; wrote {sweep_path}")
    return 0


def cmd_spectrum(args) -> int:
    text = _read_config(args.config)
    scan_cfg = parse_scan_config(text)
    t0 = time.perf_counter()
    grid = make_grid(scan_cfg.n_z, scan_cfg.box_length)
    fixed = scan_cfg.fixed_depth if scan_cfg.parameter == "width" else scan_cfg.fixed_width
    family = ScanFamily(
        kind=scan_cfg.parameter,
        fixed=fixed,
        grid=grid,
        n_basis=scan_cfg.n_basis,
        edge_width=scan_cfg.edge_width,
    )
    scan = scan_spectrum(family, np.asarray(scan_cfg.values))
    dives = diving_points(scan)
    out = _out_dir(args)
    scan_path = out / "spectrum_scan.csv"
    dive_path = out / "diving_points.csv"
    write_spectrum_scan(scan_path, scan, window=scan_cfg.window)
    write_diving_points(dive_path, dives, scan_cfg.parameter)
    manifest = RunManifest(
        command="spectrum",
        version=__version__,
        config_text=text,
        resolved={
            "parameter": scan_cfg.parameter,
            "n_values": len(scan_cfg.values),
            "n_basis": scan_cfg.n_basis,
            "diving_points": list(dives),
        },
        outputs=[str(scan_path), str(dive_path)],
        wall_seconds=time.perf_counter() - t0,
    )
    write_manifest(out / "manifest.json", manifest)
    unit = "lambdaC" if scan_cfg.parameter == "width" else "c2"
    scale = LAMBDA_C if scan_cfg.parameter == "width" else C2
    pretty = ", ".join(f"{v / scale:.3f}" for v in dives)
    print(f"diving points ({unit}): {pretty}; wrote {scan_path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pairpump",
        description="Pair creation from a 1D well with oscillating width or depth",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn, doc in (
        ("spectrum", cmd_spectrum, "static spectrum scan and diving points"),
        ("evolve", cmd_evolve, "run a drive scenario and write the time series"),
        ("sweep", cmd_sweep, "one-cycle final pair number vs drive upper bound"),
        ("density", cmd_density, "run a scenario and write density snapshots"),
    ):
        p = sub.add_parser(name, help=doc)
        p.add_argument("config", help="path to the scenario config file")
        p.add_argument("--out", default="out", help="output directory (default: out)")
        p.add_argument("--workers", type=int, default=None, help="FFT worker threads")
        p.add_argument("--dt", type=float, default=None, help="override the time step, a.u.")
        p.add_argument("--stride", type=int, default=1, help="keep every k-th density snapshot")
        p.set_defaults(fn=fn)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        return _fail("config", str(exc), EXIT_CONFIG)
    except FileNotFoundError as exc:
        return _fail("io", str(exc), EXIT_IO)
    except OSError as exc:
        return _fail("io", str(exc), EXIT_IO)
    except (ScenarioError, BranchTrackingError, np.linalg.LinAlgError) as exc:
        return _fail("numerical", str(exc), EXIT_NUMERICAL)


if __name__ == "__main__":
    sys.exit(main())
