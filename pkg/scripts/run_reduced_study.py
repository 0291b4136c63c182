#!/usr/bin/env python3
"""Reproduce the full reduced-scale study into one output directory.

Runs both drive modes at omega = 0.3 c^2, the slow one-cycle width sweep,
and both static-spectrum scans, writing every CSV the figure scripts
consume.  Takes roughly half an hour on two cores.
"""

import argparse
import sys
import time
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from pairpump.grid import C2, LAMBDA_C, make_grid
from pairpump.experiment import ScenarioConfig, adiabatic_sweep, run_scenario
from pairpump.io import write_density, write_diving_points, write_spectrum_scan, write_sweep, write_timeseries
from pairpump.potential import DepthOscillation, WidthOscillation
from pairpump.spectrum import ScanFamily, diving_points, scan_spectrum


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="out/reduced_study")
    parser.add_argument("--workers", type=int, default=2)
    parser.add_argument("--n-z", type=int, default=512)
    parser.add_argument("--n-modes", type=int, default=512)
    args = parser.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    drives = {
        "width": WidthOscillation(depth=2.53 * C2, width_max=10 * LAMBDA_C, omega=0.3 * C2),
        "depth": DepthOscillation(width=10 * LAMBDA_C, depth_max=2.53 * C2, omega=0.3 * C2),
    }
    for name, drive in drives.items():
        t0 = time.perf_counter()
        config = ScenarioConfig(
            drive=drive,
            n_cycles=18,
            n_z=args.n_z,
            n_modes=args.n_modes,
            samples_per_cycle=8,
            snapshots="field_free",
            workers=args.workers,
        )
        series, snapshots = run_scenario(config)
        write_timeseries(out / f"timeseries_{name}.csv", series)
        for i, snap in enumerate(snapshots):
            write_density(out / f"density_{name}_{i:04d}.csv", snap)
        print(f"{name}-mode run: final N = {series.pair_number[-1]:.3f} "
              f"({time.perf_counter() - t0:.0f}s)")

    t0 = time.perf_counter()
    bounds = [w * LAMBDA_C for w in np.arange(1.0, 11.01, 0.5)]
    results = adiabatic_sweep(
        "width", bounds, omega=(0.1 / 6) * C2, depth=2.53 * C2,
        n_z=args.n_z, n_modes=256, workers=args.workers,
    )
    write_sweep(out / "sweep_width.csv", results, (0.1 / 6) * C2, "width")
    print(f"width sweep over {len(bounds)} points ({time.perf_counter() - t0:.0f}s)")

    grid = make_grid(2048, 2.5)
    for kind, fixed, values, scale in (
        ("width", 2.53 * C2, np.linspace(0.5, 10.0, 25) * LAMBDA_C, LAMBDA_C),
        ("depth", 10 * LAMBDA_C, np.linspace(0.2, 3.9, 38) * C2, C2),
    ):
        t0 = time.perf_counter()
        family = ScanFamily(kind=kind, fixed=fixed, grid=grid, n_basis=512)
        scan = scan_spectrum(family, values)
        dives = diving_points(scan)
        write_spectrum_scan(out / f"spectrum_{kind}.csv", scan)
        write_diving_points(out / f"diving_{kind}.csv", dives, kind)
        print(f"{kind} scan dives: {np.round(dives / scale, 3)} ({time.perf_counter() - t0:.0f}s)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
