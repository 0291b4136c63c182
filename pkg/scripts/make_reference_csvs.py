#!/usr/bin/env python3
"""Generate the small reference CSVs shipped with the figure package.

Deliberately tiny configurations: the files exercise every CSV schema in a
couple of minutes, they are not converged physics.
"""

import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from pairpump.grid import C2, LAMBDA_C, make_grid
from pairpump.experiment import ScenarioConfig, adiabatic_sweep, run_scenario
from pairpump.io import write_density, write_diving_points, write_spectrum_scan, write_sweep, write_timeseries
from pairpump.potential import WidthOscillation
from pairpump.spectrum import ScanFamily, diving_points, scan_spectrum


def main() -> int:
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("figures/reference")
    out.mkdir(parents=True, exist_ok=True)

    config = ScenarioConfig(
        drive=WidthOscillation(depth=2.53 * C2, width_max=10 * LAMBDA_C, omega=0.3 * C2),
        n_cycles=6,
        n_z=256,
        n_modes=128,
        samples_per_cycle=8,
        snapshots="field_free",
        workers=2,
    )
    series, snapshots = run_scenario(config)
    write_timeseries(out / "timeseries.csv", series)
    for i, snap in enumerate(snapshots):
        write_density(out / f"density_{i:04d}.csv", snap)

    bounds = [w * LAMBDA_C for w in np.arange(1.0, 11.01, 1.0)]
    results = adiabatic_sweep(
        "width", bounds, omega=(0.1 / 6) * C2, depth=2.53 * C2,
        n_z=256, n_modes=96, dt=2.5e-6, workers=2,
    )
    write_sweep(out / "sweep.csv", results, (0.1 / 6) * C2, "width")

    grid = make_grid(1024, 2.5)
    family = ScanFamily(kind="width", fixed=2.53 * C2, grid=grid, n_basis=256)
    scan = scan_spectrum(family, np.linspace(0.5, 10.0, 14) * LAMBDA_C)
    write_spectrum_scan(out / "spectrum_scan.csv", scan)
    write_diving_points(out / "diving_points.csv", diving_points(scan), "width")
    print(f"wrote reference CSVs to {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
