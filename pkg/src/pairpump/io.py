"""CSV and manifest output in figure-friendly units.

All CSVs use dot decimals, fixed column order, and a header row naming the
units: energies and frequencies in multiples of the rest energy (c2), lengths
in Compton wavelengths (lambdaC), times in plain a.u., densities in particles
per a.u. length.  Floats are written with shortest round-trip precision so a
re-read reproduces them exactly.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .grid import C2, LAMBDA_C
from .experiment import DensitySnapshot, TimeSeries
from .spectrum import SpectrumScan

TIMESERIES_COLUMNS = (
    "t_au",
    "N",
    "N_in_el",
    "N_in_po",
    "alpha_el",
    "alpha_po",
    "field_free",
    "boundary_el_per_au",
    "boundary_po_per_au",
)

DENSITY_COLUMNS = ("t_au", "z_lambdaC", "N_el_per_au", "N_po_per_au")


def _fmt(x: float) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    x = float(x)
    if math.isnan(x):
        return "nan"
    return repr(x)


def write_timeseries(path, series: TimeSeries) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(TIMESERIES_COLUMNS)
        for i in range(len(series.times)):
            writer.writerow([
                _fmt(series.times[i]),
                _fmt(series.pair_number[i]),
                _fmt(series.in_well_electron[i]),
                _fmt(series.in_well_positron[i]),
                _fmt(series.pump_rate_electron[i]),
                _fmt(series.pump_rate_positron[i]),
                _fmt(series.field_free[i]),
                _fmt(series.boundary_electron[i]),
                _fmt(series.boundary_positron[i]),
            ])


def read_csv_columns(path) -> Dict[str, np.ndarray]:
    """Read a rectangular CSV into named float arrays (blank cells -> NaN)."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [row for row in reader]
    out: Dict[str, np.ndarray] = {}
    for j, name in enumerate(header):
        column = [row[j] if j < len(row) else "" for row in rows]
        try:
            out[name] = np.array([float(c) if c not in ("", "nan") else math.nan for c in column])
        except ValueError:
            out[name] = np.array(column, dtype=object)
    return out


def write_density(path, snapshot: DensitySnapshot) -> None:
    grid = snapshot.electron.grid
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(DENSITY_COLUMNS)
        for j in range(grid.n_z):
            writer.writerow([
                _fmt(snapshot.t),
                _fmt(grid.positions[j] / LAMBDA_C),
                _fmt(snapshot.electron.values[j]),
                _fmt(snapshot.positron.values[j]),
            ])


def write_sweep(path, results: Sequence[Tuple[float, float]], omega: float, mode: str) -> None:
    bound_col = "upper_lambdaC" if mode == "width" else "upper_c2"
    bound_scale = LAMBDA_C if mode == "width" else C2
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([bound_col, "final_N", "omega_c2", "mode"])
        for bound, final_n in results:
            writer.writerow([_fmt(bound / bound_scale), _fmt(final_n), _fmt(omega / C2), mode])


def write_spectrum_scan(path, scan: SpectrumScan, window: float = 1.6 * C2) -> None:
    """Scan CSV: parameter value, then eigenvalues inside |E| <= window.

    Rows are padded with blanks to the widest row so the file is rectangular.
    """
    kind = scan.family.kind
    param_col = "W_lambdaC" if kind == "width" else "V0_c2"
    param_scale = LAMBDA_C if kind == "width" else C2
    selected: List[np.ndarray] = []
    for row in scan.eigenvalues:
        selected.append(row[np.abs(row) <= window] / C2)
    width = max(len(s) for s in selected)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([param_col] + [f"E{i:03d}_c2" for i in range(width)])
        for value, eigs in zip(scan.values, selected):
            row = [_fmt(value / param_scale)] + [_fmt(e) for e in eigs]
            row += [""] * (width - len(eigs))
            writer.writerow(row)


def write_diving_points(path, values: Sequence[float], kind: str) -> None:
    col = "W_lambdaC" if kind == "width" else "V0_c2"
    scale = LAMBDA_C if kind == "width" else C2
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["index", col])
        for i, v in enumerate(values):
            writer.writerow([str(i), _fmt(v / scale)])


@dataclass
class RunManifest:
    """Reproducibility record written next to every output set."""

    command: str
    version: str
    config_text: str
    resolved: Dict
    outputs: List[str] = field(default_factory=list)
    wall_seconds: float = 0.0

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True, default=_json_default)


def _json_default(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, tuple):
        return list(obj)
    return repr(obj)


def write_manifest(path, manifest: RunManifest) -> None:
    Path(path).write_text(manifest.to_json() + "\n")


def read_manifest(path) -> Dict:
    return json.loads(Path(path).read_text())
