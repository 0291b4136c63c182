"""CSV schemas of the simulation outputs and strict readers."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

FIGURE_KINDS = ("spectrum", "timeseries", "density", "staircase")

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
SWEEP_COLUMNS = ("upper_lambdaC", "final_N", "omega_c2", "mode")
SWEEP_COLUMNS_DEPTH = ("upper_c2", "final_N", "omega_c2", "mode")
DIVING_COLUMNS = ("index", "W_lambdaC")
DIVING_COLUMNS_DEPTH = ("index", "V0_c2")


class SchemaError(ValueError):
    """A CSV does not match its expected schema; message names the column."""


@dataclass(frozen=True)
class FigureSpec:
    """What to draw: figure kind, input CSVs, output image path."""

    kind: str
    inputs: Tuple[str, ...]
    output: str
    diving_csv: Optional[str] = None     # staircase/spectrum reference lines
    style: str = "surface"               # density only: surface | waterfall

    def __post_init__(self):
        if self.kind not in FIGURE_KINDS:
            raise SchemaError(f"unknown figure kind {self.kind!r}; expected one of {FIGURE_KINDS}")
        if not self.inputs:
            raise SchemaError("figure spec needs at least one input CSV")
        for path in list(self.inputs) + ([self.diving_csv] if self.diving_csv else []):
            if not Path(path).exists():
                raise SchemaError(f"input CSV does not exist: {path}")


def read_columns(path, expected: Optional[Sequence[str]] = None,
                 prefix_ok: bool = False) -> Dict[str, np.ndarray]:
    """Read a CSV into named arrays; verify the header when expected is given.

    ``prefix_ok`` accepts extra trailing columns beyond the expected prefix
    (the spectrum scan has a data-dependent number of eigenvalue columns).
    """
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: file is empty") from None
        rows = list(reader)
    if expected is not None:
        expected = list(expected)
        head = header[: len(expected)] if prefix_ok else header
        if head != expected:
            missing = [c for c in expected if c not in header]
            extra = [c for c in header if c not in expected] if not prefix_ok else []
            detail = []
            if missing:
                detail.append(f"missing column(s) {missing}")
            if extra:
                detail.append(f"unexpected column(s) {extra}")
            if not detail:
                detail.append(f"column order {header} != {expected}")
            raise SchemaError(f"{path}: {'; '.join(detail)}")
    out: Dict[str, np.ndarray] = {}
    for j, name in enumerate(header):
        column = [row[j] if j < len(row) else "" for row in rows]
        try:
            out[name] = np.array(
                [float(c) if c not in ("", "nan") else math.nan for c in column]
            )
        except ValueError:
            out[name] = np.array(column, dtype=object)
    return out


def read_timeseries(path) -> Dict[str, np.ndarray]:
    return read_columns(path, TIMESERIES_COLUMNS)


def read_density(path) -> Dict[str, np.ndarray]:
    return read_columns(path, DENSITY_COLUMNS)


def read_sweep(path) -> Dict[str, np.ndarray]:
    with open(path, newline="") as fh:
        header = next(csv.reader(fh))
    expected = SWEEP_COLUMNS if header[:1] == ["upper_lambdaC"] else SWEEP_COLUMNS_DEPTH
    return read_columns(path, expected)


def read_diving(path) -> Dict[str, np.ndarray]:
    with open(path, newline="") as fh:
        header = next(csv.reader(fh))
    expected = DIVING_COLUMNS if header[1:2] == ["W_lambdaC"] else DIVING_COLUMNS_DEPTH
    return read_columns(path, expected)


def read_spectrum_scan(path) -> Tuple[str, np.ndarray, List[np.ndarray]]:
    """Returns (parameter column name, values, per-row eigenvalue arrays)."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = list(reader)
    if not header or header[0] not in ("W_lambdaC", "V0_c2"):
        raise SchemaError(f"{path}: first column must be W_lambdaC or V0_c2, got {header[:1]}")
    for j, name in enumerate(header[1:]):
        if name != f"E{j:03d}_c2":
            raise SchemaError(f"{path}: eigenvalue column {j} named {name!r}, expected 'E{j:03d}_c2'")
    values = np.array([float(r[0]) for r in rows])
    eigenrows = [np.array([float(c) for c in r[1:] if c != ""]) for r in rows]
    return header[0], values, eigenrows
