"""Scenario configuration grammar: sectioned key = value text with units.

Grammar (one construct per line):

    [section]            # sections group keys but names are global
    key = value          # '#' or ';' start full-line comments

Values are numbers with an optional unit suffix: energies in ``c2`` (multiples
of the rest energy) or ``au``; lengths in ``lambdaC`` or ``au``; times,
counts and words take no unit.  Lists are comma-separated ("2, 2.5, 3
lambdaC") or ranges "start:stop:step lambdaC" (stop inclusive up to
roundoff).  All errors carry the offending line number.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .grid import C2, LAMBDA_C
from .potential import DEFAULT_EDGE_WIDTH, DepthOscillation, WidthOscillation
from .experiment import ScenarioConfig

KNOWN_SECTIONS = {"grid", "drive", "run", "sweep", "spectrum", "output"}

ENERGY, LENGTH, PLAIN, COUNT, WORD = "energy", "length", "plain", "count", "word"

# key -> (dimension, description)
KEY_SPECS: Dict[str, Tuple[str, str]] = {
    "mode": (WORD, "drive kind: width | depth (inferred from keys when absent)"),
    "omega": (ENERGY, "drive angular frequency"),
    "V0": (ENERGY, "fixed well depth (width mode)"),
    "V1": (ENERGY, "depth lower bound (depth mode)"),
    "V2": (ENERGY, "depth upper bound (depth mode)"),
    "W": (LENGTH, "fixed well width (depth mode)"),
    "W1": (LENGTH, "width lower bound (width mode)"),
    "W2": (LENGTH, "width upper bound (width mode)"),
    "D": (LENGTH, "well edge width"),
    "L": (LENGTH, "box length"),
    "n_z": (COUNT, "grid points"),
    "N_p": (COUNT, "retained momenta per branch"),
    "cycles": (COUNT, "number of drive cycles"),
    "dt": (PLAIN, "time step, a.u."),
    "samples_per_cycle": (COUNT, "observable samples per cycle"),
    "snapshots": (WORD, "density snapshot policy: field_free | all | none"),
    "half_width": (LENGTH, "in-well integration half width"),
    "boundary_fraction": (PLAIN, "edge window size as a fraction of L"),
    "boundary_threshold": (PLAIN, "edge arrival density threshold, per a.u."),
    "workers": (COUNT, "FFT worker threads"),
    "upper": (None, "sweep upper bounds (length for width mode, energy for depth)"),
    "parameter": (WORD, "spectrum scan parameter: width | depth"),
    "values": (None, "spectrum scan values (length or energy per parameter)"),
    "window": (ENERGY, "spectrum output eigenvalue window half-size"),
}

REQUIRED_EVOLVE = ("omega", "cycles")


class ConfigError(ValueError):
    """Configuration text is malformed; message carries the line number."""


@dataclass(frozen=True)
class _Entry:
    key: str
    raw: str
    line: int


def _tokenize(text: str) -> Dict[str, _Entry]:
    entries: Dict[str, _Entry] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#") or stripped.startswith(";"):
            continue
        if stripped.startswith("["):
            if not stripped.endswith("]"):
                raise ConfigError(f"line {lineno}: malformed section header {stripped!r}")
            name = stripped[1:-1].strip()
            if name not in KNOWN_SECTIONS:
                raise ConfigError(f"line {lineno}: unknown section [{name}]")
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {stripped!r}")
        key, _, raw = stripped.partition("=")
        key = key.strip()
        raw = raw.strip()
        if key not in KEY_SPECS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in entries:
            raise ConfigError(f"line {lineno}: duplicate key {key!r} (first set on line {entries[key].line})")
        if not raw:
            raise ConfigError(f"line {lineno}: key {key!r} has no value")
        entries[key] = _Entry(key, raw, lineno)
    return entries


_UNIT_SCALES = {
    ENERGY: {"c2": C2, "au": 1.0},
    LENGTH: {"lambdaC": LAMBDA_C, "au": 1.0},
    PLAIN: {"au": 1.0},
}


def _number(raw: str, dimension: str, key: str, line: int) -> float:
    parts = raw.split()
    if len(parts) > 2:
        raise ConfigError(f"line {line}: cannot parse {key!r} value {raw!r}")
    unit = parts[1] if len(parts) == 2 else "au"
    scales = _UNIT_SCALES[dimension]
    if unit not in scales:
        allowed = "|".join(scales)
        raise ConfigError(f"line {line}: {key!r} expects a unit in {{{allowed}}}, got {unit!r}")
    try:
        value = float(parts[0])
    except ValueError:
        raise ConfigError(f"line {line}: {key!r} value {parts[0]!r} is not a number") from None
    return value * scales[unit]


def _count(raw: str, key: str, line: int) -> int:
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"line {line}: {key!r} value {raw!r} is not an integer") from None
    return value


def _number_list(raw: str, dimension: str, key: str, line: int) -> List[float]:
    parts = raw.split()
    unit = "au"
    body = raw
    if parts and parts[-1] in _UNIT_SCALES[dimension]:
        unit = parts[-1]
        body = raw[: raw.rfind(unit)].strip()
    scale = _UNIT_SCALES[dimension][unit]
    if ":" in body:
        pieces = body.split(":")
        if len(pieces) != 3:
            raise ConfigError(f"line {line}: ranges are start:stop:step, got {body!r}")
        try:
            start, stop, step = (float(p) for p in pieces)
        except ValueError:
            raise ConfigError(f"line {line}: bad range bounds in {body!r}") from None
        if step <= 0 or stop < start:
            raise ConfigError(f"line {line}: need stop >= start and step > 0 in {body!r}")
        n = int(math.floor((stop - start) / step + 1e-9)) + 1
        return [(start + i * step) * scale for i in range(n)]
    try:
        return [float(p) * scale for p in body.split(",")]
    except ValueError:
        raise ConfigError(f"line {line}: bad list {body!r}") from None


def _drive_mode(entries: Dict[str, _Entry]) -> str:
    if "mode" in entries:
        mode = entries["mode"].raw
        if mode not in ("width", "depth"):
            raise ConfigError(f"line {entries['mode'].line}: mode must be 'width' or 'depth', got {mode!r}")
        return mode
    if "W2" in entries and "V2" not in entries:
        return "width"
    if "V2" in entries and "W2" not in entries:
        return "depth"
    raise ConfigError("drive mode is ambiguous: set 'mode', or exactly one of W2/V2")


def _build_drive(entries: Dict[str, _Entry]) -> Tuple[str, object]:
    mode = _drive_mode(entries)
    get = lambda key, dim: _number(entries[key].raw, dim, key, entries[key].line)
    omega = get("omega", ENERGY) if "omega" in entries else None
    if omega is None:
        raise ConfigError("missing required key: omega")
    edge = get("D", LENGTH) if "D" in entries else DEFAULT_EDGE_WIDTH
    if mode == "width":
        for key in ("V0", "W2"):
            if key not in entries:
                raise ConfigError(f"missing required key for width mode: {key}")
        drive = WidthOscillation(
            depth=get("V0", ENERGY),
            width_max=get("W2", LENGTH),
            omega=omega,
            width_min=get("W1", LENGTH) if "W1" in entries else 0.0,
            edge_width=edge,
        )
    else:
        for key in ("W", "V2"):
            if key not in entries:
                raise ConfigError(f"missing required key for depth mode: {key}")
        drive = DepthOscillation(
            width=get("W", LENGTH),
            depth_max=get("V2", ENERGY),
            omega=omega,
            depth_min=get("V1", ENERGY) if "V1" in entries else 0.0,
            edge_width=edge,
        )
    return mode, drive


def parse_config(text: str) -> ScenarioConfig:
    """Parse an evolve-style scenario config; defaults fill unset keys."""
    entries = _tokenize(text)
    missing = [k for k in REQUIRED_EVOLVE if k not in entries]
    mode_missing = not any(k in entries for k in ("mode", "W2", "V2"))
    if missing or mode_missing:
        need = missing + (["mode (or W2/V2)"] if mode_missing else [])
        raise ConfigError(f"missing required keys: {', '.join(need)}")
    _, drive = _build_drive(entries)

    def opt_num(key: str, dim: str, default: float) -> float:
        return _number(entries[key].raw, dim, key, entries[key].line) if key in entries else default

    def opt_count(key: str, default: int) -> int:
        return _count(entries[key].raw, key, entries[key].line) if key in entries else default

    snapshots = entries["snapshots"].raw if "snapshots" in entries else "field_free"
    try:
        return ScenarioConfig(
            drive=drive,
            n_cycles=_count(entries["cycles"].raw, "cycles", entries["cycles"].line),
            n_z=opt_count("n_z", 2048),
            box_length=opt_num("L", LENGTH, 2.5),
            n_modes=opt_count("N_p", 1024),
            dt=opt_num("dt", PLAIN, math.nan) if "dt" in entries else None,
            samples_per_cycle=opt_count("samples_per_cycle", 8),
            snapshots=snapshots,
            half_width=opt_num("half_width", LENGTH, 5 * LAMBDA_C),
            boundary_fraction=opt_num("boundary_fraction", PLAIN, 0.02),
            boundary_threshold=opt_num("boundary_threshold", PLAIN, 0.05),
            workers=opt_count("workers", 1),
        )
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from exc


@dataclass(frozen=True)
class SweepConfig:
    mode: str
    upper_bounds: Tuple[float, ...]
    omega: float
    fixed_depth: Optional[float]
    fixed_width: Optional[float]
    n_z: int
    box_length: float
    n_modes: int
    dt: Optional[float]
    workers: int


def parse_sweep_config(text: str) -> SweepConfig:
    """Parse a sweep config: a drive section plus 'upper' bounds."""
    entries = _tokenize(text)
    if "upper" not in entries:
        raise ConfigError("missing required key: upper")
    if "omega" not in entries:
        raise ConfigError("missing required key: omega")
    mode = _drive_mode({k: v for k, v in entries.items() if k in ("mode", "W2", "V2", "V0", "W")}) \
        if ("mode" in entries or "W2" in entries or "V2" in entries) else None
    if mode is None:
        # sweeps usually set only the fixed parameter; infer from it
        if "V0" in entries and "W" not in entries:
            mode = "width"
        elif "W" in entries and "V0" not in entries:
            mode = "depth"
        else:
            raise ConfigError("sweep mode is ambiguous: set 'mode', or exactly one of V0/W")
    dim = LENGTH if mode == "width" else ENERGY
    upper = _number_list(entries["upper"].raw, dim, "upper", entries["upper"].line)
    get = lambda key, d: _number(entries[key].raw, d, key, entries[key].line)
    fixed_depth = get("V0", ENERGY) if "V0" in entries else None
    fixed_width = get("W", LENGTH) if "W" in entries else None
    if mode == "width" and fixed_depth is None:
        raise ConfigError("width sweeps need the fixed depth V0")
    if mode == "depth" and fixed_width is None:
        raise ConfigError("depth sweeps need the fixed width W")
    return SweepConfig(
        mode=mode,
        upper_bounds=tuple(upper),
        omega=get("omega", ENERGY),
        fixed_depth=fixed_depth,
        fixed_width=fixed_width,
        n_z=_count(entries["n_z"].raw, "n_z", entries["n_z"].line) if "n_z" in entries else 512,
        box_length=get("L", LENGTH) if "L" in entries else 2.5,
        n_modes=_count(entries["N_p"].raw, "N_p", entries["N_p"].line) if "N_p" in entries else 256,
        dt=get("dt", PLAIN) if "dt" in entries else None,
        workers=_count(entries["workers"].raw, "workers", entries["workers"].line) if "workers" in entries else 1,
    )


@dataclass(frozen=True)
class ScanConfig:
    parameter: str
    values: Tuple[float, ...]
    fixed_depth: Optional[float]
    fixed_width: Optional[float]
    n_z: int
    box_length: float
    n_basis: int
    edge_width: float
    window: float


def parse_scan_config(text: str) -> ScanConfig:
    """Parse a static-spectrum scan config."""
    entries = _tokenize(text)
    for key in ("parameter", "values"):
        if key not in entries:
            raise ConfigError(f"missing required key: {key}")
    parameter = entries["parameter"].raw
    if parameter not in ("width", "depth"):
        raise ConfigError(f"line {entries['parameter'].line}: parameter must be 'width' or 'depth'")
    dim = LENGTH if parameter == "width" else ENERGY
    values = _number_list(entries["values"].raw, dim, "values", entries["values"].line)
    get = lambda key, d: _number(entries[key].raw, d, key, entries[key].line)
    fixed_depth = get("V0", ENERGY) if "V0" in entries else None
    fixed_width = get("W", LENGTH) if "W" in entries else None
    if parameter == "width" and fixed_depth is None:
        raise ConfigError("width scans need the fixed depth V0")
    if parameter == "depth" and fixed_width is None:
        raise ConfigError("depth scans need the fixed width W")
    return ScanConfig(
        parameter=parameter,
        values=tuple(values),
        fixed_depth=fixed_depth,
        fixed_width=fixed_width,
        n_z=_count(entries["n_z"].raw, "n_z", entries["n_z"].line) if "n_z" in entries else 2048,
        box_length=get("L", LENGTH) if "L" in entries else 2.5,
        n_basis=_count(entries["N_p"].raw, "N_p", entries["N_p"].line) if "N_p" in entries else 512,
        edge_width=get("D", LENGTH) if "D" in entries else DEFAULT_EDGE_WIDTH,
        window=get("window", ENERGY) if "window" in entries else 1.6 * C2,
    )


def emit_config(config: ScenarioConfig) -> str:
    """Canonical text for a scenario config; parse(emit(c)) == c exactly.

    All values are written in plain a.u. with full float precision.
    """
    drive = config.drive
    lines = ["[drive]"]
    if isinstance(drive, WidthOscillation):
        lines += [
            "mode = width",
            f"omega = {drive.omega!r} au",
            f"V0 = {drive.depth!r} au",
            f"W2 = {drive.width_max!r} au",
            f"W1 = {drive.width_min!r} au",
            f"D = {drive.edge_width!r} au",
        ]
    else:
        lines += [
            "mode = depth",
            f"omega = {drive.omega!r} au",
            f"W = {drive.width!r} au",
            f"V2 = {drive.depth_max!r} au",
            f"V1 = {drive.depth_min!r} au",
            f"D = {drive.edge_width!r} au",
        ]
    lines += [
        "",
        "[grid]",
        f"n_z = {config.n_z}",
        f"L = {config.box_length!r} au",
        f"N_p = {config.n_modes}",
        "",
        "[run]",
        f"cycles = {config.n_cycles}",
        f"samples_per_cycle = {config.samples_per_cycle}",
        f"snapshots = {config.snapshots}",
        f"half_width = {config.half_width!r} au",
        f"boundary_fraction = {config.boundary_fraction!r}",
        f"boundary_threshold = {config.boundary_threshold!r}",
        f"workers = {config.workers}",
    ]
    if config.dt is not None:
        lines.append(f"dt = {config.dt!r}")
    return "\n".join(lines) + "\n"
