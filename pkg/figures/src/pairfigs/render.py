"""Renderers for the four figure kinds.

Every array handed to matplotlib is also returned in RenderResult.series,
unchanged, so the digest tests can confirm the plot equals the CSV exactly.
The only transformed drawing is the optional density 'waterfall' style
(offset line stacks); the digest-bearing surface panels are always drawn.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .schema import (
    FigureSpec,
    SchemaError,
    read_density,
    read_diving,
    read_spectrum_scan,
    read_sweep,
    read_timeseries,
)


@dataclass
class RenderResult:
    figure: "plt.Figure"
    series: Dict[str, np.ndarray] = field(default_factory=dict)

    def save(self, path) -> None:
        self.figure.savefig(path, dpi=150)


def render(spec: FigureSpec) -> RenderResult:
    """Draw one figure and return it with the exact plotted arrays."""
    if spec.kind == "timeseries":
        result = _render_timeseries(spec)
    elif spec.kind == "density":
        result = _render_density(spec)
    elif spec.kind == "staircase":
        result = _render_staircase(spec)
    else:
        result = _render_spectrum(spec)
    if spec.output:
        result.save(spec.output)
    return result


def _render_timeseries(spec: FigureSpec) -> RenderResult:
    cols = read_timeseries(spec.inputs[0])
    t = cols["t_au"]
    n = cols["N"]
    free = cols["field_free"].astype(bool)
    fig, ax = plt.subplots(figsize=(7, 4.2))
    ax.plot(t, n, lw=1.2, label="N(t)")
    # triangles mark the field-free instants; a dotted line links them
    ax.plot(t[free], n[free], "v", ms=5, color="tab:red", linestyle="none", label="field-free")
    ax.plot(t[free], n[free], ":", color="tab:red", lw=1.0)
    ax.set_xlabel("t (a.u.)")
    ax.set_ylabel("pair number")
    ax.legend(loc="upper left")
    fig.tight_layout()
    return RenderResult(fig, {
        "t": t, "N": n, "t_field_free": t[free], "N_field_free": n[free],
    })


def _render_density(spec: FigureSpec) -> RenderResult:
    snapshots = [read_density(p) for p in spec.inputs]
    snapshots.sort(key=lambda c: float(c["t_au"][0]))
    z = snapshots[0]["z_lambdaC"]
    for i, snap in enumerate(snapshots[1:], start=1):
        if not np.array_equal(snap["z_lambdaC"], z):
            raise SchemaError(f"{spec.inputs[i]}: z_lambdaC grid differs from {spec.inputs[0]}")
    times = np.array([float(s["t_au"][0]) for s in snapshots])
    el = np.stack([s["N_el_per_au"] for s in snapshots])
    po = np.stack([s["N_po_per_au"] for s in snapshots])

    panels = 3 if spec.style == "waterfall" else 2
    fig, axes = plt.subplots(1, panels, figsize=(4.2 * panels, 3.8))
    for ax, data, label in ((axes[0], el, "electron"), (axes[1], po, "positron")):
        mesh = ax.pcolormesh(z, times, data, shading="nearest", cmap="magma")
        ax.set_xlabel("z ($\\lambda_C$)")
        ax.set_ylabel("t (a.u.)")
        ax.set_title(f"{label} density (per a.u.)")
        fig.colorbar(mesh, ax=ax)
    if spec.style == "waterfall":
        ax = axes[2]
        offset = 1.1 * float(np.max(el)) if np.max(el) > 0 else 1.0
        for i, row in enumerate(el):
            ax.plot(z, row + i * offset, lw=0.8, color="tab:blue")
        ax.set_xlabel("z ($\\lambda_C$)")
        ax.set_title("electron density, stacked snapshots")
        ax.set_yticks([])
    fig.tight_layout()
    return RenderResult(fig, {
        "z": z, "t": times, "electron": el, "positron": po,
    })


def _render_staircase(spec: FigureSpec) -> RenderResult:
    cols = read_sweep(spec.inputs[0])
    bound_col = "upper_lambdaC" if "upper_lambdaC" in cols else "upper_c2"
    bounds = cols[bound_col]
    finals = cols["final_N"]
    fig, ax = plt.subplots(figsize=(6.5, 4.2))
    ax.plot(bounds, finals, drawstyle="steps-post", marker="o", ms=3.5, lw=1.2)
    series = {"bounds": bounds, "final_N": finals}
    if spec.diving_csv:
        diving = read_diving(spec.diving_csv)
        dive_col = "W_lambdaC" if "W_lambdaC" in diving else "V0_c2"
        dives = diving[dive_col]
        for x in dives:
            ax.axvline(x, color="tab:gray", ls="--", lw=0.9)
        series["diving_points"] = dives
    unit = "$\\lambda_C$" if bound_col == "upper_lambdaC" else "$c^2$"
    ax.set_xlabel(f"drive upper bound ({unit})")
    ax.set_ylabel("final pair number after one cycle")
    fig.tight_layout()
    return RenderResult(fig, series)


def _render_spectrum(spec: FigureSpec) -> RenderResult:
    param_col, values, eigenrows = read_spectrum_scan(spec.inputs[0])
    xs = np.concatenate([np.full(len(row), v) for v, row in zip(values, eigenrows)])
    ys = np.concatenate(eigenrows) if eigenrows else np.empty(0)
    fig, ax = plt.subplots(figsize=(6.5, 4.6))
    ax.scatter(xs, ys, s=1.5, color="tab:blue")
    ax.axhline(-1.0, color="tab:red", lw=0.9, ls=":")
    ax.axhline(+1.0, color="tab:red", lw=0.9, ls=":")
    series = {"parameter": xs, "energy": ys}
    if spec.diving_csv:
        diving = read_diving(spec.diving_csv)
        dive_col = "W_lambdaC" if "W_lambdaC" in diving else "V0_c2"
        dives = diving[dive_col]
        for x in dives:
            ax.axvline(x, color="tab:gray", ls="--", lw=0.9)
        series["diving_points"] = dives
    unit = "$\\lambda_C$" if param_col == "W_lambdaC" else "$c^2$"
    ax.set_xlabel(f"scan parameter ({unit})")
    ax.set_ylabel("energy ($c^2$)")
    fig.tight_layout()
    return RenderResult(fig, series)
