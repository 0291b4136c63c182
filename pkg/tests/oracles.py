"""Independent reference implementations used only by the test suite.

These deliberately avoid the package's computational paths: the dense
Hamiltonian is assembled in the position representation from an explicit DFT
matrix, exact evolution goes through a full eigendecomposition, and the
threshold widths/depths come from integrating the coupled radial equations on
the infinite domain with a high-order ODE solver.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg as sla
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from pairpump.grid import C, C2, SpatialGrid
from pairpump.potential import WellShape, well_profile


def dense_hamiltonian(grid: SpatialGrid, potential_values: np.ndarray) -> np.ndarray:
    """Position-representation Hamiltonian with the spectral momentum operator."""
    n = grid.n_z
    dft = sla.dft(n)                                  # dft @ x == np.fft.fft(x)
    momentum = (dft.conj().T / n) @ np.diag(grid.momenta) @ dft
    momentum = 0.5 * (momentum + momentum.conj().T)
    v = np.diag(np.asarray(potential_values, dtype=float))
    upper = C2 * np.eye(n) + v
    lower = -C2 * np.eye(n) + v
    h = np.block([[upper, C * momentum], [C * momentum, lower]])
    return 0.5 * (h + h.conj().T)


def exact_evolution(grid: SpatialGrid, potential_values: np.ndarray, t: float) -> np.ndarray:
    """exp(-i H t) for the static dense Hamiltonian, via eigendecomposition."""
    h = dense_hamiltonian(grid, potential_values)
    eigvals, eigvecs = sla.eigh(h)
    return (eigvecs * np.exp(-1j * eigvals * t)) @ eigvecs.conj().T


def spinor_to_vector(data: np.ndarray) -> np.ndarray:
    return np.concatenate([data[0], data[1]])


def vector_to_spinor(vec: np.ndarray, n: int) -> np.ndarray:
    return np.stack([vec[:n], vec[n:]])


def _threshold_rhs_factory(shape: WellShape):
    def rhs(z, y):
        v = float(well_profile(shape, z))
        f, h = y
        return [-(1.0 / C) * (-v) * h, (1.0 / C) * (-2.0 * C2 - v) * f]

    return rhs


def _threshold_misfit(shape: WellShape, span: float):
    """Integrate the sea-edge solution from far left to the center.

    Returns (f(0), h(0)); a marginally bound state exists when either
    component vanishes (the two parity classes).
    """
    sol = solve_ivp(
        _threshold_rhs_factory(shape),
        (-span, 0.0),
        [0.0, 1.0],
        rtol=1e-10,
        atol=1e-12,
        method="DOP853",
    )
    return float(sol.y[0, -1]), float(sol.y[1, -1])


def shooting_dive_points(kind: str, fixed: float, grid_span: float, lo: float, hi: float,
                         edge_width: float, n_scan: int = 240) -> np.ndarray:
    """Infinite-domain threshold parameters where a new state binds at -c^2."""

    def shape(value: float) -> WellShape:
        if kind == "width":
            return WellShape(fixed, value, edge_width)
        return WellShape(value, fixed, edge_width)

    values = np.linspace(lo, hi, n_scan)
    comps = np.empty((n_scan, 2))
    for i, v in enumerate(values):
        f0, h0 = _threshold_misfit(shape(v), grid_span)
        scale = max(abs(f0), abs(h0), 1e-300)
        comps[i] = (f0 / scale, h0 / scale)
    dives = []
    for c in range(2):
        for i in range(1, n_scan):
            if np.sign(comps[i - 1, c]) != np.sign(comps[i, c]):
                root = brentq(
                    lambda v: _threshold_misfit(shape(v), grid_span)[c],
                    values[i - 1],
                    values[i],
                    xtol=1e-8 * (hi - lo),
                )
                dives.append(root)
    return np.array(sorted(dives))
