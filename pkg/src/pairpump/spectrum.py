"""Static spectra over parameter scans and bound-state diving points.

The driven-well Hamiltonian is diagonalized in the free-mode basis: diagonal
free energies plus well matrix elements.  Because the basis modes are plane
waves, <a|V|b> depends only on the momentum-index difference, so one FFT of
the potential assembles the full coupling block exactly (it equals the dense
grid quadrature to roundoff).  The basis may be truncated by |k| while the
quadrature grid stays fine enough to resolve the tanh edges.

Diving points need care in a finite box: as a bound level approaches the sea
edge -c^2 its tail length diverges, so the raw box eigenvalue crosses the
edge visibly late, and just below the edge the state hybridizes with the
discrete continuum levels.  The detector therefore samples the tracked bound
branch at a few small heights above the edge (secant refinement between scan
samples), where the box error is negligible, and extrapolates to zero height
with the threshold law (binding height quadratic in the parameter distance,
fitted as sqrt(height) vs parameter).  This reproduces an independent
infinite-domain shooting oracle to well inside the scan tolerances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg as sla

from .grid import C2, LAMBDA_C, SpatialGrid
from .free_basis import NEGATIVE, POSITIVE, branch_spinors, free_energy, mode_order
from .potential import DEFAULT_EDGE_WIDTH, WellShape, well_profile

SEA_EDGE_MARGIN = 1e-6          # counting threshold below -c^2, in units of c^2
DEFAULT_DELTA_TARGETS = (0.02, 0.008, 0.003)   # branch heights above -c^2 (units of c^2)


class BranchTrackingError(RuntimeError):
    """Raised when consecutive-step eigenvector overlap is too weak to track."""


class SpectrumBuilder:
    """Precomputed free-mode tables for fast Hamiltonian assembly on a grid."""

    def __init__(self, grid: SpatialGrid, n_basis: Optional[int] = None):
        n_basis = grid.n_z if n_basis is None else int(n_basis)
        if not 1 <= n_basis <= grid.n_z:
            raise ValueError(f"n_basis must be in [1, {grid.n_z}], got {n_basis}")
        self.grid = grid
        self.n_basis = n_basis
        sel = mode_order(grid)[:n_basis]
        momenta = grid.momenta[sel]
        spin = np.concatenate(
            [branch_spinors(momenta, POSITIVE), branch_spinors(momenta, NEGATIVE)], axis=0
        )
        self.energies = np.concatenate(
            [free_energy(momenta, POSITIVE), free_energy(momenta, NEGATIVE)]
        )
        m_idx = np.concatenate([grid.dft_indices[sel], grid.dft_indices[sel]])
        diff = m_idx[:, None] - m_idx[None, :]
        self._wrap = diff % grid.n_z
        # plane-wave quadrature phase (-1)^(index difference) from z_0 = -L/2
        self._alt = np.where(diff % 2 == 0, 1.0, -1.0)
        self._spin_overlap = spin.conj() @ spin.T
        self._momenta = momenta
        self._fields: Optional[np.ndarray] = None

    @property
    def dim(self) -> int:
        return 2 * self.n_basis

    @property
    def fields(self) -> np.ndarray:
        """Basis fields (dim, 2, n_z), built lazily (localization diagnostics)."""
        if self._fields is None:
            g = self.grid
            waves = np.exp(1j * self._momenta[:, None] * g.positions[None, :]) / math.sqrt(g.box_length)
            spin = np.concatenate(
                [branch_spinors(self._momenta, POSITIVE), branch_spinors(self._momenta, NEGATIVE)],
                axis=0,
            )
            self._fields = spin[:, :, None] * np.concatenate([waves, waves], axis=0)[:, None, :]
        return self._fields

    def coupling(self, potential_values: np.ndarray) -> np.ndarray:
        """Matrix elements <a|V|b> over the basis, via one FFT of V."""
        vhat = np.fft.fft(np.asarray(potential_values, dtype=float))
        block = (self.grid.dz / self.grid.box_length) * self._alt * vhat[self._wrap] * self._spin_overlap
        return block

    def hamiltonian(self, potential_values: np.ndarray) -> np.ndarray:
        """Hermitian Hamiltonian: free diagonal plus well coupling, symmetrized."""
        h = self.coupling(potential_values)
        h[np.diag_indices_from(h)] += self.energies
        return 0.5 * (h + h.conj().T)


def build_hamiltonian(grid: SpatialGrid, potential_values: np.ndarray, n_basis: Optional[int] = None) -> np.ndarray:
    """One-shot Hamiltonian in the free-mode basis (dimension 2*n_basis)."""
    return SpectrumBuilder(grid, n_basis).hamiltonian(potential_values)


def eigen_decompose(hamiltonian: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Dense Hermitian eigensolve, ascending eigenvalues, orthonormal vectors."""
    return sla.eigh(hamiltonian)


@dataclass(frozen=True)
class ScanFamily:
    """One-parameter family of static wells: vary width or depth."""

    kind: str                  # 'width' or 'depth'
    fixed: float               # depth (a.u.) for width scans, width for depth scans
    grid: SpatialGrid
    n_basis: Optional[int] = None
    edge_width: float = DEFAULT_EDGE_WIDTH

    def __post_init__(self):
        if self.kind not in ("width", "depth"):
            raise ValueError(f"kind must be 'width' or 'depth', got {self.kind!r}")

    def shape(self, value: float) -> WellShape:
        if self.kind == "width":
            return WellShape(self.fixed, value, self.edge_width)
        return WellShape(value, self.fixed, self.edge_width)

    def potential(self, value: float) -> np.ndarray:
        return well_profile(self.shape(value), self.grid.positions)


@dataclass
class BoundBranch:
    """A continuity-tracked in-gap bound level along the scan."""

    label: int
    value_indices: List[int]
    energies: List[float]
    localizations: List[float]


class SpectrumScan:
    """Eigenvalues over a scan plus tracked in-gap branches."""

    def __init__(self, family: ScanFamily, values: np.ndarray, eigenvalues: np.ndarray,
                 branches: List[BoundBranch], ambiguities: List[Tuple[int, int, float]],
                 builder: SpectrumBuilder):
        self.family = family
        self.values = values
        self.eigenvalues = eigenvalues        # (n_values, dim), ascending per row
        self.branches = branches
        self.ambiguities = ambiguities        # (branch label, value index, best overlap)
        self._builder = builder
        thr = -C2 * (1.0 + SEA_EDGE_MARGIN)
        self.counts_below_sea = np.sum(eigenvalues < thr, axis=1)

    @property
    def n_basis(self) -> int:
        return self._builder.n_basis

    def branch_labels_at(self, value_index: int) -> List[int]:
        return [b.label for b in self.branches if value_index in b.value_indices]


def _localization(builder: SpectrumBuilder, coefs: np.ndarray, half_width: float) -> np.ndarray:
    """In-well probability of eigenvectors given as basis-coefficient columns."""
    g = builder.grid
    mask = np.abs(g.positions) <= half_width + 1e-12
    fields = builder.fields[:, :, mask]
    mixed = np.einsum("ai,acz->icz", coefs, fields)
    return g.dz * np.sum(np.abs(mixed) ** 2, axis=(1, 2)).real


def scan_spectrum(
    family: ScanFamily,
    values: Sequence[float],
    localization_half_width: float = 5 * LAMBDA_C,
    localization_min: float = 0.5,
    overlap_min: float = 0.5,
) -> SpectrumScan:
    """Diagonalize along ascending values, tracking localized in-gap branches."""
    values = np.asarray(values, dtype=float)
    if values.size < 2 or np.any(np.diff(values) <= 0):
        raise ValueError("scan values must be ascending with at least two entries")
    builder = SpectrumBuilder(family.grid, family.n_basis)
    all_eigs = np.empty((values.size, builder.dim))
    branches: List[BoundBranch] = []
    ambiguities: List[Tuple[int, int, float]] = []
    prev_vectors: Optional[np.ndarray] = None
    prev_labels: List[int] = []
    next_label = 0
    for i, v in enumerate(values):
        eigvals, eigvecs = eigen_decompose(builder.hamiltonian(family.potential(v)))
        all_eigs[i] = eigvals
        in_gap = np.nonzero((eigvals > -C2 * (1 - 1e-12)) & (eigvals < C2 * (1 - 1e-12)))[0]
        if in_gap.size:
            locs = _localization(builder, eigvecs[:, in_gap], localization_half_width)
            keep = locs > localization_min
            in_gap = in_gap[keep]
            locs = locs[keep]
        else:
            locs = np.empty(0)
        vectors = eigvecs[:, in_gap]
        labels: List[int] = [-1] * in_gap.size
        if prev_vectors is not None and prev_vectors.shape[1] and in_gap.size:
            overlap = np.abs(prev_vectors.conj().T @ vectors)
            for j_prev, label in enumerate(prev_labels):
                j_best = int(np.argmax(overlap[j_prev]))
                best = float(overlap[j_prev, j_best])
                if best >= overlap_min and labels[j_best] == -1:
                    labels[j_best] = label
                elif best < overlap_min:
                    # predecessor left the gap (dived or rose); only flag true
                    # ambiguity when it still has an in-gap look-alike
                    if best > 0.25:
                        ambiguities.append((label, i, best))
        for j, lab in enumerate(labels):
            if lab == -1:
                labels[j] = next_label
                branches.append(BoundBranch(next_label, [], [], []))
                next_label += 1
        by_label = {b.label: b for b in branches}
        for j, lab in enumerate(labels):
            b = by_label[lab]
            b.value_indices.append(i)
            b.energies.append(float(eigvals[in_gap[j]]))
            b.localizations.append(float(locs[j]))
        prev_vectors = vectors
        prev_labels = labels
    return SpectrumScan(family, values, all_eigs, branches, ambiguities, builder)


def _branch_height(builder: SpectrumBuilder, family: ScanFamily, value: float, sorted_index: int) -> float:
    """Height of the diving branch above the sea edge, in units of c^2."""
    eigvals = np.linalg.eigvalsh(builder.hamiltonian(family.potential(value)))
    return (eigvals[sorted_index] + C2) / C2


def _refine_to_height(height: Callable[[float], float], lo: float, hi: float, target: float,
                      rel_tol: float = 0.02, max_iter: int = 60) -> Tuple[float, float]:
    """Solve height(p) = target for the decreasing branch height; secant with bisection fallback."""
    a, b = lo, hi
    fa = height(a) - target
    fb = height(b) - target
    step = hi - lo
    while fa < 0:
        a -= step
        fa = height(a) - target
    p, fp = b, fb
    for _ in range(max_iter):
        p = b - fb * (b - a) / (fb - fa) if fb != fa else 0.5 * (a + b)
        if not min(a, b) < p < max(a, b):
            p = 0.5 * (a + b)
        fp = height(p) - target
        if abs(fp) < rel_tol * target:
            return p, fp + target
        if (fp > 0) == (fa > 0):
            a, fa = p, fp
        else:
            b, fb = p, fp
    return p, fp + target


def diving_points(
    scan: SpectrumScan,
    delta_targets: Sequence[float] = DEFAULT_DELTA_TARGETS,
) -> np.ndarray:
    """Parameter values where tracked bound branches reach the sea edge.

    Brackets come from the scan's below-edge eigenvalue counts; each branch is
    then sampled at the given heights above -c^2 (secant refinement) and the
    crossing is the zero of a quadratic fit of sqrt(height) vs parameter.
    """
    builder = scan._builder
    family = scan.family
    base = scan.n_basis
    dived = np.clip(scan.counts_below_sea - base, 0, None)
    n_dives = int(dived[-1])
    points = []
    for r in range(1, n_dives + 1):
        i_hi = int(np.argmax(dived >= r))
        if i_hi == 0:
            raise BranchTrackingError(f"scan does not bracket dive {r}: start the scan earlier")
        for label, i_amb, best in scan.ambiguities:
            if i_hi - 1 <= i_amb <= i_hi:
                raise BranchTrackingError(
                    f"branch {label} tracking ambiguous at scan index {i_amb} (overlap {best:.2f})"
                )
        lo, hi = float(scan.values[i_hi - 1]), float(scan.values[i_hi])
        sorted_index = base + r - 1

        def height(p: float) -> float:
            return _branch_height(builder, family, p, sorted_index)

        samples = [_refine_to_height(height, lo, hi, t) for t in sorted(delta_targets, reverse=True)]
        p_s = np.array([p for p, _ in samples])
        s_s = np.sqrt([h for _, h in samples])
        if len(samples) >= 3:
            coefs = np.polyfit(p_s, s_s, 2)
            roots = np.roots(coefs)
            roots = roots[np.abs(roots.imag) < 1e-12].real
            cand = roots[roots > p_s.max() - 1e-12]
        else:
            cand = np.empty(0)
        if cand.size:
            points.append(float(cand.min()))
        else:
            # fall back to the linear law through the last two samples
            slope = (s_s[-1] - s_s[-2]) / (p_s[-1] - p_s[-2])
            points.append(float(p_s[-1] - s_s[-1] / slope))
    return np.asarray(sorted(points))
