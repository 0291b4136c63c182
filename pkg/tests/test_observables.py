import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pairpump.grid import C2, LAMBDA_C, make_grid
from pairpump.free_basis import NEGATIVE, POSITIVE, build_basis
from pairpump.observables import (
    DensityProfile,
    OverlapMatrix,
    electron_density,
    in_well_number,
    overlap_matrix,
    pair_number,
    positron_density,
    pump_rate,
    window_density,
    window_indices,
)
from pairpump.potential import WidthOscillation
from pairpump.propagator import propagate_modes

GRID = make_grid(64, 2.5)
POS = build_basis(GRID, 24, POSITIVE)
NEG = build_basis(GRID, 24, NEGATIVE)


def random_unitary_mixed_states(seed=0, n_modes=24):
    """Negative modes rotated by a random unitary: physical evolved states."""
    rng = np.random.default_rng(seed)
    dim = 2 * GRID.n_z
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, _ = np.linalg.qr(a)
    flat = NEG.fields.reshape(len(NEG), -1)
    mixed = flat @ q.T[:dim, :dim]
    # renormalize: q acts on the full space, keep exact unit norms
    norms = np.sqrt(GRID.dz * np.sum(np.abs(mixed) ** 2, axis=1))
    mixed = mixed / norms[:, None]
    return mixed.reshape(len(NEG), 2, GRID.n_z)[:n_modes]


def test_initial_overlaps_vanish():
    u = overlap_matrix(NEG.fields, POS, t=0.0)
    assert np.max(np.abs(u.values)) < 1e-10
    assert pair_number(u) < 1e-10


def test_overlap_of_positive_mode_is_unit_row():
    evolved = NEG.fields.copy()
    evolved[3] = POS.fields[7]
    u = overlap_matrix(evolved, POS)
    col = u.values[:, 3]
    assert abs(col[7] - 1.0) < 1e-10
    col[7] = 0.0
    assert np.max(np.abs(col)) < 1e-10


def test_overlap_matrix_validates_magnitudes():
    bad = np.zeros((3, 3), dtype=complex)
    bad[0, 0] = 1.5
    with pytest.raises(ValueError):
        OverlapMatrix(bad, 0.0)
    bad = np.full((4, 1), 0.6 + 0j)
    with pytest.raises(ValueError):
        OverlapMatrix(bad, 0.0)


def test_pair_number_trivial():
    assert pair_number(OverlapMatrix(np.zeros((4, 4), dtype=complex), 0.0)) == 0.0
    u = np.zeros((4, 4), dtype=complex)
    u[1, 2] = 0.3 + 0.4j
    assert pair_number(OverlapMatrix(u, 0.0)) == pytest.approx(0.25, rel=1e-14)


def test_single_entry_densities():
    u = np.zeros((len(POS), len(NEG)), dtype=complex)
    u[5, 2] = 1.0
    m = OverlapMatrix(u, 0.0)
    el = electron_density(m, POS)
    po = positron_density(m, NEG)
    assert np.allclose(el.values, np.sum(np.abs(POS.fields[5]) ** 2, axis=0), atol=1e-14)
    assert np.allclose(po.values, np.sum(np.abs(NEG.fields[2]) ** 2, axis=0), atol=1e-14)
    assert el.total() == pytest.approx(1.0, rel=1e-12)
    assert po.total() == pytest.approx(1.0, rel=1e-12)


def test_three_way_consistency_on_mixed_states():
    states = random_unitary_mixed_states()
    u = overlap_matrix(states, POS)
    n = pair_number(u)
    el = electron_density(u, POS).total()
    po = positron_density(u, NEG).total()
    scale = max(n, 1e-30)
    assert abs(el - n) < 1e-8 * scale
    assert abs(po - n) < 1e-8 * scale


def test_densities_nonnegative():
    states = random_unitary_mixed_states(seed=3)
    u = overlap_matrix(states, POS)
    assert np.min(electron_density(u, POS).values) >= -1e-12
    assert np.min(positron_density(u, NEG).values) >= -1e-12


def test_window_density_matches_full_profile():
    states = random_unitary_mixed_states(seed=5)
    u = overlap_matrix(states, POS)
    idx, _ = window_indices(GRID, 5 * LAMBDA_C)
    full = electron_density(u, POS)
    assert np.allclose(window_density(u, POS, idx, "electron"), full.values[idx], atol=1e-12)
    full_po = positron_density(u, NEG)
    assert np.allclose(window_density(u, NEG, idx, "positron"), full_po.values[idx], atol=1e-12)


def test_monotone_positive_truncation():
    """More projection modes never decrease the pair count."""
    drive = WidthOscillation(depth=2.53 * C2, width_max=10 * LAMBDA_C, omega=0.3 * C2)
    states = propagate_modes(NEG.fields.copy(), GRID, drive, 0, 60, 1e-6)
    counts = []
    for n_keep in (8, 16, 24, 40):
        basis = build_basis(GRID, n_keep, POSITIVE)
        counts.append(pair_number(overlap_matrix(states, basis)))
    assert all(b >= a - 1e-12 for a, b in zip(counts, counts[1:]))


def test_global_phase_invariance():
    states = random_unitary_mixed_states(seed=11)
    u1 = overlap_matrix(states, POS)
    phased = states * np.exp(1j * 0.8137)
    u2 = overlap_matrix(phased, POS)
    assert abs(pair_number(u1) - pair_number(u2)) < 1e-12 * max(pair_number(u1), 1.0)
    assert np.allclose(electron_density(u1, POS).values, electron_density(u2, POS).values, atol=1e-12)
    assert np.allclose(positron_density(u1, NEG).values, positron_density(u2, NEG).values, atol=1e-12)


def test_in_well_number_basic():
    zero = DensityProfile(GRID, np.zeros(GRID.n_z), "electron", 0.0)
    assert in_well_number(zero) == 0.0
    flat = DensityProfile(GRID, np.ones(GRID.n_z), "electron", 0.0)
    idx, bounds = window_indices(GRID, 5 * LAMBDA_C)
    assert in_well_number(flat, 5 * LAMBDA_C) == pytest.approx(GRID.dz * len(idx), rel=1e-12)
    assert bounds[0] >= -5 * LAMBDA_C - GRID.dz
    total = in_well_number(flat, 1.2)
    assert 0.0 <= total <= flat.total() + 1e-12


def test_in_well_number_rejects_big_window():
    flat = DensityProfile(GRID, np.ones(GRID.n_z), "electron", 0.0)
    with pytest.raises(ValueError):
        in_well_number(flat, 2.0)


def test_pump_rate_values():
    assert pump_rate(2.0, 2.0) == 0.0
    assert pump_rate(2.0, 0.0) == 1.0
    assert pump_rate(0.0, 0.0) is None
    with pytest.raises(ValueError):
        pump_rate(1.0, 1.5)


@settings(max_examples=50, deadline=None)
@given(st.floats(1e-9, 1e3), st.floats(0.0, 1.0))
def test_pump_rate_bounded(total, frac):
    rate = pump_rate(total, frac * total)
    assert rate is not None
    assert -1e-12 <= rate <= 1.0 + 1e-12
