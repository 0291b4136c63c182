import math

import numpy as np
import pytest

from pairpump.grid import C, C2, inner_product, make_grid
from pairpump.free_basis import NEGATIVE, POSITIVE, build_basis, free_energy, make_mode


def test_free_energy_rest():
    assert free_energy(0.0, POSITIVE) == pytest.approx(C2, rel=1e-12)
    assert math.isclose(free_energy(0.0, POSITIVE), 18778.865, rel_tol=1e-7)
    assert free_energy(0.0, NEGATIVE) == pytest.approx(-C2, rel=1e-12)


def test_free_energy_at_momentum_c():
    # frozen from the dispersion formula at k = c
    assert free_energy(C, POSITIVE) == pytest.approx(math.sqrt(2.0) * C2, rel=1e-12)
    assert math.isclose(free_energy(C, POSITIVE), 26557.4, rel_tol=1e-5)


def test_free_energy_rejects_bad_branch():
    with pytest.raises(ValueError):
        free_energy(1.0, 2)


def test_zero_momentum_spinors():
    grid = make_grid(32, 2.5)
    pos = make_mode(grid, 0.0, POSITIVE)
    expected = 1.0 / math.sqrt(grid.box_length)
    assert np.allclose(pos.upper, expected)
    assert np.allclose(pos.lower, 0.0)
    neg = make_mode(grid, 0.0, NEGATIVE)
    assert np.allclose(neg.upper, 0.0)
    assert np.allclose(neg.lower, expected)


def test_branch_orthogonality_any_momentum():
    grid = make_grid(32, 2.5)
    for k in grid.momenta[:6]:
        a = make_mode(grid, k, POSITIVE)
        b = make_mode(grid, k, NEGATIVE)
        assert abs(inner_product(a, b)) < 1e-12


def test_make_mode_rejects_off_lattice():
    grid = make_grid(32, 2.5)
    with pytest.raises(ValueError):
        make_mode(grid, 0.37 * grid.momenta[1], POSITIVE)


def test_mode_is_hamiltonian_eigenstate():
    """Applying the free Hamiltonian spectrally reproduces E psi."""
    grid = make_grid(64, 2.5)
    for k, branch in ((grid.momenta[5], POSITIVE), (grid.momenta[9], NEGATIVE), (0.0, NEGATIVE)):
        psi = make_mode(grid, k, branch)
        ft = np.fft.fft(psi.data, axis=-1)
        h_psi = np.fft.ifft(np.stack([C * grid.momenta * ft[1] + C2 * ft[0],
                                      C * grid.momenta * ft[0] - C2 * ft[1]]), axis=-1)
        e = free_energy(k, branch)
        assert np.max(np.abs(h_psi - e * psi.data)) < 1e-9 * abs(e) * np.max(np.abs(psi.data))


def test_build_basis_ordering_small():
    grid = make_grid(8, 2.5)
    basis = build_basis(grid, 3, NEGATIVE)
    assert [m.dft_index for m in basis.modes] == [0, 1, -1]


def test_build_basis_full_branch():
    grid = make_grid(16, 2.5)
    basis = build_basis(grid, 16, POSITIVE)
    assert sorted(m.dft_index for m in basis.modes) == sorted(grid.dft_indices.tolist())


def test_build_basis_truncation_momentum_window():
    grid = make_grid(2048, 2.5)
    basis = build_basis(grid, 1024, NEGATIVE)
    k_cut = 2 * math.pi * 512 / 2.5
    assert max(abs(m.momentum) for m in basis.modes) <= k_cut + 1e-9
    assert len(basis) == 1024


def test_build_basis_rejects_oversize():
    grid = make_grid(16, 2.5)
    with pytest.raises(ValueError):
        build_basis(grid, 17, POSITIVE)


def test_basis_orthonormal():
    grid = make_grid(32, 2.5)
    basis = build_basis(grid, 32, POSITIVE)
    flat = basis.fields.reshape(len(basis), -1)
    gram = grid.dz * (flat.conj() @ flat.T)
    assert np.max(np.abs(gram - np.eye(len(basis)))) < 1e-10


def test_completeness_both_branches():
    """Positive plus negative full bases form a unitary change of basis."""
    grid = make_grid(16, 2.5)
    pos = build_basis(grid, 16, POSITIVE)
    neg = build_basis(grid, 16, NEGATIVE)
    stacked = np.concatenate([pos.fields, neg.fields]).reshape(2 * grid.n_z, -1)
    b = math.sqrt(grid.dz) * stacked.T
    assert np.max(np.abs(b.conj().T @ b - np.eye(2 * grid.n_z))) < 1e-10


def test_basis_field_accessor_matches_make_mode():
    grid = make_grid(16, 2.5)
    basis = build_basis(grid, 5, NEGATIVE)
    for i, mode in enumerate(basis.modes):
        direct = make_mode(grid, mode.momentum, NEGATIVE)
        assert np.allclose(basis.field(i).data, direct.data, atol=1e-14)
