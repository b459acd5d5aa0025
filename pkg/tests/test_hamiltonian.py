"""Sector Hamiltonians: couplings, exact entries, spin Casimir."""

import math
from fractions import Fraction

import numpy as np
import pytest

from hexstar.hamiltonian import (
    HEISENBERG,
    XXZ_FERRO,
    ModelParams,
    build_sector_hamiltonian,
    coupling,
    exact_coupling,
    heisenberg_casimir,
    total_coupling,
)
from hexstar.hilbert import sector_basis


def test_params_validation():
    with pytest.raises(ValueError):
        ModelParams(alpha=0.0, jz_over_j=1.0)
    with pytest.raises(ValueError):
        ModelParams(alpha=-2.0, jz_over_j=1.0)


def test_exact_capable():
    assert ModelParams(6.0, -3.0).exact_capable
    assert ModelParams(2.0, 0.5).exact_capable
    assert not ModelParams(3.0, 1.0).exact_capable
    assert not ModelParams(6.5, 1.0).exact_capable


def test_coupling_values(geometry):
    assert coupling(geometry, 0, 8, 6.0) == pytest.approx(1.0)
    assert coupling(geometry, 0, 1, 6.0) == pytest.approx(3.0 ** -3)
    assert coupling(geometry, 6, 9, 6.0) == pytest.approx(2.0 ** -6)
    assert exact_coupling(geometry, 0, 1, 6.0) == Fraction(1, 27)
    assert exact_coupling(geometry, 0, 3, 6.0) == Fraction(1, 12 ** 3)


def test_total_coupling(geometry):
    acc = sum(
        coupling(geometry, i, j, 6.0)
        for i in range(12) for j in range(i + 1, 12)
    )
    assert total_coupling(geometry, 6.0) == pytest.approx(acc, rel=1e-15)


def test_sector_matrices_are_symmetric():
    for M in (6, 5, 3, 0):
        ham = build_sector_hamiltonian(M, XXZ_FERRO)
        assert ham.matrix.shape == (sector_basis(M).dim,) * 2
        assert np.array_equal(ham.matrix, ham.matrix.T)


def test_polarized_sector_energy(geometry):
    # a single configuration with every spin up: purely diagonal energy
    for params in (HEISENBERG, XXZ_FERRO):
        ham = build_sector_hamiltonian(6, params)
        expected = params.jz_over_j * total_coupling(geometry, params.alpha)
        assert ham.matrix[0, 0] == pytest.approx(expected, rel=1e-13)


def test_known_exchange_entry(geometry):
    # flipping site 0 vs site 1: adjacent tips, squared separation 3
    ham = build_sector_hamiltonian(5, HEISENBERG)
    basis = sector_basis(5)
    k, l = basis.index_of[1 << 0], basis.index_of[1 << 1]
    assert ham.matrix[k, l] == pytest.approx(2.0 * 3.0 ** -3, rel=1e-15)


def test_exact_entries_match_floats():
    ham = build_sector_hamiltonian(4, XXZ_FERRO, exact=True)
    assert ham.exact is not None
    for (k, l), frac in ham.exact.items():
        assert ham.matrix[k, l] == pytest.approx(float(frac), rel=1e-15, abs=1e-18)
    # and the sparse dict covers every nonzero entry up to symmetry
    nz = {(min(k, l), max(k, l)) for k, l in zip(*np.nonzero(ham.matrix))}
    assert nz == {(min(k, l), max(k, l)) for k, l in ham.exact}


def test_exact_entries_skipped_when_disabled():
    assert build_sector_hamiltonian(3, XXZ_FERRO, exact=False).exact is None
    assert build_sector_hamiltonian(3, ModelParams(3.0, 1.0)).exact is None


def test_casimir_spectrum_in_one_flip_sector():
    # one state of total spin 6, eleven of total spin 5
    values = np.sort(np.linalg.eigvalsh(heisenberg_casimir(5)))
    assert values[:11] == pytest.approx(30.0, abs=1e-10)
    assert values[11] == pytest.approx(42.0, abs=1e-10)


def test_casimir_commutes_with_heisenberg_only():
    casimir = heisenberg_casimir(4)
    iso = build_sector_hamiltonian(4, HEISENBERG).matrix
    assert np.abs(iso @ casimir - casimir @ iso).max() < 1e-10
    aniso = build_sector_hamiltonian(4, XXZ_FERRO).matrix
    assert np.abs(aniso @ casimir - casimir @ aniso).max() > 1e-3


def test_sector_dimensions_guard():
    with pytest.raises(ValueError):
        build_sector_hamiltonian(7, HEISENBERG)
