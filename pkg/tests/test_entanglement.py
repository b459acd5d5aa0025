"""Schmidt ranks across bipartitions of the twelve sites."""

import math

import numpy as np
import pytest

from hexstar.entanglement import is_entangled, schmidt_number
from hexstar.hamiltonian import ModelParams
from hexstar.hilbert import (
    StateVector,
    basis_state,
    build_initial_state,
    parse_state_spec,
    sector_basis,
)
from hexstar.spectrum import diagonalize_sector

FULL_MASK = (1 << 12) - 1


def _embedded_ground_state(jz_over_j: float) -> StateVector:
    res = diagonalize_sector(0, ModelParams(6.0, jz_over_j))
    basis = sector_basis(0)
    amps = np.zeros(1 << 12)
    amps[basis.configs] = res.eigenvectors[:, 0]
    return StateVector(amps=amps, sector=None)


def test_configuration_states_are_products():
    report = is_entangled(basis_state(63))
    assert not report.entangled
    assert report.min_rank == report.max_rank == 1
    assert len(report.ranks) == (1 << 11) - 1


def test_factorized_states_are_products():
    for spec in ("xi", "chi", "zeta:0.7,0.3,2.1,5.0"):
        report = is_entangled(build_initial_state(parse_state_spec(spec)))
        assert not report.entangled, spec
        assert report.max_rank == 1


def test_singlet_pair_cuts():
    # a two-site singlet on the adjacent tips 0 and 1, everything else up
    amps = np.zeros(1 << 12)
    amps[1 << 0] = 1.0 / math.sqrt(2.0)
    amps[1 << 1] = -1.0 / math.sqrt(2.0)
    state = StateVector(amps=amps, sector=None)
    assert schmidt_number(state, 1 << 0) == 2       # separates the pair
    assert schmidt_number(state, (1 << 0) | (1 << 1)) == 1
    assert schmidt_number(state, 1 << 5) == 1       # spectator site
    report = is_entangled(state)
    assert report.entangled is False                # one product cut suffices
    assert report.min_rank == 1 and report.max_rank == 2


def test_rank_is_complement_invariant():
    rng = np.random.default_rng(41)
    amps = rng.normal(size=1 << 12)
    amps /= np.linalg.norm(amps)
    state = StateVector(amps=amps, sector=None)
    for mask in (0b1, 0b111000111, 0b10101010101):
        assert schmidt_number(state, mask) == schmidt_number(state, FULL_MASK ^ mask)


def test_random_state_is_heavily_entangled():
    rng = np.random.default_rng(42)
    amps = rng.normal(size=1 << 12)
    amps /= np.linalg.norm(amps)
    state = StateVector(amps=amps, sector=None)
    # a generic vector saturates the rank bound on every cut
    assert schmidt_number(state, 0b1) == 2
    assert schmidt_number(state, 0b111111) == 64


def test_balanced_ground_states_are_entangled():
    for jz in (0.0, 1.0, 3.0):
        report = is_entangled(_embedded_ground_state(jz))
        assert report.entangled, jz
        assert report.min_rank >= 2


def test_heisenberg_ground_state_ranks():
    report = is_entangled(_embedded_ground_state(1.0))
    assert report.min_rank == 2
    assert report.max_rank == 64


def test_mask_bounds_are_enforced():
    state = basis_state(0)
    for bad in (0, FULL_MASK, -1, 1 << 12):
        with pytest.raises(ValueError):
            schmidt_number(state, bad)


def test_sector_states_are_rejected():
    sector_state = StateVector(amps=np.ones(12) / math.sqrt(12.0), sector=5)
    with pytest.raises(ValueError):
        schmidt_number(sector_state, 1)
