"""Measurement-probability trajectories and their statistics."""

import math

import numpy as np
import pytest

from hexstar.analytic import gap
from hexstar.dynamics import (
    collapse_metrics,
    evolve_full,
    evolve_probabilities,
    regime_classifier,
    return_probability,
    spectral_support,
)
from hexstar.hamiltonian import HEISENBERG, XXZ_FERRO
from hexstar.hilbert import (
    basis_state,
    build_initial_state,
    parse_state_spec,
    project_sector,
    sector_basis,
)

# Spectral support dimensions per sector, M = 6 down to 0.  The in-plane
# state is evolved under the anisotropic model, the mixed-ring state under
# the isotropic one.
SUPPORT_XI_XXZ = (1, 2, 9, 24, 50, 76, 48)
SUPPORT_CHI_HEISENBERG = (1, 2, 9, 24, 50, 76, 90)


@pytest.fixture(scope="module")
def xi():
    return build_initial_state(parse_state_spec("xi"))


@pytest.fixture(scope="module")
def chi():
    return build_initial_state(parse_state_spec("chi"))


@pytest.fixture(scope="module")
def chi_balanced_trajectory(chi, unit_time_grid, heisenberg_spectra):
    return evolve_probabilities(chi, 0, HEISENBERG, unit_time_grid)


def test_support_dimensions(xi, chi, xxz_spectra, heisenberg_spectra):
    for M, expected in zip(range(6, -1, -1), SUPPORT_XI_XXZ):
        assert spectral_support(xi, M, XXZ_FERRO).dim == expected, M
    for M, expected in zip(range(6, -1, -1), SUPPORT_CHI_HEISENBERG):
        assert spectral_support(chi, M, HEISENBERG).dim == expected, M


def test_support_is_mirror_symmetric(xi):
    up = spectral_support(xi, 5, XXZ_FERRO)
    down = spectral_support(xi, -5, XXZ_FERRO)
    assert up.dim == down.dim
    assert up.energies == pytest.approx(down.energies, abs=1e-10)


def test_support_weights_resolve_unity(chi):
    support = spectral_support(chi, 3, HEISENBERG)
    total = sum(w**2 for _, w in support.entries)
    assert total == pytest.approx(1.0, abs=1e-12)


def test_trajectory_classes_match_support_dimension(xi, chi):
    # as many distinct trajectories as contributing eigenspaces
    times = np.linspace(0.0, 0.1, 11)
    for state, params in ((xi, XXZ_FERRO), (chi, HEISENBERG)):
        for M in (5, 4, 0):
            traj = evolve_probabilities(state, M, params, times)
            assert traj.num_classes == traj.support.dim, (M, params)


def test_frequency_counts(xi, chi):
    times = np.linspace(0.0, 0.1, 3)
    traj = evolve_probabilities(xi, 0, XXZ_FERRO, times)
    assert traj.freq.formula == 48 * 47 // 2 == 1128
    assert traj.freq.distinct == 1128
    traj = evolve_probabilities(chi, 0, HEISENBERG, times)
    assert traj.freq.formula == 90 * 89 // 2 == 4005
    assert traj.freq.distinct == 4005
    traj = evolve_probabilities(xi, 4, XXZ_FERRO, times)
    assert traj.freq.formula == traj.freq.distinct == 36


def test_probabilities_sum_to_one(xi):
    times = np.linspace(0.0, 1.0, 101)
    traj = evolve_probabilities(xi, 3, XXZ_FERRO, times)
    sums = traj.probs.sum(axis=0)
    assert sums == pytest.approx(np.ones_like(sums), abs=1e-12)


def test_class_members_share_one_trajectory(xi):
    times = np.linspace(0.0, 1.0, 101)
    traj = evolve_probabilities(xi, 4, XXZ_FERRO, times)
    for members in traj.classes:
        block = traj.probs[members]
        spread = np.abs(block - block[0]).max()
        assert spread < 1e-12


def test_xi_is_stationary_under_the_isotropic_model(xi):
    # equatorial product states are eigenstate mixtures with equal energy
    # inside each sector's symmetric block
    times = np.linspace(0.0, 1.0, 101)
    for M in (5, 2, 0):
        traj = evolve_probabilities(xi, M, HEISENBERG, times)
        d = sector_basis(M).dim
        assert np.abs(traj.probs - 1.0 / d).max() < 1e-12


def test_chi_one_flip_rabi_oscillation(chi):
    times = np.linspace(0.0, 1.0, 101)
    traj = evolve_probabilities(chi, 5, HEISENBERG, times)
    delta = gap(6.0, 1.0)
    outer = np.cos(math.pi * delta * times) ** 2 / 6.0
    inner = np.sin(math.pi * delta * times) ** 2 / 6.0
    basis = sector_basis(5)
    for k in range(6):
        assert traj.probs[basis.index_of[1 << k]] == pytest.approx(outer, abs=1e-12)
        assert traj.probs[basis.index_of[1 << (6 + k)]] == pytest.approx(inner, abs=1e-12)


def test_xi_one_flip_single_frequency(xi):
    times = np.linspace(0.0, 1.0, 11)
    traj = evolve_probabilities(xi, 5, XXZ_FERRO, times)
    assert traj.support.dim == 2
    assert traj.freq.distinct == 1
    e = traj.support.energies
    assert abs(e.max() - e.min()) == pytest.approx(gap(6.0, -3.0), rel=1e-12)
    assert regime_classifier(traj) == "sinusoidal"


def test_regime_constant(xi):
    times = np.linspace(0.0, 1.0, 11)
    traj = evolve_probabilities(xi, 6, XXZ_FERRO, times)
    assert traj.support.dim == 1
    assert regime_classifier(traj) == "constant"


def test_regime_aperiodic(xi, unit_time_grid):
    traj = evolve_probabilities(xi, 0, XXZ_FERRO, unit_time_grid)
    assert regime_classifier(traj) == "aperiodic"
    # bounded wandering: no outcome ever dominates
    assert traj.probs.max() < 0.065


def test_collapse_of_the_balanced_outer_state(chi_balanced_trajectory):
    traj = chi_balanced_trajectory
    metrics = collapse_metrics(traj)
    basis = sector_basis(0)
    assert basis.configs[metrics.initial_outcome] == 63
    assert metrics.initial_prob == pytest.approx(1.0, abs=1e-10)
    assert metrics.collapse_time == pytest.approx(0.034, abs=1e-9)
    assert metrics.dominant == (0, 923)
    assert basis.configs[923] == 4032  # the spin-flipped partner revives
    assert metrics.tail_max < 0.04
    assert regime_classifier(traj) == "collapse"


def test_trajectories_mirror_under_global_flip(xi):
    times = np.linspace(0.0, 1.0, 51)
    up = evolve_probabilities(xi, 4, XXZ_FERRO, times)
    down = evolve_probabilities(xi, -4, XXZ_FERRO, times)
    up_basis, down_basis = sector_basis(4), sector_basis(-4)
    rows = down_basis.index_of[up_basis.configs ^ 4095]
    assert np.abs(down.probs[rows] - up.probs).max() < 1e-12


def test_full_evolution_agrees_with_sector_evolution(chi):
    times = np.linspace(0.0, 1.0, 51)
    combined = evolve_full(chi, HEISENBERG, times)
    assert sorted(combined.keys()) == list(range(0, 7))
    for M, probs in combined.items():
        alone = evolve_probabilities(chi, M, HEISENBERG, times)
        assert np.abs(probs - alone.probs).max() < 1e-12


def test_return_probability_closed_form(chi):
    times = np.linspace(0.0, 1.0, 101)
    p = return_probability(chi, 5, HEISENBERG, times)
    delta = gap(6.0, 1.0)
    assert p == pytest.approx(np.cos(math.pi * delta * times) ** 2, abs=1e-12)
    assert p[0] == pytest.approx(1.0, abs=1e-13)


def test_support_tolerance_does_not_change_probabilities(chi):
    times = np.linspace(0.0, 0.5, 21)
    loose = evolve_probabilities(chi, 4, HEISENBERG, times, support_tol=0.3)
    tight = evolve_probabilities(chi, 4, HEISENBERG, times)
    # the support filter reshapes the reported statistics only
    assert np.abs(loose.probs - tight.probs).max() < 1e-15
    assert loose.support.dim <= tight.support.dim


def test_empty_sector_component_is_rejected(chi):
    with pytest.raises(ValueError):
        evolve_probabilities(chi, -2, HEISENBERG, np.linspace(0, 1, 5))


def test_configuration_state_return_is_not_instantly_lost():
    state = basis_state(63)
    times = np.array([0.0])
    p = return_probability(state, 0, HEISENBERG, times)
    assert p[0] == pytest.approx(1.0, abs=1e-13)
