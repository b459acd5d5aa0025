"""Quench dynamics of measurement probabilities within magnetization sectors.

Times are measured in units of h/J, so a level pair split by |dE| = J
beats exactly once per unit of the dimensionless time.  The rescaled
probability of configuration f is

    p_f(t) = |sum_nu e^{-i 2 pi (E_nu/J) t} <c_f|nu><nu|psi0>|^2 / ||psi0||^2

with psi0 the sector component of the initial state.  Degenerate levels
are handled cluster-wise throughout: what counts is the projection of
psi0 onto each eigenvalue cluster, never individual eigenvectors of a
degenerate block, so every reported number is basis-choice free.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hilbert import StateVector, project_sector, sector_basis
from .hamiltonian import DEG_TOL_RELATIVE, ModelParams
from .spectrum import SUPPORT_TOL, SpectrumResult, diagonalize_sector, split_into_clusters

# Clusters with projection below this never matter against the 1e-10
# tolerances used downstream; dropping them keeps the mode sum small.
EVOLVE_FLOOR = 1e-13

CLASS_TOL = 1e-8          # entrywise tolerance when matching support rows
COLLAPSE_THRESHOLD = 0.1  # rescaled probability below which the peak has collapsed


@dataclass(frozen=True, eq=False)
class SpectralSupport:
    """Clusters of the sector spectrum that carry the initial state.

    ``entries`` holds one (first eigenindex, projection norm) pair per
    contributing cluster; ``dim`` is the support dimension delta_0.  The
    orthonormal ``basis`` spans the projections of psi0 onto those
    clusters (two columns per cluster when the state is genuinely
    complex), so basis @ basis.T is the support projector P0.
    """

    M: int
    entries: tuple[tuple[int, float], ...]
    energies: np.ndarray       # one per contributing cluster, units of J
    basis: np.ndarray          # (d, ncols) real orthonormal
    col_energy: np.ndarray     # (ncols,)
    coef: np.ndarray           # (ncols,) complex; P0 psi0 = basis @ coef
    support_tol: float

    @property
    def dim(self) -> int:
        return len(self.entries)


def _normalized_sector_state(
    state: StateVector, M: int
) -> tuple[np.ndarray, float]:
    if state.sector is None:
        component, weight = project_sector(state, M)
        if weight == 0.0:
            raise ValueError(f"initial state has no component in sector M={M}")
        return component.amps / np.sqrt(weight), weight
    if state.sector != M:
        raise ValueError(f"state lives in sector {state.sector}, not {M}")
    n = state.norm
    if n == 0.0:
        raise ValueError("cannot evolve the zero vector")
    return state.amps / n, n * n


def _cluster_modes(
    res: SpectrumResult, psi: np.ndarray, floor: float
) -> tuple[list[tuple[int, float]], list[float], list[np.ndarray], list[float], list[complex]]:
    """Per-cluster projections of psi, orthonormalized into real mode vectors."""
    entries = []
    energies = []
    cols: list[np.ndarray] = []
    col_energy: list[float] = []
    coef: list[complex] = []
    complex_state = np.iscomplexobj(psi)
    for cluster in res.clusters:
        block = res.eigenvectors[:, cluster.indices]
        z = block.T @ psi
        overlap = float(np.linalg.norm(z))
        if overlap <= floor:
            continue
        entries.append((int(cluster.indices[0]), overlap))
        energies.append(cluster.energy)
        proj = block @ z  # P_cluster psi, complex iff psi is
        parts = [np.asarray(proj.real)]
        if complex_state:
            parts.append(np.asarray(proj.imag))
        first_col = len(cols)
        for v in parts:
            w = v.copy()
            for k in range(first_col, len(cols)):
                w -= cols[k] * (cols[k] @ w)
            norm = float(np.linalg.norm(w))
            if norm <= floor:
                continue
            w /= norm
            cols.append(w)
            col_energy.append(cluster.energy)
            coef.append(complex(w @ proj))
    return entries, energies, cols, col_energy, coef


def spectral_support(
    state: StateVector,
    M: int,
    params: ModelParams,
    support_tol: float = SUPPORT_TOL,
    deg_tol_rel: float = DEG_TOL_RELATIVE,
) -> SpectralSupport:
    psi, _ = _normalized_sector_state(state, M)
    res = diagonalize_sector(M, params, deg_tol_rel)
    entries, energies, cols, col_energy, coef = _cluster_modes(res, psi, support_tol)
    basis = np.stack(cols, axis=1) if cols else np.zeros((res.dim, 0))
    return SpectralSupport(
        M=M,
        entries=tuple(entries),
        energies=np.array(energies),
        basis=basis,
        col_energy=np.array(col_energy),
        coef=np.array(coef, dtype=complex),
        support_tol=support_tol,
    )


@dataclass(frozen=True)
class FrequencyCount:
    formula: int    # delta0 * (delta0 - 1) / 2
    distinct: int   # numerically distinct |E_k - E_l| at the clustering tolerance


def frequency_count(support: SpectralSupport, deg_tol: float) -> FrequencyCount:
    n = support.dim
    formula = n * (n - 1) // 2
    e = support.energies
    diffs = np.abs(e[:, None] - e[None, :])[np.triu_indices(n, k=1)]
    distinct = len(split_into_clusters(np.sort(diffs), deg_tol))
    return FrequencyCount(formula=formula, distinct=distinct)


def equiprobability_classes(
    support: SpectralSupport, tol: float = CLASS_TOL
) -> tuple[np.ndarray, ...]:
    """Group outcomes whose support projections agree up to one global sign.

    Two configurations with P0|c_f> = +-P0|c_g> have identical rescaled
    probability trajectories for every time, so the class count N_p lower-
    bounds the number of distinct curves a measurement can follow.
    """
    rows = support.basis
    reps: list[np.ndarray] = []
    members: list[list[int]] = []
    for f in range(rows.shape[0]):
        r = rows[f]
        placed = False
        for k, rep in enumerate(reps):
            if np.max(np.abs(r - rep)) <= tol or np.max(np.abs(r + rep)) <= tol:
                members[k].append(f)
                placed = True
                break
        if not placed:
            reps.append(r)
            members.append([f])
    return tuple(np.array(m) for m in members)


@dataclass(frozen=True, eq=False)
class Trajectory:
    M: int
    params: ModelParams
    times: np.ndarray          # units of h/J
    probs: np.ndarray          # (d, T) rescaled within the sector
    sector_weight: float       # squared norm of the sector component
    support: SpectralSupport
    classes: tuple[np.ndarray, ...]
    freq: FrequencyCount

    @property
    def num_classes(self) -> int:
        return len(self.classes)


def _mode_amplitudes(
    cols: list[np.ndarray],
    col_energy: list[float],
    coef: list[complex],
    times: np.ndarray,
    dim: int,
) -> np.ndarray:
    if not cols:
        return np.zeros((dim, len(times)), dtype=complex)
    basis = np.stack(cols, axis=1)
    phase = np.exp(-2j * np.pi * np.outer(np.array(col_energy), times))
    return basis @ (np.array(coef, dtype=complex)[:, None] * phase)


def evolve_probabilities(
    state: StateVector,
    M: int,
    params: ModelParams,
    times: np.ndarray,
    support_tol: float = SUPPORT_TOL,
    deg_tol_rel: float = DEG_TOL_RELATIVE,
) -> Trajectory:
    """Rescaled probability of every sector configuration along a time grid."""
    psi, weight = _normalized_sector_state(state, M)
    res = diagonalize_sector(M, params, deg_tol_rel)

    entries, energies, cols, col_energy, coef = _cluster_modes(res, psi, EVOLVE_FLOOR)
    amps = _mode_amplitudes(cols, col_energy, coef, times, res.dim)
    probs = amps.real**2 + amps.imag**2

    keep = [k for k, (_, w) in enumerate(entries) if w > support_tol]
    kept_cols = [k for k, e in enumerate(col_energy)
                 if any(energies[j] == e for j in keep)]
    support = SpectralSupport(
        M=M,
        entries=tuple(entries[k] for k in keep),
        energies=np.array([energies[k] for k in keep]),
        basis=(np.stack([cols[k] for k in kept_cols], axis=1)
               if kept_cols else np.zeros((res.dim, 0))),
        col_energy=np.array([col_energy[k] for k in kept_cols]),
        coef=np.array([coef[k] for k in kept_cols], dtype=complex),
        support_tol=support_tol,
    )
    classes = equiprobability_classes(support)
    freq = frequency_count(support, res.deg_tol)
    return Trajectory(
        M=M,
        params=params,
        times=times,
        probs=probs,
        sector_weight=weight,
        support=support,
        classes=classes,
        freq=freq,
    )


def evolve_full(
    state: StateVector,
    params: ModelParams,
    times: np.ndarray,
    support_tol: float = SUPPORT_TOL,
    deg_tol_rel: float = DEG_TOL_RELATIVE,
) -> dict[int, np.ndarray]:
    """Evolve all sectors of a full state at once; rescaled probabilities per sector.

    One combined mode stack over the 4096-dimensional space, sliced back
    into sectors at the end.  Exists as an independent cross-check of the
    sector-by-sector path: the two must agree because the Hamiltonian
    never mixes magnetization sectors.
    """
    if state.sector is not None:
        raise ValueError("evolve_full expects a full-space state")
    out: dict[int, np.ndarray] = {}
    for M in range(-6, 7):
        basis = sector_basis(M)
        component, weight = project_sector(state, M)
        if weight == 0.0:
            continue
        res = diagonalize_sector(M, params, deg_tol_rel)
        _, _, cols, col_energy, coef = _cluster_modes(res, component.amps, EVOLVE_FLOOR)
        amps = _mode_amplitudes(cols, col_energy, coef, times, res.dim)
        out[M] = (amps.real**2 + amps.imag**2) / weight
    return out


def return_probability(
    state: StateVector,
    M: int,
    params: ModelParams,
    times: np.ndarray,
    deg_tol_rel: float = DEG_TOL_RELATIVE,
) -> np.ndarray:
    """|<psi0|psi(t)>|^2 for the normalized sector component of the state."""
    psi, _ = _normalized_sector_state(state, M)
    res = diagonalize_sector(M, params, deg_tol_rel)
    entries, energies, _, _, _ = _cluster_modes(res, psi, EVOLVE_FLOOR)
    weights = np.array([w * w for _, w in entries])
    phase = np.exp(-2j * np.pi * np.outer(np.array(energies), times))
    amp = weights @ phase
    return amp.real**2 + amp.imag**2


@dataclass(frozen=True)
class CollapseMetrics:
    initial_outcome: int            # argmax of the t=0 distribution
    initial_prob: float
    collapse_time: float | None     # first grid time below threshold, None if never
    threshold: float
    dominant: tuple[int, ...]       # outcomes whose peak clears 2x the third-largest
    tail_max: float                 # largest peak among the non-dominant outcomes


def collapse_metrics(
    traj: Trajectory, threshold: float = COLLAPSE_THRESHOLD
) -> CollapseMetrics:
    probs = traj.probs
    initial = int(np.argmax(probs[:, 0]))
    p0 = float(probs[initial, 0])

    collapse_time = None
    if p0 >= threshold:
        below = np.nonzero(probs[initial] < threshold)[0]
        if len(below):
            collapse_time = float(traj.times[below[0]])

    peaks = probs.max(axis=1)
    if len(peaks) >= 3:
        third = float(np.sort(peaks)[::-1][2])
        dominant = tuple(int(i) for i in np.nonzero(peaks > 2.0 * third)[0])
    else:
        dominant = tuple(int(i) for i in np.nonzero(peaks > 0.5)[0])
    rest = [float(peaks[i]) for i in range(len(peaks)) if i not in dominant]
    tail_max = max(rest) if rest else 0.0
    return CollapseMetrics(
        initial_outcome=initial,
        initial_prob=p0,
        collapse_time=collapse_time,
        threshold=threshold,
        dominant=dominant,
        tail_max=tail_max,
    )


def regime_classifier(traj: Trajectory, threshold: float = COLLAPSE_THRESHOLD) -> str:
    """One of "constant", "sinusoidal", "collapse", "aperiodic"."""
    if traj.freq.distinct == 0:
        return "constant"
    if traj.freq.distinct == 1:
        return "sinusoidal"
    if collapse_metrics(traj, threshold).collapse_time is not None:
        return "collapse"
    return "aperiodic"
