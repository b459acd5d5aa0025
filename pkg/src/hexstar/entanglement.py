"""Schmidt numbers over all bipartitions of the 12 sites.

A bipartition is a 12-bit mask: bit i set puts site i in part B.  A pure
state is a product over the cut iff the reshaped amplitude matrix has
exactly one singular value above the (relative) noise floor; it is
entangled outright iff every one of the 2^11 - 1 inequivalent cuts has
Schmidt rank at least two.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lattice import N_SITES
from .hilbert import N_CONFIGS, StateVector

SVD_TOL = 1e-10  # relative threshold on singular values

_ALL = np.arange(N_CONFIGS)


def _gather_bits(mask: int) -> tuple[np.ndarray, np.ndarray, int, int]:
    """Row (part A) and column (part B) index of every configuration."""
    a_sites = [i for i in range(N_SITES) if not (mask >> i) & 1]
    b_sites = [i for i in range(N_SITES) if (mask >> i) & 1]
    rows = np.zeros(N_CONFIGS, dtype=np.int64)
    cols = np.zeros(N_CONFIGS, dtype=np.int64)
    for k, site in enumerate(a_sites):
        rows |= ((_ALL >> site) & 1) << k
    for k, site in enumerate(b_sites):
        cols |= ((_ALL >> site) & 1) << k
    return rows, cols, len(a_sites), len(b_sites)


def schmidt_number(state: StateVector, mask: int, tol: float = SVD_TOL) -> int:
    """Schmidt rank of a full-space state across the bipartition ``mask``."""
    if state.sector is not None:
        raise ValueError("schmidt_number expects a full-space state")
    if not 0 < mask < N_CONFIGS - 1:
        raise ValueError("mask must put at least one site on each side")
    rows, cols, n_a, n_b = _gather_bits(mask)
    matrix = np.zeros((1 << n_a, 1 << n_b), dtype=state.amps.dtype)
    matrix[rows, cols] = state.amps
    sv = np.linalg.svd(matrix, compute_uv=False)
    return int(np.count_nonzero(sv > tol * sv[0]))


@dataclass(frozen=True)
class EntanglementReport:
    entangled: bool       # rank >= 2 across every cut
    min_rank: int
    max_rank: int
    ranks: dict[int, int]  # mask -> Schmidt rank, site 11 always in part A


def is_entangled(state: StateVector, tol: float = SVD_TOL) -> EntanglementReport:
    """Scan the 2^11 - 1 distinct bipartitions (complement cuts coincide)."""
    ranks = {}
    for mask in range(1, 1 << (N_SITES - 1)):
        ranks[mask] = schmidt_number(state, mask, tol)
    values = ranks.values()
    return EntanglementReport(
        entangled=min(values) >= 2,
        min_rank=min(values),
        max_rank=max(values),
        ranks=ranks,
    )
