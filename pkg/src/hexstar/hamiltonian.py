"""XXZ Hamiltonian with power-law couplings, assembled per magnetization sector.

In units of the transverse coupling J,

    H/J = sum_{i<j} d_ij^{-alpha} [ (sx_i sx_j + sy_i sy_j) + (Jz/J) sz_i sz_j ]

with Pauli matrices s and distances in units of the nearest-neighbour
spacing.  Squared distances are exact integers, so for even alpha every
matrix element is a rational number; the exact assembly keeps them as
Fractions for cross-checking the floating-point path.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .lattice import N_SITES, Geometry, build_geometry
from .hilbert import SectorBasis, sector_basis

DEG_TOL_RELATIVE = 1e-8   # default eigenvalue clustering tolerance, times the spread


@dataclass(frozen=True)
class ModelParams:
    alpha: float = 6.0
    jz_over_j: float = 1.0

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError("alpha must be positive")

    @property
    def exact_capable(self) -> bool:
        return float(self.alpha).is_integer() and int(self.alpha) % 2 == 0


HEISENBERG = ModelParams(alpha=6.0, jz_over_j=1.0)
XXZ_FERRO = ModelParams(alpha=6.0, jz_over_j=-3.0)


def coupling(geometry: Geometry, i: int, j: int, alpha: float) -> float:
    """Distance-power coupling d_ij^-alpha in units of J."""
    if i == j:
        raise ValueError("coupling needs two distinct sites")
    return float(geometry.distance_sq[i, j]) ** (-alpha / 2.0)


def exact_coupling(geometry: Geometry, i: int, j: int, alpha: float) -> Fraction:
    if not (float(alpha).is_integer() and int(alpha) % 2 == 0):
        raise ValueError("exact couplings need an even integer alpha")
    return Fraction(1, int(geometry.distance_sq[i, j]) ** (int(alpha) // 2))


def total_coupling(geometry: Geometry, alpha: float) -> float:
    """Sum of couplings over all pairs; the ferromagnet energy is (Jz/J) times this."""
    return sum(
        coupling(geometry, i, j, alpha)
        for i in range(N_SITES) for j in range(i + 1, N_SITES)
    )


@dataclass(frozen=True, eq=False)
class SectorHamiltonian:
    M: int
    params: ModelParams
    matrix: np.ndarray  # (d, d) float64, units of J
    exact: dict[tuple[int, int], Fraction] | None  # sparse entries, same units

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def _site_z(configs: np.ndarray) -> np.ndarray:
    """(d, 12) array of sz eigenvalues +-1 per configuration."""
    bits = (configs[:, None] >> np.arange(N_SITES)[None, :]) & 1
    return 1 - 2 * bits


_PAIRS = tuple((i, j) for i in range(N_SITES) for j in range(i + 1, N_SITES))


@lru_cache(maxsize=96)
def _float_matrix(M: int, params: ModelParams) -> np.ndarray:
    geometry = build_geometry()
    basis = sector_basis(M)
    configs = basis.configs
    d = basis.dim
    weights = np.array([coupling(geometry, i, j, params.alpha) for i, j in _PAIRS])

    z = _site_z(configs)
    zz = np.stack([z[:, i] * z[:, j] for i, j in _PAIRS], axis=1)
    matrix = np.zeros((d, d))
    np.fill_diagonal(matrix, params.jz_over_j * (zz @ weights))

    # Transverse part: sx sx + sy sy exchanges one up-down pair, element 2w.
    for a in range(d):
        f = int(configs[a])
        for k, (i, j) in enumerate(_PAIRS):
            if ((f >> i) & 1) != ((f >> j) & 1):
                g = f ^ (1 << i) ^ (1 << j)
                b = int(basis.index_of[g])
                if b > a:
                    matrix[a, b] = matrix[b, a] = 2.0 * weights[k]
    matrix.flags.writeable = False
    return matrix


@lru_cache(maxsize=16)
def _exact_entries(M: int, params: ModelParams) -> dict[tuple[int, int], Fraction]:
    geometry = build_geometry()
    basis = sector_basis(M)
    configs = basis.configs
    jz = Fraction(params.jz_over_j)
    wx = [exact_coupling(geometry, i, j, params.alpha) for i, j in _PAIRS]

    entries: dict[tuple[int, int], Fraction] = {}
    for a in range(basis.dim):
        f = int(configs[a])
        diag = Fraction(0)
        for k, (i, j) in enumerate(_PAIRS):
            bi = (f >> i) & 1
            if bi == ((f >> j) & 1):
                diag += wx[k]
            else:
                diag -= wx[k]
                b = int(basis.index_of[f ^ (1 << i) ^ (1 << j)])
                if b > a:
                    entries[(a, b)] = entries[(b, a)] = 2 * wx[k]
        entries[(a, a)] = jz * diag
    return entries


def build_sector_hamiltonian(
    M: int, params: ModelParams, exact: bool | None = None
) -> SectorHamiltonian:
    """Dense sector block of H/J.

    ``exact`` controls the rational assembly: None enables it exactly when
    alpha is an even integer, True insists on it, False skips it (the
    floating matrix is all the eigensolvers need).
    """
    if exact is None:
        exact = params.exact_capable
    return SectorHamiltonian(
        M=M,
        params=params,
        matrix=_float_matrix(M, params),
        exact=_exact_entries(M, params) if exact else None,
    )


def exact_entry(ham: SectorHamiltonian, a: int, b: int) -> Fraction:
    if ham.exact is None:
        raise ValueError("sector was assembled without exact rationals")
    return ham.exact.get((a, b), Fraction(0))


@lru_cache(maxsize=16)
def heisenberg_casimir(M: int) -> np.ndarray:
    """Total-spin Casimir S^2 in the sector basis; eigenvalues are S(S+1)."""
    basis = sector_basis(M)
    configs = basis.configs
    d = basis.dim
    z = _site_z(configs)

    s2 = np.zeros((d, d))
    # S^2 = 3N/4 + sum_{i<j} (2 sz_i sz_j + flip-flop), spin-1/2 operators.
    zz_sum = np.einsum("ai,aj->a", z, z) - N_SITES  # sum_{i != j} z_i z_j
    np.fill_diagonal(s2, 3.0 * N_SITES / 4.0 + zz_sum / 4.0)
    for a in range(d):
        f = int(configs[a])
        for i in range(N_SITES):
            for j in range(i + 1, N_SITES):
                if ((f >> i) & 1) != ((f >> j) & 1):
                    b = int(basis.index_of[f ^ (1 << i) ^ (1 << j)])
                    if b > a:
                        s2[a, b] = s2[b, a] = 1.0
    s2.flags.writeable = False
    return s2
