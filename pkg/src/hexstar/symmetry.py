"""Point-group bookkeeping on the sector bases.

Characters of the signed permutation action, irrep multiplicities per
magnetization sector, total-spin multiplet counts, and projectors onto the
six irreps that survive the trivial horizontal mirror.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import lattice
from .lattice import CharacterTable, GroupElement
from .hilbert import StateVector, _config_map, act_permutation, sector_basis

INT_TOL = 1e-9   # multiplicities and projector traces must be integers to this


@lru_cache(maxsize=1)
def _group() -> tuple[GroupElement, ...]:
    return lattice.build_group(lattice.build_geometry())


@lru_cache(maxsize=1)
def _chartable() -> CharacterTable:
    return lattice.character_table()


def sector_character(g: GroupElement, M: int) -> int:
    """Trace of the signed permutation action of g on the sector basis."""
    basis = sector_basis(M)
    cmap = _config_map(g.perm)
    fixed = int(np.count_nonzero(cmap[basis.configs] == basis.configs))
    return g.parity * fixed


@dataclass(frozen=True)
class IrrepCountTable:
    """counts[irrep][M] = multiplicity of the irrep in sector M.

    For the two-dimensional irreps this is the number of copies; each copy
    contributes two basis states, which is how the dimension sum rule
    sum_r dim(r) * counts[r][M] recovers the sector dimension.
    """

    counts: dict[str, dict[int, int]]

    def dimension_check(self, M: int) -> int:
        dims = _chartable().dims
        return sum(dims[r] * self.counts[r][M] for r in self.counts)


@dataclass(frozen=True)
class MultipletTable:
    """multiplets[irrep][S] = number of total-spin-S multiplets of that irrep."""

    multiplets: dict[str, dict[int, int]]


@lru_cache(maxsize=1)
def irrep_counts() -> IrrepCountTable:
    group = _group()
    ct = _chartable()
    counts: dict[str, dict[int, int]] = {r: {} for r in ct.irreps}
    for M in range(-6, 7):
        chars = {g: sector_character(g, M) for g in group}
        for r in ct.irreps:
            total = sum(ct.chi(r, g.class_label) * chars[g] for g in group)
            n = total / len(group)
            if abs(n - round(n)) > INT_TOL:
                raise RuntimeError(f"non-integer multiplicity for {r}, M={M}: {n}")
            counts[r][M] = int(round(n))
    return IrrepCountTable(counts=counts)


@lru_cache(maxsize=1)
def multiplet_counts() -> MultipletTable:
    """Resolve sector multiplicities into total-spin multiplets.

    A spin-S multiplet shows up once in every sector |M| <= S, so the
    number of S multiplets is the count at M=S minus the count at M=S+1.
    """
    counts = irrep_counts().counts
    multiplets: dict[str, dict[int, int]] = {}
    for r, by_m in counts.items():
        multiplets[r] = {}
        for S in range(0, 7):
            above = by_m[S + 1] if S + 1 <= 6 else 0
            n = by_m[S] - above
            if n < 0:
                raise RuntimeError(f"negative multiplet count for {r}, S={S}")
            multiplets[r][S] = n
    return MultipletTable(multiplets=multiplets)


@lru_cache(maxsize=64)
def irrep_projector(irrep: str, M: int) -> np.ndarray:
    """Dense projector onto the irrep component of the sector."""
    group = _group()
    ct = _chartable()
    basis = sector_basis(M)
    d = basis.dim
    proj = np.zeros((d, d))
    scale = ct.dims[irrep] / len(group)
    cols = np.arange(d)
    for g in group:
        rows = basis.index_of[_config_map(g.perm)[basis.configs]]
        proj[rows, cols] += scale * ct.chi(irrep, g.class_label) * g.parity
    trace = float(np.trace(proj))
    expected = ct.dims[irrep] * irrep_counts().counts[irrep][M]
    if abs(trace - expected) > 1e-8:
        raise RuntimeError(f"projector trace {trace} != {expected} for {irrep}, M={M}")
    proj.flags.writeable = False
    return proj


def irrep_weights(vectors: np.ndarray, M: int) -> dict[str, np.ndarray]:
    """Squared projection norms per irrep for each column of ``vectors``.

    Uses <v|P|v> with P idempotent, evaluated as a character sum over the
    24 group elements instead of materializing the projectors.
    """
    group = _group()
    ct = _chartable()
    basis = sector_basis(M)
    out = {}
    overlaps = {}
    for g in group:
        rows = basis.index_of[_config_map(g.perm)[basis.configs]]
        overlaps[g] = g.parity * np.einsum("af,af->f", vectors[rows], vectors)
    for r in ct.irreps:
        acc = sum(ct.chi(r, g.class_label) * overlaps[g] for g in group)
        out[r] = (ct.dims[r] / len(group)) * acc
    return out


def label_eigenvector(vector: np.ndarray, M: int, pure_tol: float = 0.999) -> str | None:
    """Irrep of an eigenvector, or None when no single irrep dominates."""
    weights = irrep_weights(vector[:, None], M)
    for r, w in weights.items():
        if w[0] > pure_tol**2:
            return r
    return None


def classify_factorized_state(state: StateVector) -> dict[str, float]:
    """Eigenvalue of each group element class on a (normalized) state.

    A two-ring product state is mapped to itself up to a sign by every
    element; the pattern of signs over the twelve classes identifies the
    one-dimensional irrep it carries.  Raises if some element fails to
    reproduce the state up to a scalar.
    """
    amps = state.amps / np.linalg.norm(state.amps)
    normalized = StateVector(amps=amps, sector=state.sector)
    signature: dict[str, float] = {}
    for g in _group():
        moved = act_permutation(g, normalized)
        lam = complex(np.vdot(amps, moved.amps))
        residual = float(np.linalg.norm(moved.amps - lam * amps))
        if residual > 1e-10:
            raise ValueError(f"state is not symmetry-adapted: element {g.name} "
                             f"moves it (residual {residual:.2e})")
        value = float(lam.real)
        prev = signature.get(g.class_label)
        if prev is not None and abs(prev - value) > 1e-10:
            raise ValueError(f"inconsistent eigenvalues within class {g.class_label}")
        signature[g.class_label] = value
    return signature


def identify_one_dim_irrep(signature: dict[str, float]) -> str:
    """Match a class-eigenvalue signature against the 1D irrep characters."""
    ct = _chartable()
    for r in ct.irreps:
        if ct.dims[r] != 1:
            continue
        if all(abs(signature[c] - ct.chi(r, c)) < 1e-8 for c in ct.classes):
            return r
    raise ValueError("signature does not match any retained one-dimensional irrep")
