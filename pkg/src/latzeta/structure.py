"""Perfection and modularity checks on exact shell data."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import exact
from .errors import DomainError
from .lattice import Lattice, dual, rescaled
from .shells import DEFAULT_BUDGET, first_k_shells


@dataclass(frozen=True)
class PerfectionReport:
    rank: int
    full_rank: int
    minimal_vectors: int

    @property
    def perfect(self) -> bool:
        return self.rank == self.full_rank


def is_perfect(L: Lattice, budget: int = DEFAULT_BUDGET) -> PerfectionReport:
    """Rank of span{x x' : x minimal} inside the symmetric matrices."""
    shell = first_k_shells(L, 1, budget)[0]
    n = L.n
    rows = []
    for x in shell.half:
        x = [int(v) for v in x]
        rows.append([x[i] * x[j] for i in range(n) for j in range(i, n)])
    return PerfectionReport(exact.rank(rows), n * (n + 1) // 2, shell.cardinality)


def extremal_bound(n: int, level: int) -> int:
    return 2 * (1 + (n * (1 + level)) // 48)


@dataclass(frozen=True)
class ModularReport:
    level: int
    is_even: bool
    theta_match_depth: int
    depth: int
    extremal_bound: int
    min_norm: Fraction
    is_extremal: bool

    @property
    def shells_agree(self) -> bool:
        return self.theta_match_depth == self.depth


def modular_check(L: Lattice, level: int, depth: int = 5, budget: int = DEFAULT_BUDGET) -> ModularReport:
    """Evenness, shell agreement of L with sqrt(level) L*, extremal bound.

    Agreement of (m_k, a_k) for k <= depth is necessary for an isometry;
    it is what is checked here, nothing stronger.
    """
    if not L.gram.is_integral:
        raise DomainError("modular_check needs an integral Gram matrix")
    if level < 1 or depth < 1:
        raise DomainError("level and depth must be positive")
    mine = first_k_shells(L, depth, budget, keep_vectors=False)
    other = first_k_shells(rescaled(dual(L), level), depth, budget, keep_vectors=False)
    match = 0
    for a, b in zip(mine, other):
        if (a.norm, a.cardinality) != (b.norm, b.cardinality):
            break
        match += 1
    bound = extremal_bound(L.n, level)
    m1 = mine[0].norm
    return ModularReport(level, L.gram.is_even, match, depth, bound, m1, m1 == bound)
