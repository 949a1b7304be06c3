"""Shells (layers) of a lattice: all vectors of a given norm.

Norms are exact rationals in units of the lattice's ``gram`` (the symbolic
scale is applied only by the numerical engines).  Enumeration walks one
representative of each pair {x, -x}; ``Shell.vectors`` expands the pairs.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from fractions import Fraction
from math import floor, gamma, pi, sqrt
from typing import Iterator, TextIO

import numpy as np

from . import exact
from .enumeration import HalfVectorStream, count_half_vectors
from .errors import DomainError, ResourceError
from .lattice import GramMatrix, Lattice

DEFAULT_BUDGET = 10**7
# counts are kept per integer norm v = d * Q[x]; cap the array length
MAX_GRID = 1 << 24


@dataclass(frozen=True)
class Shell:
    """k-th layer.  ``half`` holds one vector per pair {x, -x}, or None."""

    index: int
    norm: Fraction
    cardinality: int
    half: np.ndarray | None = field(default=None, repr=False, compare=False)

    @property
    def has_vectors(self) -> bool:
        return self.half is not None

    @property
    def vectors(self) -> np.ndarray:
        """All vectors of the shell, sorted lexicographically."""
        if self.half is None:
            raise DomainError(f"shell {self.index} was enumerated without vectors")
        v = np.concatenate([self.half, -self.half]).astype(np.int64)
        order = np.lexsort(v.T[::-1])
        return v[order]


@dataclass(frozen=True)
class ShellList:
    lattice: str
    bound: Fraction
    shells: tuple[Shell, ...]

    def __len__(self) -> int:
        return len(self.shells)

    def __iter__(self) -> Iterator[Shell]:
        return iter(self.shells)

    def __getitem__(self, k: int) -> Shell:
        return self.shells[k]

    @property
    def norms(self) -> list[Fraction]:
        return [s.norm for s in self.shells]

    @property
    def counts(self) -> list[int]:
        return [s.cardinality for s in self.shells]

    @property
    def total(self) -> int:
        return sum(self.counts)


def _integer_bound(gram: GramMatrix, R) -> tuple[np.ndarray, int, int]:
    R = Fraction(R)
    if R <= 0:
        raise DomainError(f"shell bound must be positive, got {R}")
    M, d = gram.integer_matrix()
    Rint = floor(R * d)
    if Rint > MAX_GRID:
        raise ResourceError(f"norm grid of {Rint} steps (denominator {d}) is too fine to count on")
    return M, d, Rint


_COUNTS: dict[tuple, np.ndarray] = {}
# smallest radius known to exceed a budget, per Gram matrix: (Rint, budget)
_OVER: dict[tuple, tuple[int, int]] = {}


def _lookup_counts(gram: GramMatrix, Rint: int) -> np.ndarray | None:
    """Counts up to Rint from any cached run with a larger radius."""
    best = None
    for (key, r), arr in _COUNTS.items():
        if key == gram.entries and r >= Rint and (best is None or r < best[0]):
            best = (r, arr)
    return None if best is None else best[1][: Rint + 1]


def _store_counts(gram: GramMatrix, Rint: int, counts: np.ndarray) -> None:
    _COUNTS[(gram.entries, Rint)] = counts.copy()


def _volume_estimate(gram: GramMatrix, R: float) -> float:
    """Lattice points expected in the ball of norm R (volume over covolume)."""
    n = gram.n
    return pi ** (n / 2) / gamma(n / 2 + 1) * R ** (n / 2) / sqrt(float(gram.det))


def _counting_gram(gram: GramMatrix) -> GramMatrix:
    """A Gram matrix with the same norm multiset that is cheap to enumerate.

    For integral A of determinant 1, x -> Ax maps the norms of A onto those
    of A^-1, so either can be counted; take the one with smaller trace.
    """
    if gram.det != 1 or not gram.is_integral:
        return gram
    inv = gram.inverse
    if not inv.is_integral:
        return gram
    key = lambda g: (sum(g[i, i] for i in range(g.n)), g.entries)
    return min(gram, inv, key=key)


def half_counts(L: Lattice, R, budget: int = DEFAULT_BUDGET) -> np.ndarray:
    """counts[v] = half-vectors of integer norm v/d, for v <= floor(R d).

    ``d`` is ``L.gram.denominator``.  Cached per Gram matrix; raises a
    resource error if more than ``budget`` vectors lie in the ball.
    """
    gram = _counting_gram(L.gram)
    M, d, Rint = _integer_bound(gram, R)
    counts = _lookup_counts(gram, Rint)
    if counts is None and _volume_estimate(gram, Rint / d) > 2 * budget:
        raise ResourceError(f"about {_volume_estimate(gram, Rint / d):.3g} vectors of norm <= {R}; raise the vector budget")
    if counts is None:
        known = _OVER.get(gram.entries)
        if known is not None and known[0] <= Rint and known[1] >= budget:
            raise ResourceError(f"more than {budget} vectors of norm <= {R}; raise the vector budget")
        counts = count_half_vectors(M, Rint, limit=budget // 2)
        if counts is None:
            if known is None or Rint < known[0] or budget > known[1]:
                _OVER[gram.entries] = (Rint, budget)
            raise ResourceError(f"more than {budget} vectors of norm <= {R}; raise the vector budget")
        _store_counts(gram, Rint, counts)
    if 2 * int(counts.sum()) > budget:
        raise ResourceError(f"{2 * int(counts.sum())} vectors of norm <= {R} exceed the vector budget {budget}")
    return counts


def shell_counts(L: Lattice, R, budget: int = DEFAULT_BUDGET) -> ShellList:
    """Shell norms and cardinalities up to R, without vectors."""
    counts = half_counts(L, R, budget)
    d = L.gram.denominator
    shells = []
    for v in np.flatnonzero(counts):
        if v == 0:
            continue
        shells.append(Shell(len(shells) + 1, Fraction(int(v), d), 2 * int(counts[v])))
    return ShellList(L.name, Fraction(R), tuple(shells))


def stream_half_vectors(L: Lattice, R, budget: int = DEFAULT_BUDGET, chunk: int = 1 << 16):
    """Yield (X, v) chunks: half-vectors X (int32 rows) with norms v/d.

    Budget is checked with a counting pass first.  Completing the stream
    leaves the per-norm counts in the cache.
    """
    M, d, Rint = _integer_bound(L.gram, R)
    half_counts(L, R, budget)
    yield from HalfVectorStream(M, Rint, chunk)


def enumerate_shells(L: Lattice, R, budget: int = DEFAULT_BUDGET, keep_vectors: bool = True) -> ShellList:
    """All shells with norm <= R.  Vectors are kept unless asked otherwise."""
    if not keep_vectors:
        return shell_counts(L, R, budget)
    counts = half_counts(L, R, budget)
    d = L.gram.denominator
    norms = [int(v) for v in np.flatnonzero(counts) if v > 0]
    parts: dict[int, list[np.ndarray]] = {v: [] for v in norms}
    for X, v in stream_half_vectors(L, R, budget):
        for m in np.unique(v):
            parts[int(m)].append(X[v == m])
    shells = []
    for k, v in enumerate(norms, start=1):
        half = np.concatenate(parts[v]).astype(np.int64)
        half = half[np.lexsort(half.T[::-1])]
        shells.append(Shell(k, Fraction(v, d), 2 * len(half), half))
    return ShellList(L.name, Fraction(R), tuple(shells))


def _grid(gram: GramMatrix) -> Fraction:
    """Norms of integer vectors are multiples of this (1/d, or 2/d if even)."""
    M, d = gram.integer_matrix()
    g = 0
    for i in range(gram.n):
        g = np.gcd(g, int(M[i, i]))
        for j in range(i + 1, gram.n):
            g = np.gcd(g, 2 * int(M[i, j]))
    return Fraction(int(g), d)


def first_k_shells(L: Lattice, K: int, budget: int = DEFAULT_BUDGET, keep_vectors: bool = True) -> ShellList:
    """The first K shells, found by growing the radius until K norms appear."""
    if K < 1:
        raise DomainError(f"need K >= 1, got {K}")
    step = _grid(L.gram)
    R = min(L.gram[i, i] for i in range(L.n))
    while True:
        found = shell_counts(L, R, budget)
        if len(found) >= K:
            break
        grow = max(R / 2, step)
        while True:
            try:
                shell_counts(L, R + grow, budget)
                break
            except ResourceError:
                if grow <= step:
                    raise
                grow = max(step, Fraction(floor(grow / 2 / step)) * step)
        R = R + grow
    Rk = found.norms[K - 1]
    if not keep_vectors:
        return ShellList(L.name, Rk, found.shells[:K])
    return enumerate_shells(L, Rk, budget)


def min_norm(L: Lattice) -> Fraction:
    return first_k_shells(L, 1, keep_vectors=False)[0].norm


def kissing(L: Lattice) -> int:
    return first_k_shells(L, 1, keep_vectors=False)[0].cardinality


def write_shell_dump(shells: ShellList, out: TextIO, include_vectors: bool = False) -> None:
    """One record per shell: ``k m_k a_k`` then, optionally, its vectors."""
    out.write(f"# shells of {shells.lattice} up to norm {exact.format_rational(shells.bound)}\n")
    for s in shells:
        out.write(f"shell {s.index} {exact.format_rational(s.norm)} {s.cardinality}\n")
        if include_vectors:
            for v in s.vectors:
                out.write("  " + " ".join(str(int(c)) for c in v) + "\n")


def format_shell_dump(shells: ShellList, include_vectors: bool = False) -> str:
    buf = io.StringIO()
    write_shell_dump(shells, buf, include_vectors)
    return buf.getvalue()
