"""Fincke-Pohst enumeration of one representative of each pair {x, -x}.

The search is pruned with a floating LDL' factorisation whose radius is
inflated by a relative 1e-9; acceptance and norms come from exact int64
arithmetic on the integer-scaled Gram matrix, so no vector is misfiled.
Centers are kept as partial sums per level and only the stale tail is
recomputed after a coordinate moves.  The kernel is resumable: it fills a
fixed-size buffer, returns, and picks up where it stopped on the next call.
Output order is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

import numba
import numpy as np

_INFLATE = 1e-9


@numba.njit(cache=True)
def _descend(i, n, G, mu, qd, Rf, x, hi, sigF, sigI, rr, T, P):
    """Prepare level i (bounds and start value) given x[i+1:]."""
    top = rr[i]
    for j in range(top, i, -1):
        sigF[i, j] = sigF[i, j + 1] - mu[i, j] * x[j]
        sigI[i, j] = sigI[i, j + 1] + G[i, j] * x[j]
    if i > 0 and rr[i - 1] < top:
        rr[i - 1] = top
    rr[i] = i
    ci = sigF[i, i + 1]
    rem = Rf - T[i + 1]
    if rem < 0.0:
        x[i] = 1
        hi[i] = 0
        return
    r = np.sqrt(rem / qd[i])
    lo = np.int64(np.ceil(ci - r))
    h = np.int64(np.floor(ci + r))
    if P[i + 1] == 0:
        floor_ = 1 if i == 0 else 0
        if lo < floor_:
            lo = floor_
    x[i] = lo
    hi[i] = h


@numba.njit(cache=True)
def _enumerate_chunk(G, mu, qd, R, Rf, state, x, hi, sigF, sigI, rr, T, P, out_x, out_norm):
    """Fill ``out_x``/``out_norm``; returns the count written.

    ``state[0]`` is the current level (-1 before the start, n when done).
    A negative ``R`` would be meaningless, so callers check it.
    """
    n = G.shape[0]
    cap = out_x.shape[0]
    count = 0
    i = state[0]
    if i == n:
        return 0
    if i < 0:
        T[n] = 0.0
        P[n] = 0
        for k in range(n):
            rr[k] = n - 1
        i = n - 1
        _descend(i, n, G, mu, qd, Rf, x, hi, sigF, sigI, rr, T, P)
    while True:
        if i == 0:
            s0 = sigI[0, 1]
            base = P[1]
            g = G[0, 0]
            x0 = x[0]
            h = hi[0]
            while x0 <= h:
                norm = base + g * x0 * x0 + 2 * x0 * s0
                if norm <= R:
                    for j in range(1, n):
                        out_x[count, j] = x[j]
                    out_x[count, 0] = x0
                    out_norm[count] = norm
                    count += 1
                    if count == cap:
                        x[0] = x0 + 1
                        state[0] = 0
                        return count
                x0 += 1
            x[0] = x0
        if x[i] > hi[i]:
            i += 1
            if i == n:
                state[0] = n
                return count
            x[i] += 1
            if rr[i - 1] < i:
                rr[i - 1] = i
            continue
        xi = x[i]
        d = xi - sigF[i, i + 1]
        T[i] = T[i + 1] + qd[i] * d * d
        P[i] = P[i + 1] + G[i, i] * xi * xi + 2 * xi * sigI[i, i + 1]
        i -= 1
        _descend(i, n, G, mu, qd, Rf, x, hi, sigF, sigI, rr, T, P)


@numba.njit(cache=True)
def _count_norms(G, mu, qd, R, Rf, counts, limit):
    """Count half-vectors per integer norm value without storing them.

    Returns -1 as soon as more than ``limit`` half-vectors have been seen.
    """
    n = G.shape[0]
    x = np.zeros(n, np.int64)
    hi = np.zeros(n, np.int64)
    sigF = np.zeros((n, n + 1))
    sigI = np.zeros((n, n + 1), np.int64)
    rr = np.full(n, n - 1, np.int64)
    T = np.zeros(n + 1)
    P = np.zeros(n + 1, np.int64)
    total = 0
    i = n - 1
    _descend(i, n, G, mu, qd, Rf, x, hi, sigF, sigI, rr, T, P)
    while True:
        if i == 0:
            s0 = sigI[0, 1]
            base = P[1]
            g = G[0, 0]
            for x0 in range(x[0], hi[0] + 1):
                norm = base + g * x0 * x0 + 2 * x0 * s0
                if norm <= R:
                    counts[norm] += 1
                    total += 1
            if total > limit:
                return -1
            x[0] = hi[0] + 1
        if x[i] > hi[i]:
            i += 1
            if i == n:
                return total
            x[i] += 1
            if rr[i - 1] < i:
                rr[i - 1] = i
            continue
        xi = x[i]
        d = xi - sigF[i, i + 1]
        T[i] = T[i + 1] + qd[i] * d * d
        P[i] = P[i + 1] + G[i, i] * xi * xi + 2 * xi * sigI[i, i + 1]
        i -= 1
        _descend(i, n, G, mu, qd, Rf, x, hi, sigF, sigI, rr, T, P)


def ldl_factor(gram_float: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(mu, qd) with A[x] = sum_i qd[i] (x_i + sum_{j>i} mu[i, j] x_j)^2."""
    ch = np.linalg.cholesky(gram_float)
    diag = np.diag(ch).copy()
    low = ch / diag[None, :]
    mu = np.ascontiguousarray(np.triu(low.T, 1))
    return mu, diag**2


def _radius(R: int) -> float:
    return float(R) * (1 + _INFLATE) + _INFLATE


@dataclass
class HalfVectorStream:
    """Chunked iterator over {x : 0 < G[x] <= R} modulo x ~ -x.

    ``G`` is an integer matrix; norms are reported as exact integers.
    """

    G: np.ndarray
    R: int
    chunk: int = 1 << 18
    mu: np.ndarray = field(init=False, repr=False)
    qd: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        self.G = np.ascontiguousarray(self.G, dtype=np.int64)
        self.mu, self.qd = ldl_factor(self.G.astype(float))

    def __iter__(self) -> Iterator[tuple[np.ndarray, np.ndarray]]:
        n = self.G.shape[0]
        state = np.array([-1], np.int64)
        x = np.zeros(n, np.int64)
        hi = np.zeros(n, np.int64)
        sigF = np.zeros((n, n + 1))
        sigI = np.zeros((n, n + 1), np.int64)
        rr = np.zeros(n, np.int64)
        T = np.zeros(n + 1)
        P = np.zeros(n + 1, np.int64)
        out_x = np.empty((self.chunk, n), np.int32)
        out_norm = np.empty(self.chunk, np.int64)
        Rf = _radius(self.R)
        while state[0] != n:
            k = _enumerate_chunk(
                self.G, self.mu, self.qd, np.int64(self.R), Rf, state, x, hi, sigF, sigI, rr, T, P, out_x, out_norm
            )
            if k:
                yield out_x[:k].copy(), out_norm[:k].copy()


def count_half_vectors(G: np.ndarray, R: int, limit: int | None = None) -> np.ndarray | None:
    """counts[v] = number of half-vectors with integer norm v, 0 <= v <= R.

    Returns None if more than ``limit`` half-vectors lie in the ball.
    """
    G = np.ascontiguousarray(G, dtype=np.int64)
    mu, qd = ldl_factor(G.astype(float))
    counts = np.zeros(int(R) + 1, np.int64)
    lim = np.iinfo(np.int64).max if limit is None else int(limit)
    if _count_norms(G, mu, qd, np.int64(R), _radius(R), counts, np.int64(lim)) < 0:
        return None
    return counts
