"""Shared test helpers: Gram-matrix strategies and a brute-force shell counter."""

import itertools
from collections import Counter

import numpy as np
from hypothesis import strategies as st

from latzeta.lattice import GramMatrix


@st.composite
def integer_grams(draw, n_min=1, n_max=3, entry=2):
    n = draw(st.integers(n_min, n_max))
    B = draw(st.lists(st.lists(st.integers(-entry, entry), min_size=n, max_size=n), min_size=n, max_size=n))
    B = np.array(B, dtype=np.int64)
    if round(abs(np.linalg.det(B))) == 0:
        B = B + 3 * np.eye(n, dtype=np.int64)
    if round(abs(np.linalg.det(B))) == 0:
        B = np.eye(n, dtype=np.int64)
    return GramMatrix.from_rows((B @ B.T).tolist())


@st.composite
def unimodular(draw, n):
    """Product of random elementary integer matrices."""
    U = np.eye(n, dtype=np.int64)
    for _ in range(draw(st.integers(0, 4))):
        i = draw(st.integers(0, n - 1))
        j = draw(st.integers(0, n - 1))
        c = draw(st.integers(-2, 2))
        if i != j:
            E = np.eye(n, dtype=np.int64)
            E[i, j] = c
            U = U @ E
    return U.tolist()


def brute_force(g, R):
    """(norm, count) for every integer x in a box guaranteed to contain Q[x] <= R."""
    Ainv = np.linalg.inv(g.to_numpy())
    box = [int(np.floor(np.sqrt(float(R) * Ainv[i, i]) + 1e-9)) for i in range(g.n)]
    found = Counter()
    for x in itertools.product(*[range(-b, b + 1) for b in box]):
        if any(x):
            v = g.value(x)
            if v <= R:
                found[v] += 1
    return sorted(found.items())
