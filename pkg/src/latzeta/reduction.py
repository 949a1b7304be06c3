"""Basis reduction (fplll) for cheaper enumeration.

Fincke-Pohst cost depends heavily on the basis: a skewed Gram-Schmidt
profile makes the top levels scan long ranges that are pruned late.
"""

from __future__ import annotations

from typing import Sequence

from fpylll import BKZ, GSO, LLL, IntegerMatrix

BLOCK = 20


def reduce_rows(rows: Sequence[Sequence[int]], block: int = BLOCK) -> list[list[int]]:
    """LLL, then BKZ with the given block size, on integer basis rows."""
    B = IntegerMatrix.from_matrix([[int(v) for v in r] for r in rows])
    LLL.reduction(B)
    n, m = B.nrows, B.ncols
    if n > 2:
        BKZ.reduction(B, BKZ.Param(block_size=min(block, n)))
    return [[int(B[i, j]) for j in range(m)] for i in range(n)]


def reduce_gram(gram: Sequence[Sequence[int]]) -> list[list[int]]:
    """Unimodular U (rows) with U G U' LLL-reduced, for an integral Gram matrix G."""
    n = len(gram)
    G = IntegerMatrix.from_matrix([[int(v) for v in r] for r in gram])
    U = IntegerMatrix.identity(n)
    M = GSO.Mat(G, gram=True, U=U)
    M.update_gso()
    LLL.Reduction(M)()
    return [[int(U[i, j]) for j in range(n)] for i in range(n)]
