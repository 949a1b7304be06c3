"""Exact linear algebra over Q and Z.

Matrices are plain lists of lists holding ``int`` or ``Fraction`` entries.
Nothing here touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Matrix = list[list[Fraction]]


def to_fraction_matrix(rows: Sequence[Sequence]) -> Matrix:
    return [[Fraction(v) for v in row] for row in rows]


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"``; rejects floats so round trips stay exact."""
    text = text.strip()
    if any(c in text for c in ".eE"):
        raise ValueError(f"not a rational literal: {text!r}")
    return Fraction(text)


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def transpose(a: Sequence[Sequence]) -> list[list]:
    return [list(col) for col in zip(*a)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def quadratic_form(a: Sequence[Sequence], x: Sequence) -> Fraction:
    """A[x] = x'Ax."""
    n = len(x)
    return sum(x[i] * a[i][j] * x[j] for i in range(n) for j in range(n))


def is_symmetric(a: Sequence[Sequence]) -> bool:
    n = len(a)
    return all(len(row) == n for row in a) and all(
        a[i][j] == a[j][i] for i in range(n) for j in range(i + 1, n)
    )


def det(a: Sequence[Sequence]) -> Fraction:
    m = to_fraction_matrix(a)
    n = len(m)
    result = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            result = -result
        p = m[c][c]
        result *= p
        for r in range(c + 1, n):
            f = m[r][c] / p
            if f:
                row_c = m[c]
                m[r] = [x - f * y for x, y in zip(m[r], row_c)]
    return result


def leading_minors(a: Sequence[Sequence]) -> list[Fraction]:
    """All leading principal minors, via one elimination pass."""
    m = to_fraction_matrix(a)
    n = len(m)
    minors = []
    acc = Fraction(1)
    for c in range(n):
        p = m[c][c]
        acc *= p
        minors.append(acc)
        if p == 0:
            # remaining minors need pivoting; fall back to direct evaluation
            minors.extend(det([row[: k + 1] for row in a[: k + 1]]) for k in range(c + 1, n))
            return minors
        for r in range(c + 1, n):
            f = m[r][c] / p
            if f:
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return minors


def is_positive_definite(a: Sequence[Sequence]) -> bool:
    return all(v > 0 for v in leading_minors(a))


def inverse(a: Sequence[Sequence]) -> Matrix:
    n = len(a)
    m = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        m[c], m[piv] = m[piv], m[c]
        p = m[c][c]
        m[c] = [x / p for x in m[c]]
        for r in range(n):
            if r != c and m[r][c] != 0:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return [row[n:] for row in m]


def rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank over Q of an integer matrix (fraction-free elimination)."""
    m = [list(map(int, r)) for r in rows if any(r)]
    if not m:
        return 0
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        for i in range(r + 1, len(m)):
            if m[i][c]:
                f = m[i][c]
                row = [p * x - f * y for x, y in zip(m[i], m[r])]
                g = 0
                for x in row:
                    g = gcd(g, x)
                m[i] = [x // g for x in row] if g > 1 else row
        r += 1
        if r == len(m):
            break
    return r


def common_denominator(a: Sequence[Sequence]) -> int:
    d = 1
    for row in a:
        for v in row:
            q = Fraction(v).denominator
            d = d * q // gcd(d, q)
    return d


def is_integral(a: Sequence[Sequence]) -> bool:
    return all(Fraction(v).denominator == 1 for row in a for v in row)


def _extgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def hermite_basis(generators: Sequence[Sequence[int]]) -> list[list[int]]:
    """Row-style Hermite normal form of the Z-span of integer vectors.

    Returns a basis in echelon form with positive pivots and off-pivot
    entries above each pivot reduced into ``[0, pivot)``.
    """
    if not generators:
        return []
    n = len(generators[0])
    pivots: dict[int, list[int]] = {}
    for g in generators:
        v = [int(x) for x in g]
        for c in range(n):
            if v[c] == 0:
                continue
            row = pivots.get(c)
            if row is None:
                if v[c] < 0:
                    v = [-x for x in v]
                pivots[c] = v
                break
            d, s, t = _extgcd(row[c], v[c])
            a, b = row[c] // d, v[c] // d
            new_row = [s * x + t * y for x, y in zip(row, v)]
            v = [a * y - b * x for x, y in zip(row, v)]
            if new_row[c] < 0:
                new_row = [-x for x in new_row]
            pivots[c] = new_row
            # the leftover v now has v[c] == 0; keep sweeping
    basis = [pivots[c] for c in sorted(pivots)]
    for i in range(len(basis)):
        ci = _pivot_col(basis[i])
        for j in range(i):
            q = basis[j][ci] // basis[i][ci]
            if q:
                basis[j] = [x - q * y for x, y in zip(basis[j], basis[i])]
    return basis


def _pivot_col(v: Sequence[int]) -> int:
    return next(i for i, x in enumerate(v) if x != 0)
