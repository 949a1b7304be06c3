"""Named lattices and the Barnes-Wall / Leech / Coxeter-Todd constructions.

Root lattices use their Cartan matrices in Bourbaki numbering (all roots
of norm 2).  The remaining Gram matrices are produced from explicit
generating sets: a Hermite basis first, then a reduced one so that
enumeration stays cheap.
"""

from __future__ import annotations

import itertools
import re
from fractions import Fraction
from functools import lru_cache

from . import exact
from .errors import CatalogError, UnsupportedDimensionError
from .lattice import Frame, GramMatrix, Lattice
from .reduction import reduce_gram, reduce_rows

CATALOG_NAMES = ("Zn", "A2", "D4", "E6", "E7", "E8", "K12", "BW16", "Leech", "BW32")

# Extended binary Golay code [24, 12, 8]: shifts of the cyclic generator
# 1 + x^2 + x^4 + x^5 + x^6 + x^10 + x^11 with an overall parity bit.
GOLAY_GENERATOR = (
    "101011100011000000000001",
    "010101110001100000000001",
    "001010111000110000000001",
    "000101011100011000000001",
    "000010101110001100000001",
    "000001010111000110000001",
    "000000101011100011000001",
    "000000010101110001100001",
    "000000001010111000110001",
    "000000000101011100011001",
    "000000000010101110001101",
    "000000000001010111000111",
)


def _cartan(edges: list[tuple[int, int]], n: int) -> list[list[int]]:
    a = [[2 * (i == j) for j in range(n)] for i in range(n)]
    for i, j in edges:
        a[i][j] = a[j][i] = -1
    return a


# Dynkin diagrams, 0-based Bourbaki labels (node 1 of E_n branches off node 3).
_E_EDGES = [(0, 2), (1, 3), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7)]


def _root_gram(name: str) -> list[list[int]]:
    if name == "A2":
        return [[2, 1], [1, 2]]
    if name == "D4":
        return _cartan([(0, 1), (1, 2), (1, 3)], 4)
    if name in ("E6", "E7", "E8"):
        n = int(name[1])
        return _cartan([e for e in _E_EDGES if max(e) < n], n)
    raise KeyError(name)


def golay_codewords() -> list[tuple[int, ...]]:
    rows = [[int(c) for c in r] for r in GOLAY_GENERATOR]
    words = []
    for coeffs in itertools.product((0, 1), repeat=12):
        w = [0] * 24
        for c, r in zip(coeffs, rows):
            if c:
                w = [a ^ b for a, b in zip(w, r)]
        words.append(tuple(w))
    return words


def _gram_of_basis(basis, inner_scale) -> list[list]:
    return [[inner_scale * sum(a * b for a, b in zip(u, v)) for v in basis] for u in basis]


@lru_cache(maxsize=None)
def leech() -> Lattice:
    """Leech lattice from the Golay code.

    In coordinates scaled by sqrt(8) the lattice is generated by 2c for
    codewords c, 4(e_i + e_j), 8 e_i and (-3, 1, ..., 1).
    """
    gens = [[2 * int(c) for c in r] for r in GOLAY_GENERATOR]
    for i, j in itertools.combinations(range(24), 2):
        v = [0] * 24
        v[i] = v[j] = 4
        gens.append(v)
    gens.append([-3] + [1] * 23)
    basis = reduce_rows(exact.hermite_basis(gens))
    frame = Frame(basis, Fraction(1, 8))
    return Lattice("Leech", GramMatrix.from_rows(frame.gram()), provenance=("catalog", "even", "golay"), frame=frame)


@lru_cache(maxsize=None)
def coxeter_todd() -> Lattice:
    """K12 as {x in E^6 : x_i congruent mod theta, sum x_i = 0 mod 3}.

    E = Z[w] are the Eisenstein integers and theta = w - w^2.  Real
    coordinates (a_1, b_1, ..., a_6, b_6) stand for x_i = a_i + b_i w; the
    norm is (2/3) sum |x_i|^2 so that the minimum is 4.
    """
    def ok(v):
        r = [(v[2 * i] + v[2 * i + 1]) % 3 for i in range(6)]
        return len(set(r)) == 1 and sum(v[0::2]) % 3 == 0 and sum(v[1::2]) % 3 == 0

    gens = []
    for k in range(12):
        v = [0] * 12
        v[k] = 3
        gens.append(v)
    # the conditions only see residues mod 3, so residue lifts suffice
    gens.extend(list(v) for v in itertools.product((0, 1, 2), repeat=12) if any(v) and ok(v))
    basis = exact.hermite_basis(gens)
    if len(basis) != 12:
        raise RuntimeError("K12 generating set is degenerate")

    def inner(u, v):
        s = Fraction(0)
        for i in range(6):
            a1, b1, a2, b2 = u[2 * i], u[2 * i + 1], v[2 * i], v[2 * i + 1]
            # Re(x conj(y)) for x = a1 + b1 w, y = a2 + b2 w
            s += a1 * a2 + b1 * b2 - Fraction(a1 * b2 + b1 * a2, 2)
        return Fraction(2, 3) * s

    rows = [[inner(u, v) for v in basis] for u in basis]
    U = reduce_gram([[int(x) for x in r] for r in rows])
    basis = [[sum(c * b[j] for c, b in zip(u, basis)) for j in range(12)] for u in U]
    gram = GramMatrix.from_rows([[inner(u, v) for v in basis] for u in basis])
    return Lattice("K12", gram, provenance=("catalog", "even", "eisenstein"))


def _affine_subspaces(k: int) -> list[frozenset[int]]:
    """All affine subspaces of F_2^k, points encoded as k-bit integers."""
    linear = {frozenset([0])}
    frontier = [frozenset([0])]
    while frontier:
        nxt = []
        for s in frontier:
            for v in range(1 << k):
                if v not in s:
                    t = frozenset(s | {x ^ v for x in s})
                    if t not in linear:
                        linear.add(t)
                        nxt.append(t)
        frontier = nxt
    affine = set()
    for s in linear:
        for a in range(1 << k):
            affine.add(frozenset(a ^ x for x in s))
    return sorted(affine, key=lambda u: (len(u), sorted(u)))


@lru_cache(maxsize=None)
def barnes_wall(k: int) -> Lattice:
    """Barnes-Wall lattice in dimension 2^k, 2 <= k <= 5.

    Generated by 2^floor((k - d + 1)/2) * sum_{u in U} e_u over affine
    subspaces U of F_2^k of dimension d.  The Gram matrix is then divided by
    the largest power of two that keeps it even; that factor is recorded in
    the provenance.
    """
    if not 2 <= k <= 5:
        raise UnsupportedDimensionError(f"barnes_wall needs 2 <= k <= 5, got {k}")
    n = 1 << k
    gens = []
    for u in _affine_subspaces(k):
        d = len(u).bit_length() - 1
        c = 2 ** ((k - d + 1) // 2)
        v = [0] * n
        for p in u:
            v[p] = c
        gens.append(v)
    basis = reduce_rows(exact.hermite_basis(gens))
    rows = _gram_of_basis(basis, 1)
    e = 0
    while all(x % (2 ** (e + 1)) == 0 for r in rows for x in r) and all(
        rows[i][i] % (2 ** (e + 2)) == 0 for i in range(n)
    ):
        e += 1
    frame = Frame(basis, Fraction(1, 2**e))
    return Lattice(
        f"BW{n}", GramMatrix.from_rows(frame.gram()), provenance=("barnes-wall", k, f"gram divided by 2^{e}"), frame=frame
    )


def cubic(n: int) -> Lattice:
    if n < 1:
        raise CatalogError(f"Zn needs n >= 1, got {n}")
    frame = Frame([[int(i == j) for j in range(n)] for i in range(n)])
    return Lattice(f"Z{n}", GramMatrix.from_rows(exact.identity(n)), provenance=("catalog", "zn", n), frame=frame)


def catalog_lattice(name: str, dim: int | None = None) -> Lattice:
    """Look up a catalog lattice.  ``Zn`` takes ``dim`` (or is spelled ``Z4``)."""
    m = re.fullmatch(r"Z(n|\d+)", name)
    if m:
        n = dim if m.group(1) == "n" else int(m.group(1))
        if n is None:
            raise CatalogError("Zn requires a dimension")
        return cubic(int(n))
    if name in ("A2", "D4", "E6", "E7", "E8"):
        even = ("even",)
        return Lattice(name, GramMatrix.from_rows(_root_gram(name)), provenance=("catalog",) + even)
    if name == "K12":
        return coxeter_todd()
    if name == "BW16":
        return barnes_wall(4)
    if name == "BW32":
        return barnes_wall(5)
    if name == "Leech":
        return leech()
    raise CatalogError(f"unknown lattice {name!r}; valid names: {', '.join(CATALOG_NAMES)}")
