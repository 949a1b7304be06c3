"""Exact spherical-design certificates for lattice shells.

A shell X of norm m is a t-design (t even) iff, identically in u,

    sum_{x in X} (x'Au)^t = c_t (u'Au)^(t/2),
    c_t = |X| m^(t/2) (t-1)!! / (n (n+2) ... (n+t-2)).

Put v = Au: the left side is the polynomial with coefficient tensor
T = sum x^(tensor t), the right side is c_t (v'A^{-1}v)^(t/2).  Both are
compared coefficient by coefficient over the rationals.  When the lattice
has a frame (gram = w P P') the same identity is checked in the frame
coordinates y = P'x, where the right side becomes c_t (v'v / w)^(t/2).

Moment sums run through BLAS: the order-t tensor is a product of two
half-degree monomial feature matrices.  Row blocks are sized so every
partial sum is an integer below the float mantissa limit, which keeps the
floating GEMM exact.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial, prod
from typing import Iterable, Sequence

import numba
import numpy as np

from .errors import ConsistencyError, DomainError, PreconditionError
from .lattice import GramMatrix, Lattice
from .shells import DEFAULT_BUDGET, Shell, first_k_shells, stream_half_vectors

SUPPORTED_T = (2, 4, 6)


def _check_t(t: int) -> None:
    if t not in SUPPORTED_T:
        raise DomainError(f"design strength t must be one of {SUPPORTED_T}, got {t}")


def design_constant(count: int, norm: Fraction, n: int, t: int) -> Fraction:
    """c_t for a shell of ``count`` vectors of norm ``norm`` in dimension n."""
    h = t // 2
    double_fact = prod(range(t - 1, 0, -2))
    return Fraction(count * double_fact) * Fraction(norm) ** h / prod(n + 2 * i for i in range(h))


@lru_cache(maxsize=None)
def monomials(n: int, t: int) -> tuple[tuple[int, ...], ...]:
    """Sorted index tuples of length t, lexicographic order."""
    return tuple(itertools.combinations_with_replacement(range(n), t))


def multinomial(alpha: Sequence[int]) -> int:
    """Number of distinct orderings of the sorted index tuple ``alpha``."""
    counts = defaultdict(int)
    for i in alpha:
        counts[i] += 1
    return factorial(len(alpha)) // prod(factorial(c) for c in counts.values())


# -- moment tensors ---------------------------------------------------------


@dataclass(frozen=True)
class MomentTensor:
    """Symmetric order-t tensor stored on sorted index tuples (exact)."""

    degree: int
    n: int
    entries: dict = field(repr=False)

    def __getitem__(self, idx: Sequence[int]):
        return self.entries.get(tuple(sorted(idx)), 0)

    def contract(self, C: Sequence[Sequence]) -> "MomentTensor":
        """sum_ij C_ij T_{ij...}: the order t-2 tensor."""
        if self.degree < 2:
            raise DomainError("cannot contract a tensor of degree < 2")
        out = {}
        for beta in monomials(self.n, self.degree - 2):
            s = Fraction(0)
            for i in range(self.n):
                for j in range(self.n):
                    if C[i][j]:
                        s += Fraction(C[i][j]) * self[beta + (i, j)]
            out[beta] = s
        return MomentTensor(self.degree - 2, self.n, out)

    def scalar(self, u: Sequence[int]) -> Fraction:
        """sum over vectors of (x.u)^t, read off the tensor."""
        return sum(multinomial(a) * v * prod(u[i] for i in a) for a, v in self.entries.items())


@numba.njit(cache=True)
def _features(Z, A, F):
    """F[:, c] = prod_q Z[:, A[c, q]] (column-major arrays)."""
    N = Z.shape[0]
    for c in range(A.shape[0]):
        a = A[c, 0]
        for k in range(N):
            F[k, c] = Z[k, a]
        for q in range(1, A.shape[1]):
            b = A[c, q]
            for k in range(N):
                F[k, c] *= Z[k, b]


@lru_cache(maxsize=None)
def _plan(n: int, t: int, width: int = 48):
    """Block layout: left half-monomials grouped by their largest index."""
    h = t // 2
    lex = monomials(n, h)
    colex = tuple(sorted(lex, key=lambda m: (m[-1], m)))
    first = [m[0] for m in lex]
    full = {a: i for i, a in enumerate(monomials(n, t))}
    blocks = []
    i = 0
    while i < len(colex):
        k = i
        while k < len(colex) and (k - i < width or colex[k][-1] == colex[k - 1][-1]):
            k += 1
        j0 = colex[i][-1]
        r0 = first.index(j0)
        rows, cols, pos = [], [], []
        for a in range(i, k):
            left = colex[a]
            for b in range(r0, len(lex)):
                right = lex[b]
                if right[0] >= left[-1]:
                    rows.append(a - i)
                    cols.append(b - r0)
                    pos.append(full[left + right])
        blocks.append((i, k, r0, np.array(rows), np.array(cols), np.array(pos)))
        i = k
    return np.array(colex, np.int64), np.array(lex, np.int64), blocks, len(full)


class MomentAccumulator:
    """Streaming exact ``weight * sum z^(tensor t)`` over integer vectors z."""

    def __init__(self, n: int, t: int, weight: int = 1, rows: int = 4096):
        _check_t(t)
        self.n, self.t, self.weight, self.rows = n, t, weight, rows
        self.left_idx, self.right_idx, self.blocks, size = _plan(n, t)
        self._acc = np.zeros(size, dtype=object)
        self._part = [np.zeros((b - a, self.right_idx.shape[0] - r0)) for a, b, r0, *_ in self.blocks]
        self._part_bound = 0
        self.vectors = 0

    @property
    def count(self) -> int:
        return self.weight * self.vectors

    def _flush(self) -> None:
        for (a, b, r0, rows, cols, pos), P in zip(self.blocks, self._part):
            self._acc[pos] += P[rows, cols].astype(np.int64).astype(object)
            P[:] = 0.0
        self._part_bound = 0

    def add(self, Z: np.ndarray) -> None:
        """Add the moments of the rows of Z (integers)."""
        Z = np.asarray(Z)
        if Z.size == 0:
            return
        if Z.ndim != 2 or Z.shape[1] != self.n:
            raise ConsistencyError("vector dimension does not match the accumulator")
        self.vectors += Z.shape[0]
        per_row = max(int(np.abs(Z).max()) ** self.t, 1)
        if per_row * 256 <= 2**24:
            dtype, rows = np.float32, 2**24 // per_row
        elif per_row <= 2**52:
            dtype, rows = np.float64, 2**53 // per_row
        else:
            raise ConsistencyError("coordinates too large for exact moment accumulation")
        rows = min(rows, self.rows)
        nl, nr = self.left_idx.shape[0], self.right_idx.shape[0]
        for s in range(0, Z.shape[0], rows):
            sub = Z[s : s + rows]
            m = sub.shape[0]
            # the float64 partials must stay exact too
            if self._part_bound + m * per_row >= 2**53:
                self._flush()
            self._part_bound += m * per_row
            Zf = np.asfortranarray(sub, dtype=dtype)
            FL = np.empty((m, nl), dtype, order="F")
            FR = np.empty((m, nr), dtype, order="F")
            _features(Zf, self.left_idx, FL)
            _features(Zf, self.right_idx, FR)
            for (a, b, r0, *_), P in zip(self.blocks, self._part):
                P += FL[:, a:b].T @ FR[:, r0:]

    def tensor(self) -> MomentTensor:
        self._flush()
        keys = monomials(self.n, self.t)
        w = self.weight
        return MomentTensor(self.t, self.n, {a: w * int(v) for a, v in zip(keys, self._acc)})


def moment_tensor(vectors: np.ndarray, t: int, weight: int = 1) -> MomentTensor:
    acc = MomentAccumulator(np.asarray(vectors).shape[1], t, weight)
    acc.add(vectors)
    return acc.tensor()


# -- right-hand side ----------------------------------------------------------


def form_power(B: Sequence[Sequence], h: int) -> dict:
    """Coefficients of (v'Bv)^h keyed by sorted index tuples."""
    n = len(B)
    q = {}
    for i in range(n):
        for j in range(i, n):
            c = Fraction(B[i][j]) * (1 if i == j else 2)
            if c:
                q[(i, j)] = c
    poly = {(): Fraction(1)}
    for _ in range(h):
        nxt = defaultdict(Fraction)
        for a, ca in poly.items():
            for b, cb in q.items():
                nxt[tuple(sorted(a + b))] += ca * cb
        poly = dict(nxt)
    return poly


def design_defect(T: MomentTensor, B: Sequence[Sequence], c: Fraction) -> Fraction:
    """max |T_alpha - c [v^alpha](v'Bv)^(t/2) / multinomial(alpha)|."""
    target = form_power(B, T.degree // 2)
    worst = Fraction(0)
    for a in monomials(T.n, T.degree):
        d = abs(Fraction(T.entries.get(a, 0)) - c * target.get(a, 0) / multinomial(a))
        if d > worst:
            worst = d
    return worst


# -- certificates ---------------------------------------------------------------


@dataclass(frozen=True)
class DesignCertificate:
    """Exact verdicts for one shell.  ``defects[t]`` is 0 iff t passes."""

    index: int
    norm: Fraction
    cardinality: int
    defects: dict
    coordinates: str = "basis"

    @property
    def passes(self) -> dict:
        return {t: d == 0 for t, d in sorted(self.defects.items())}

    @property
    def strength(self) -> int:
        s = 0
        for t, ok in self.passes.items():
            if not ok:
                break
            s = t
        return s

    @property
    def defect(self) -> Fraction:
        """Defect at the smallest failing t (0 if everything passed)."""
        for t, ok in self.passes.items():
            if not ok:
                return self.defects[t]
        return Fraction(0)


def _coordinates(L: Lattice | None, gram: GramMatrix):
    """(matrix mapping basis coords to working coords or None, inverse form)."""
    if L is not None and L.frame is not None:
        w = L.frame.weight
        n = gram.n
        return L.frame.matrix(), [[Fraction(int(i == j)) / w for j in range(n)] for i in range(n)], "frame"
    return None, gram.inverse.entries, "basis"


def _to_working(X: np.ndarray, P: np.ndarray | None) -> np.ndarray:
    """Frame coordinates y = P'x, kept in float32 when that is exact."""
    if P is None:
        return X
    X = np.asarray(X)
    bound = int(np.abs(X).max(initial=0)) * int(np.abs(P).max()) * P.shape[0]
    if bound < 2**24:
        return X.astype(np.float32) @ P.astype(np.float32)
    return np.asarray(X, dtype=np.int64) @ P


def _check_shell(half: np.ndarray, gram: GramMatrix, norm: Fraction) -> None:
    M, d = gram.integer_matrix()
    X = np.asarray(half, dtype=np.int64)
    v = np.einsum("ij,jk,ik->i", X, M, X)
    if not np.all(v == norm * d):
        raise ConsistencyError("shell vectors do not have the stated norm under this Gram matrix")


def is_t_design(shell: Shell, gram: GramMatrix, t: int, lattice: Lattice | None = None) -> tuple[bool, Fraction]:
    """(passes, defect) for one materialized shell."""
    _check_t(t)
    if not shell.has_vectors or shell.cardinality == 0:
        raise ConsistencyError("is_t_design needs a non-empty shell with vectors")
    _check_shell(shell.half, gram, shell.norm)
    P, B, _ = _coordinates(lattice, gram)
    T = moment_tensor(_to_working(shell.half, P), t, weight=2)
    c = design_constant(shell.cardinality, shell.norm, gram.n, t)
    d = design_defect(T, B, c)
    return d == 0, d


@dataclass(frozen=True)
class CertificationReport:
    lattice: str
    depth: int
    t_max: int
    certificates: tuple[DesignCertificate, ...]

    def all_pass(self, t: int) -> bool:
        return all(c.passes.get(t, False) for c in self.certificates)

    @property
    def all_2_design(self) -> bool:
        return self.all_pass(2)

    @property
    def all_4_design(self) -> bool:
        return self.all_pass(4)


def certify_lattice(L: Lattice, K: int = 5, t_max: int = 4, budget: int = DEFAULT_BUDGET) -> CertificationReport:
    """Certificates for shells 1..K at every even t <= t_max.

    Shells are streamed, so no shell is ever held in memory; the budget
    bounds the number of vectors visited.
    """
    _check_t(t_max)
    if K < 1:
        raise DomainError(f"need K >= 1, got {K}")
    for (entries, K0, t0), rep in _CERTIFIED.items():
        if entries == L.gram.entries and K0 >= K and t0 >= t_max:
            return _restrict(rep, L.name, K, t_max)
    rep = _certify(L, K, t_max, budget)
    _CERTIFIED[(L.gram.entries, K, t_max)] = rep
    return rep


# certificates depend on the Gram matrix only; cached per process
_CERTIFIED: dict[tuple, CertificationReport] = {}


def _restrict(rep: CertificationReport, name: str, K: int, t_max: int) -> CertificationReport:
    certs = []
    for c in rep.certificates[:K]:
        defects = {t: d for t, d in c.defects.items() if t <= t_max}
        certs.append(DesignCertificate(c.index, c.norm, c.cardinality, defects, c.coordinates))
    return CertificationReport(name, K, t_max, tuple(certs))


def _certify(L: Lattice, K: int, t_max: int, budget: int) -> CertificationReport:
    found = first_k_shells(L, K, budget, keep_vectors=False)
    R = found[K - 1].norm
    d = L.gram.denominator
    P, B, coords = _coordinates(L, L.gram)
    ts = [t for t in SUPPORTED_T if t <= t_max]
    index = {int(s.norm * d): k for k, s in enumerate(found)}
    accs = [{t: MomentAccumulator(L.n, t, weight=2) for t in ts} for _ in found]
    for X, v in stream_half_vectors(L, R, budget):
        Y = _to_working(X, P)
        for m in np.unique(v):
            rows = Y[v == m]
            for acc in accs[index[int(m)]].values():
                acc.add(rows)
    certs = []
    for s, acc in zip(found, accs):
        defects = {}
        for t in ts:
            if acc[t].count != s.cardinality:
                raise ConsistencyError(f"shell {s.index}: streamed {acc[t].count} vectors, expected {s.cardinality}")
            c = design_constant(s.cardinality, s.norm, L.n, t)
            defects[t] = design_defect(acc[t].tensor(), B, c)
        certs.append(DesignCertificate(s.index, s.norm, s.cardinality, defects, coords))
    return CertificationReport(L.name, K, t_max, tuple(certs))


@dataclass(frozen=True)
class CriticalityReport:
    depth: int
    strongly_critical_to_depth: bool
    note: str = "evidence up to the stated depth, not a statement about all shells"


def strongly_critical(L: Lattice, K: int = 5, budget: int = DEFAULT_BUDGET) -> CriticalityReport:
    rep = certify_lattice(L, K, 2, budget)
    return CriticalityReport(K, rep.all_2_design)


# -- self-test and cross-checks -----------------------------------------------


def probe_points(n: int, t: int) -> list[tuple[int, ...]]:
    """All u with nonnegative entries summing to t: unisolvent for degree-t forms."""
    pts = []
    for a in monomials(n, t):
        u = [0] * n
        for i in a:
            u[i] += 1
        pts.append(tuple(u))
    return pts


def polarization_self_test(shell: Shell, gram: GramMatrix, t: int = 4) -> tuple[bool, bool]:
    """Decide the design property twice: tensor entries vs scalar probes.

    Probing evaluates sum (x'Au)^t - c (u'Au)^(t/2) exactly at every u with
    entries >= 0 summing to t; that set determines a degree-t form.
    """
    tensor_verdict, _ = is_t_design(shell, gram, t)
    A = gram.entries
    n = gram.n
    X = [[int(v) for v in x] for x in shell.half]
    c = design_constant(shell.cardinality, shell.norm, n, t)
    probe_verdict = True
    for u in probe_points(n, t):
        Au = [sum(A[i][j] * u[j] for j in range(n)) for i in range(n)]
        lhs = 2 * sum(sum(x[i] * Au[i] for i in range(n)) ** t for x in X)
        uAu = sum(u[i] * Au[i] for i in range(n))
        if lhs != c * uAu ** (t // 2):
            probe_verdict = False
            break
    return tensor_verdict, probe_verdict


@dataclass(frozen=True)
class SeriesIdentityResult:
    lhs: float
    rhs: float
    residual: float
    bound: float

    @property
    def within_bound(self) -> bool:
        return self.residual <= self.bound


def series_identity_check(
    L: Lattice,
    s: float,
    H: Sequence[Sequence[float]],
    K: int = 5,
    budget: int = DEFAULT_BUDGET,
    require_certificates: bool = True,
) -> SeriesIdentityResult:
    """sum H[x]^2 / A[x]^(s+2) against zeta_K(A,s)((Tr A^-1H)^2 + 2 Tr (A^-1H)^2)/(n(n+2)).

    H is given in basis coordinates.  Both sides are truncated at the same
    K shells: on 4-design shells the identity holds shell by shell, so the
    tails cancel and only floating-point rounding remains, which is the
    reported bound.  Shells that are not 4-designs leave a residual far
    above it.
    """
    n = L.n
    if s <= n / 2:
        raise DomainError(f"series identity needs s > n/2 = {n / 2}")
    if require_certificates and not certify_lattice(L, K, 4, budget).all_4_design:
        raise PreconditionError("4-design certificates fail; the identity is not expected to hold")
    H = np.asarray(H, dtype=float)
    Ainv = L.gram.inverse.to_numpy()
    M = Ainv @ H
    factor = (np.trace(M) ** 2 + 2 * np.trace(M @ M)) / (n * (n + 2))
    found = first_k_shells(L, K, budget, keep_vectors=False)
    R = found[K - 1].norm
    scale = float(L.scale)
    d = L.gram.denominator
    lhs_terms, zeta_terms = [], []
    for X, v in stream_half_vectors(L, R, budget):
        Xf = X.astype(float)
        hx = np.einsum("ij,jk,ik->i", Xf, H, Xf)
        ax = scale * v.astype(float) / d
        lhs_terms.append(2 * np.sum(hx**2 * ax ** (-s - 2)))
        zeta_terms.append(2 * np.sum(ax ** (-s)))
    lhs = float(np.sum(lhs_terms))
    zeta_k = float(np.sum(zeta_terms))
    rhs = zeta_k * factor
    N = sum(sh.cardinality for sh in found)
    bound = 64 * np.finfo(float).eps * np.sqrt(N) * (abs(lhs) + abs(rhs)) + 1e-300
    return SeriesIdentityResult(lhs, rhs, abs(lhs - rhs), float(bound))


def orbit_union_certificate(shells: Iterable[Shell], gram: GramMatrix, t: int) -> tuple[bool, Fraction]:
    """Design test of a union of same-norm vector sets treated as one multiset."""
    shells = list(shells)
    norms = {s.norm for s in shells}
    if len(norms) != 1:
        raise ConsistencyError("union test needs a common norm")
    half = np.concatenate([s.half for s in shells])
    merged = Shell(0, norms.pop(), 2 * len(half), half)
    return is_t_design(merged, gram, t)
