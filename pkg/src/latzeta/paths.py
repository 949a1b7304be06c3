"""Lattice sums along t -> e_A(tH) via per-shell Taylor expansion.

For x on a shell of norm m, Q_t[x] = m + delta_x(t).  A smooth f then gives

    f(Q_t[x]) - f(m) = sum_{j=1..J} f^(j)(m) delta^j / j!  + remainder,

so one streaming pass that stores, per shell and per t, the power sums
sum delta^j (and sum |delta|^(J+1) for the remainder) serves every kernel
f at once.  Differences come out directly, without subtracting two large
path values.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Sequence

import mpmath
import numba
import numpy as np
from mpmath import mpf

from .errors import DomainError
from .lattice import Lattice, dual
from .series import to_mpf
from .shells import DEFAULT_BUDGET, shell_counts, stream_half_vectors
from .special import CountModel, G, integral_exp_poly, integral_power
from .tangent import TangentDirection

EPS = np.finfo(float).eps


@numba.njit(cache=True)
def _accumulate(D, idx, J, P, C, A):
    """Neumaier sums of delta^j (j=1..J) and |delta|^j (j=1..J+1) per shell."""
    N, T = D.shape
    for r in range(N):
        k = idx[r]
        for q in range(T):
            d = D[r, q]
            p = 1.0
            for j in range(J + 1):
                p *= d
                a = abs(p)
                A[k, q, j] += a
                if j < J:
                    s = P[k, q, j]
                    u = s + p
                    if abs(s) >= a:
                        C[k, q, j] += (s - u) + p
                    else:
                        C[k, q, j] += (p - u) + s
                    P[k, q, j] = u


@dataclass(frozen=True)
class PathSums:
    """Per-shell power sums of delta along the path, both signs of x counted.

    ``power[k, q, j-1]`` = sum over shell k of delta(t_q)^j, ``absolute``
    the same for |delta|^j up to j = J+1.  ``rho`` bounds |delta| by
    (exp(|t| rho) - 1) * norm.
    """

    lattice: Lattice
    bound: Fraction
    ts: tuple
    norms: tuple
    counts: tuple
    power: np.ndarray = field(repr=False)
    absolute: np.ndarray = field(repr=False)
    rho: float
    model: CountModel = field(repr=False)

    @property
    def J(self) -> int:
        return self.power.shape[2]

    @property
    def radius(self) -> mpf:
        return self.lattice.scale.value() * to_mpf(self.bound)


def _shell_index(L: Lattice, R, budget: int) -> tuple[np.ndarray, tuple, tuple]:
    found = shell_counts(L, R, budget)
    d = L.gram.denominator
    Rint = int(Fraction(R) * d)
    index = np.full(Rint + 1, -1, np.int64)
    for k, m in enumerate(found.norms):
        index[int(m * d)] = k
    return index, tuple(found.norms), tuple(found.counts)


def _model(L: Lattice, norms, counts) -> tuple:
    lam = L.scale.value()
    scaled = tuple(lam * to_mpf(m) for m in norms)
    return scaled, CountModel(L.n, L.covolume_squared(), scaled, counts)


def is_unimodular(L: Lattice) -> bool:
    return L.gram.det == 1 and L.gram.is_integral


def path_sums(
    L: Lattice,
    H: TangentDirection,
    ts: Sequence[float],
    R,
    R_dual=None,
    J: int = 6,
    budget: int = DEFAULT_BUDGET,
    chunk: int = 1 << 16,
) -> tuple[PathSums, PathSums | None]:
    """Stream L (and L* if ``R_dual`` is given) once and collect power sums.

    Primal: delta = s (sum_i expm1(t lam_i) z_i^2), s the scale.  Dual:
    delta = (1/s) sum_i expm1(-t lam_i) w_i^2.  For integral unimodular L the
    dual vectors are A x, so one stream feeds both sides.
    """
    if H.base != L.gram:
        raise DomainError("direction is not based at this lattice's Gram matrix")
    ts = tuple(float(t) for t in ts)
    lam, W, Wd = H.spectrum()
    rho = float(np.max(np.abs(lam))) if len(lam) else 0.0
    scale = float(L.scale)
    Ep = scale * np.expm1(np.outer(lam, ts))
    Ed = np.expm1(-np.outer(lam, ts)) / scale
    T = len(ts)
    Ld = dual(L)
    shared = R_dual is not None and is_unimodular(L) and Fraction(R_dual) == Fraction(R)

    def stream(lat, Rb, maps):
        index, norms, counts = _shell_index(lat, Rb, budget)
        K = len(norms)
        acc = [(np.zeros((K, T, J)), np.zeros((K, T, J)), np.zeros((K, T, J + 1))) for _ in maps]
        for X, v in stream_half_vectors(lat, Rb, budget, chunk):
            Xf = X.astype(np.float64)
            k = index[v]
            for (Wm, E), (P, C, A) in zip(maps, acc):
                Z = Xf @ Wm.T
                D = np.ascontiguousarray((Z * Z) @ E)
                _accumulate(D, k, J, P, C, A)
        out = []
        for P, C, A in acc:
            out.append((norms, counts, 2 * (P + C), 2 * A))
        return out

    def build(lat, Rb, data):
        norms, counts, P, A = data
        scaled, model = _model(lat, norms, counts)
        return PathSums(lat, Fraction(Rb), ts, scaled, counts, P, A, rho, model)

    if shared:
        # xi = A x gives w = z, so the dual deltas use W on the primal stream
        p, q = stream(L, R, [(W, Ep), (W, Ed)])
        return build(L, R, p), build(Ld, R, q)
    (p,) = stream(L, R, [(W, Ep)])
    primal = build(L, R, p)
    if R_dual is None:
        return primal, None
    (q,) = stream(Ld, R_dual, [(Wd, Ed)])
    return primal, build(Ld, R_dual, q)


# -- kernels -----------------------------------------------------------------


@dataclass(frozen=True)
class Kernel:
    """f(r) on scaled norms, with derivatives and tail moments.

    ``moment_tail(j, model, R)`` bounds sum_{Q[x] > R} |f^(j)(Q[x])| Q[x]^j.
    """

    kind: str
    a: mpf = mpf(0)
    c: mpf = mpf(1)

    def derivatives(self, r, J: int) -> list:
        if self.kind == "G":
            return [(-self.c) ** j * G(self.a + j, self.c * r) for j in range(J + 1)]
        if self.kind == "exp":
            e = mpmath.exp(-self.c * r)
            return [(-self.c) ** j * e for j in range(J + 1)]
        if self.kind == "power":
            return [(-1) ** j * mpmath.rf(self.a, j) * r ** (-self.a - j) for j in range(J + 1)]
        raise DomainError(self.kind)

    def moment_tail(self, j: int, model: CountModel, R) -> mpf:
        k = mpf(model.n) / 2
        if self.kind == "G":
            b = max(self.a + j - 1, 0)
            if self.c * R <= max(b, j):
                return mpmath.inf
            f = lambda r: (self.c * r) ** j * mpmath.exp(-self.c * r) / (self.c * R - b)
            I = integral_exp_poly(self.c, j, k)
            return model.tail(f, lambda RR: I(RR) / (self.c * R - b), R)
        if self.kind == "exp":
            if self.c * R <= j:
                return mpmath.inf
            return model.tail(lambda r: (self.c * r) ** j * mpmath.exp(-self.c * r), integral_exp_poly(self.c, j, k), R)
        if self.kind == "power":
            if self.a <= k:
                return mpmath.inf
            rf = mpmath.rf(self.a, j)
            return rf * model.tail(lambda r: r ** (-self.a), integral_power(self.a, k), R)
        raise DomainError(self.kind)


@dataclass(frozen=True)
class Increment:
    """sum_x f(Q_t[x]) - f(Q[x]) over the enumerated shells, per t."""

    values: tuple
    remainder: tuple
    rounding: tuple


def increment(sums: PathSums, f: Kernel) -> Increment:
    J = sums.J
    vals, rems, rnds = [], [], []
    derivs = [f.derivatives(m, J + 1) for m in sums.norms]
    for q, t in enumerate(sums.ts):
        grow = mpmath.expm1(abs(mpf(t)) * sums.rho)
        v, rem, rnd = [], [], []
        for k, m in enumerate(sums.norms):
            dk = derivs[k]
            for j in range(1, J + 1):
                v.append(dk[j] / factorial(j) * mpf(float(sums.power[k, q, j - 1])))
                rnd.append(abs(dk[j]) / factorial(j - 1) * mpf(float(sums.absolute[k, q, j - 1])))
            # |f^(J+1)| is decreasing in r for every kernel here: take its value at the inner edge
            inner = m * (1 - grow)
            if inner <= 0:
                rem.append(mpmath.inf)
            else:
                top = abs(f.derivatives(inner, J + 1)[J + 1])
                rem.append(top / factorial(J + 1) * mpf(float(sums.absolute[k, q, J])))
        vals.append(mpmath.fsum(v))
        rems.append(mpmath.fsum(rem))
        rnds.append(16 * sums.lattice.n * EPS * mpmath.fsum(rnd))
    return Increment(tuple(vals), tuple(rems), tuple(rnds))


def coefficient_tails(sums: PathSums, f: Kernel) -> tuple:
    """Bounds on the t and t^2 coefficients contributed beyond the radius."""
    R = sums.radius
    T1 = f.moment_tail(1, sums.model, R)
    T2 = f.moment_tail(2, sums.model, R)
    rho = mpf(sums.rho)
    return rho * T1, rho**2 * (T1 + T2) / 2


# -- central-difference fit -------------------------------------------------


def fit_steps(step: float) -> tuple:
    return (step, -step, step / 2, -step / 2)


@dataclass(frozen=True)
class QuadraticFit:
    """Richardson-extrapolated central differences of an increment.

    ``*_fit`` is the size of the Richardson correction, ``*_err`` the fit,
    Taylor-remainder, rounding and truncation bounds added up.
    """

    step: float
    linear: float
    quadratic: float
    linear_fit: float
    quadratic_fit: float
    linear_err: float
    quadratic_err: float

    @property
    def reliable(self) -> bool:
        return self.quadratic_fit <= 0.01 * abs(self.quadratic) or abs(self.quadratic) <= self.quadratic_err


def richardson(step: float, values: Sequence, errs: Sequence, trunc: tuple = (0, 0)) -> QuadraticFit:
    """``values`` at t = (h, -h, h/2, -h/2), relative to t = 0."""
    h = mpf(step)
    fp, fm, gp, gm = values
    c1h = (fp - fm) / (2 * h)
    c1g = (gp - gm) / h
    c2h = (fp + fm) / (2 * h * h)
    c2g = 2 * (gp + gm) / (h * h)
    c1 = (4 * c1g - c1h) / 3
    c2 = (4 * c2g - c2h) / 3
    e = list(errs)
    # worst-case propagation of per-point errors through the weights
    e1 = (4 * (e[2] + e[3]) / h + (e[0] + e[1]) / (2 * h)) / 3
    e2 = (8 * (e[2] + e[3]) / (h * h) + (e[0] + e[1]) / (2 * h * h)) / 3
    fit1 = abs(c1g - c1h) / 3
    fit2 = abs(c2g - c2h) / 3
    return QuadraticFit(
        float(step),
        float(c1),
        float(c2),
        float(fit1),
        float(fit2),
        float(fit1 + e1 + trunc[0]),
        float(fit2 + e2 + trunc[1]),
    )


def combine(parts: Sequence[tuple[mpf, Increment]]) -> tuple[list, list]:
    """Weighted sum of increments: (values, error bounds) per t."""
    T = len(parts[0][1].values)
    vals, errs = [], []
    for q in range(T):
        vals.append(mpmath.fsum(w * inc.values[q] for w, inc in parts))
        errs.append(mpmath.fsum(abs(w) * (inc.remainder[q] + inc.rounding[q]) for w, inc in parts))
    return vals, errs
