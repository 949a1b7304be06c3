"""Epstein zeta function of a lattice for real s.

Continued form.  With Q the working form, Q* its inverse, D = det(Q)^(-1/2)
and Lambda(s) = pi^(-s) Gamma(s) zeta(Q, s),

    Lambda(s) = sum_x G(s, pi Q[x]) + D sum_xi G(n/2 - s, pi Q*[xi])
                - 1/s - D/(n/2 - s),

where G(a, u) = int_1^inf e^(-u t) t^(a-1) dt.  Writing Lambda_reg for the
right side without -1/s,

    zeta(s) = pi^s (Lambda_reg(s) / Gamma(s) - 1 / Gamma(s + 1)),

which is -1 at s = 0 with no truncation error and gives
zeta'(0) = Lambda_reg(0) - log(pi) - euler_gamma.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Sequence

import mpmath
import numpy as np
from mpmath import mpf

from .errors import DomainError, PoleError
from .lattice import Lattice, dual
from .paths import Kernel, combine, increment, path_sums
from .series import Side, choose_side
from .shells import DEFAULT_BUDGET
from .special import G, integral_G, integral_power

DEFAULT_PREC = 128


@dataclass(frozen=True)
class ZetaValue:
    s: float
    value: mpf
    err: mpf
    method: str

    def __float__(self) -> float:
        return float(self.value)

    @property
    def sign(self) -> int:
        """+1/-1 when certified by err, 0 otherwise."""
        if abs(self.value) <= self.err:
            return 0
        return 1 if self.value > 0 else -1


@dataclass(frozen=True)
class Completed:
    """Lambda(s) and its pieces, all truncated identically."""

    s: mpf
    primal: mpf
    dual: mpf
    D: mpf
    err: mpf
    sides: tuple = field(repr=False, default=())

    @property
    def regular(self) -> mpf:
        n2 = self.half_dim
        return self.primal + self.D * self.dual - self.D / (n2 - self.s)

    @property
    def half_dim(self) -> mpf:
        return mpf(self.sides[0].lattice.n) / 2

    @property
    def value(self) -> mpf:
        return self.regular - 1 / self.s


def _G_tail(a, side: Side):
    k = mpf(side.lattice.n) / 2
    return side.tail(lambda r: G(a, mpmath.pi * r), integral_G(a, mpmath.pi, k))


def _check_s(L: Lattice, s) -> None:
    if mpf(s) == mpf(L.n) / 2:
        raise PoleError(f"zeta has a pole at s = n/2 = {L.n / 2}")


def completed(
    L: Lattice, s, tol, budget: int = DEFAULT_BUDGET, prec: int = DEFAULT_PREC, strict: bool = True
) -> Completed:
    """Both shell sums of the continued form, each to tolerance.

    Each raw sum is truncated at the first radius whose tail bound is at
    most tol / (2 max(D, 1/D)); that rule is symmetric under L -> L*, so the
    functional equation holds for the truncated sums as well.
    """
    _check_s(L, s)
    with mpmath.workprec(prec):
        s = mpf(s)
        n2 = mpf(L.n) / 2
        D = 1 / mpmath.sqrt(L.covolume_squared())
        raw = mpf(tol) / (2 * max(D, 1 / D))
        Ld = dual(L)
        side, e1 = choose_side(L, lambda sd: _G_tail(s, sd), raw, budget, strict)
        dside, e2 = choose_side(Ld, lambda sd: _G_tail(n2 - s, sd), raw, budget, strict)
        p = side.total(lambda r: G(s, mpmath.pi * r))
        q = dside.total(lambda r: G(n2 - s, mpmath.pi * r))
        return Completed(s, p, q, D, e1 + D * e2, (side, dside))


def functional_equation_residual(L: Lattice, s, tol, budget: int = DEFAULT_BUDGET, prec: int = DEFAULT_PREC):
    """(|Lambda(A, s) - D Lambda(A*, n/2 - s)|, combined err)."""
    with mpmath.workprec(prec):
        a = completed(L, s, tol, budget, prec)
        b = completed(dual(L), mpf(L.n) / 2 - mpf(s), tol, budget, prec)
        return abs(a.value - a.D * b.value), a.err + a.D * b.err


def _continued(L: Lattice, s, tol, budget, prec, strict=True) -> ZetaValue:
    with mpmath.workprec(prec):
        s = mpf(s)
        factor = mpmath.pi**s * mpmath.rgamma(s)
        # rgamma vanishes at s = 0, -1, ...: zeta is then exact, any sum depth will do
        tol_c = mpf(tol) / abs(factor) if factor != 0 else mpmath.inf
        c = completed(L, s, tol_c, budget, prec, strict)
        value = factor * c.regular - mpmath.pi**s * mpmath.rgamma(s + 1)
        return ZetaValue(float(s), value, abs(factor) * c.err, "continued")


def _power_tail(s, side: Side):
    k = mpf(side.lattice.n) / 2
    return side.tail(lambda r: r ** (-s), integral_power(s, k))


def _direct(L: Lattice, s, tol, budget, prec) -> ZetaValue:
    with mpmath.workprec(prec):
        s = mpf(s)
        if s <= mpf(L.n) / 2:
            raise DomainError(f"the direct series needs s > n/2 = {L.n / 2}")
        side, err = choose_side(L, lambda sd: _power_tail(s, sd), tol, budget)
        return ZetaValue(float(s), side.total(lambda r: r ** (-s)), err, "direct-series")


def zeta(
    L: Lattice,
    s,
    tol=1e-12,
    budget: int = DEFAULT_BUDGET,
    prec: int = DEFAULT_PREC,
    method: str = "continued",
    strict: bool = True,
) -> ZetaValue:
    """zeta(L, s) with a rigorous truncation bound ``err <= tol``.

    ``method`` is "continued" (any real s != n/2) or "direct-series"
    (s > n/2 only; slow to converge near the pole).  With ``strict=False``
    an unreachable tolerance returns the best value within the budget, with
    its true error bound, instead of raising.
    """
    _check_s(L, s)
    if method == "continued":
        return _continued(L, s, tol, budget, prec, strict)
    if method in ("direct", "direct-series"):
        return _direct(L, s, tol, budget, prec)
    raise DomainError(f"unknown method {method!r}")


def zeta_derivative_at_0(L: Lattice, tol=1e-12, budget: int = DEFAULT_BUDGET, prec: int = DEFAULT_PREC) -> ZetaValue:
    """d/ds zeta(L, s) at s = 0, returned as a ZetaValue with s = 0."""
    with mpmath.workprec(prec):
        c = completed(L, 0, tol, budget, prec)
        # the -1/s pole is cancelled by 1/Gamma(s); what remains is regular
        value = c.regular - mpmath.log(mpmath.pi) - mpmath.euler
        return ZetaValue(0.0, value, c.err, "continued")


# -- strip scan ---------------------------------------------------------------


@dataclass(frozen=True)
class StripScan:
    lattice: str
    grid: tuple
    values: tuple
    brackets: tuple
    zeros: tuple

    @property
    def signs(self) -> tuple:
        return tuple(v.sign for v in self.values)

    @property
    def all_negative(self) -> bool:
        return all(sg < 0 for sg in self.signs)

    @property
    def summary(self) -> str:
        sg = self.signs
        neg, pos, unk = sg.count(-1), sg.count(1), sg.count(0)
        return f"{neg} negative, {pos} positive, {unk} undetermined"


def strip_grid(n: int, points: int) -> list:
    """``points`` uniform values in (delta, n/2 - delta), delta = (n/2)/(points+1)."""
    if points < 3:
        raise DomainError("strip scan needs at least 3 grid points")
    h = mpf(n) / 2 / (points + 1)
    return [h * (k + 1) for k in range(points)]


def strip_scan(
    L: Lattice,
    points: int = 37,
    tol=1e-8,
    budget: int = DEFAULT_BUDGET,
    prec: int = DEFAULT_PREC,
    width: float = 1e-6,
) -> StripScan:
    """Signs of zeta on a uniform grid of the critical strip, zeros bisected.

    Values are best effort: where ``tol`` is out of reach of the budget the
    achieved bound is kept, and a sign counts only when |zeta| > err.
    """
    grid = strip_grid(L.n, points)
    values = [zeta(L, s, tol, budget, prec, strict=False) for s in grid]
    brackets, zeros = [], []
    for (a, va), (b, vb) in zip(zip(grid, values), zip(grid[1:], values[1:])):
        if va.sign * vb.sign < 0:
            brackets.append((float(a), float(b)))
            lo, hi, slo = mpf(a), mpf(b), va.sign
            while hi - lo > width:
                mid = (lo + hi) / 2
                sm = zeta(L, mid, tol, budget, prec, strict=False).sign
                if sm == 0:
                    break
                if sm == slo:
                    lo = mid
                else:
                    hi = mid
            zeros.append((float(lo), float(hi)))
    return StripScan(L.name, tuple(float(s) for s in grid), tuple(values), tuple(brackets), tuple(zeros))


def zeta_csv(values: Sequence[ZetaValue], digits: int = 17) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["s", "zeta", "err"])
    for v in values:
        w.writerow([f"{v.s:.{digits}e}", mpmath.nstr(v.value, digits, min_fixed=1, max_fixed=0), mpmath.nstr(v.err, 3, min_fixed=1, max_fixed=0)])
    return buf.getvalue()


# -- heights along the determinant-one cone ------------------------------------

HEIGHT_OFFSETS = (-2, -1, 1, 2)


@dataclass(frozen=True)
class HeightRow:
    """zeta'((e_A(tH))*, 0) at t = -2h, -h, 0, h, 2h, with per-point bounds.

    ``quadratic`` is the least-squares t^2 coefficient of the five values;
    ``curvature`` = 2 * quadratic is the second derivative in t.
    """

    tau: float
    ts: tuple
    values: tuple
    errs: tuple
    quadratic: float

    @property
    def curvature(self) -> float:
        return 2 * self.quadratic

    @property
    def strict_min_at_zero(self) -> bool:
        mid = len(self.values) // 2
        v0, e0 = self.values[mid], self.errs[mid]
        return all(v - e > v0 + e0 for i, (v, e) in enumerate(zip(self.values, self.errs)) if i != mid)

    @property
    def constant(self) -> bool:
        mid = len(self.values) // 2
        return all(abs(v - self.values[mid]) <= e + self.errs[mid] for v, e in zip(self.values, self.errs))


def height_compare(
    L: Lattice,
    directions: Sequence,
    step: float = 1e-2,
    tol=1e-12,
    budget: int = DEFAULT_BUDGET,
    prec: int = DEFAULT_PREC,
) -> list[HeightRow]:
    """Heights of the tori of (e_A(tH))* for each direction H at A = L.gram.

    zeta'(B, 0) for B = (e_A(tH))^-1 sums E1 over the dual vectors and
    G(n/2, .) over L's own vectors; both sums move along the path and are
    evaluated by the per-shell expansion at radii fixed at t = 0.
    """
    with mpmath.workprec(prec):
        Ld = dual(L)
        base = zeta_derivative_at_0(Ld, tol, budget, prec)
        c = completed(Ld, 0, tol, budget, prec)
        R_b, R_l = c.sides[0].bound, c.sides[1].bound
        k = mpf(L.n) / 2
        DB = 1 / mpmath.sqrt(Ld.covolume_squared())
        ts = tuple(o * step for o in HEIGHT_OFFSETS)
        rows = []
        for H in directions:
            if R_l == R_b and L.gram.det == 1 and L.gram.is_integral:
                own, other = path_sums(L, H, ts, R_l, R_l, budget=budget)
            else:
                own, other = path_sums(L, H, ts, R_l, R_b, budget=budget)
            parts = [(mpf(1), increment(other, Kernel("G", a=mpf(0), c=mpmath.pi)))]
            parts.append((DB, increment(own, Kernel("G", a=k, c=mpmath.pi))))
            dv, de = combine(parts)
            values = [base.value + v for v in dv[:2]] + [base.value] + [base.value + v for v in dv[2:]]
            errs = [base.err + e for e in de[:2]] + [base.err] + [base.err + e for e in de[2:]]
            tt = np.array([t for t in ts[:2]] + [0.0] + [t for t in ts[2:]])
            rel = np.array([float(v) for v in dv[:2]] + [0.0] + [float(v) for v in dv[2:]])
            quad = float(np.polyfit(tt, rel, 2)[0])
            rows.append(HeightRow(H.invariant_norm, tuple(float(t) for t in tt), tuple(values), tuple(errs), quad))
        return rows
