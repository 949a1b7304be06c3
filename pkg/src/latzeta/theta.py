"""Theta function on the imaginary axis and the local-minimum sum S(y).

Theta(y) = sum_x exp(-pi y Q[x]).  For y < 1 the sum runs over the dual
instead: Theta(y) = D y^(-n/2) Theta*(1/y), D = det(Q)^(-1/2).

S(y) = sum_x u (u - (n/2 + 1)) e^(-u) with u = pi y Q[x].  Writing
Y = y d/dy, S = Y(Y + n/2) Theta, and that operator commutes with the
transformation above, so S(y) = D y^(-n/2) S*(1/y) as well.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Sequence

import mpmath
import numpy as np
from mpmath import mpf

from .designs import certify_lattice
from .errors import DomainError, PreconditionError
from .lattice import Lattice, dual
from .paths import Kernel, coefficient_tails, fit_steps, increment, path_sums, richardson
from .series import Side, choose_side
from .shells import DEFAULT_BUDGET, first_k_shells
from .special import integral_exp_poly
from .tangent import TangentDirection

DEFAULT_PREC = 128


@dataclass(frozen=True)
class ThetaValue:
    """``excess`` is value - 1, kept separately since it can underflow 1."""

    y: float
    value: mpf
    err: mpf
    excess: mpf


@dataclass(frozen=True)
class ThetaSum:
    """S(y) with its bound; ``sign`` is 0 when |S| <= err (inconclusive)."""

    y: float
    value: mpf
    err: mpf

    @property
    def sign(self) -> int:
        if abs(self.value) <= self.err:
            return 0
        return 1 if self.value > 0 else -1

    @property
    def conclusive(self) -> bool:
        return self.sign != 0


def _exp_tail(c, j: int, side: Side):
    k = mpf(side.lattice.n) / 2
    if c * side.radius <= j:
        return mpmath.inf
    return side.tail(lambda r: (c * r) ** j * mpmath.exp(-c * r), integral_exp_poly(c, j, k))


def _theta_side(L: Lattice, y, tol, budget, strict) -> tuple[Side, mpf]:
    c = mpmath.pi * y
    return choose_side(L, lambda sd: _exp_tail(c, 0, sd), tol, budget, strict)


def theta(
    L: Lattice,
    y,
    tol=1e-12,
    budget: int = DEFAULT_BUDGET,
    prec: int = DEFAULT_PREC,
    transform: bool = True,
    strict: bool = True,
) -> ThetaValue:
    """Theta_L(iy) with truncation bound ``err <= tol``.

    ``transform=False`` sums directly even for y < 1 (slow; used to check
    the transformation itself).
    """
    with mpmath.workprec(prec):
        y = mpf(y)
        if y <= 0:
            raise DomainError("theta needs y > 0")
        if y < 1 and transform:
            k = mpf(L.n) / 2
            D = 1 / mpmath.sqrt(L.covolume_squared())
            w = D * y ** (-k)
            inner = theta(dual(L), 1 / y, tol / w, budget, prec, True, strict)
            return ThetaValue(float(y), w * inner.value, w * inner.err, w * inner.value - 1)
        side, err = _theta_side(L, y, tol, budget, strict)
        c = mpmath.pi * y
        excess = side.total(lambda r: mpmath.exp(-c * r))
        return ThetaValue(float(y), 1 + excess, err, excess)


def theta_min_sum(
    L: Lattice, y, tol=1e-12, budget: int = DEFAULT_BUDGET, prec: int = DEFAULT_PREC, strict: bool = True
) -> ThetaSum:
    """S(y) = sum u (u - (n/2+1)) e^-u, u = pi y Q[x], with a tail bound.

    Beyond the truncation radius u(u - c) e^-u <= u^2 e^-u is used, which
    needs pi y R > 2.
    """
    with mpmath.workprec(prec):
        y = mpf(y)
        if y <= 0:
            raise DomainError("S(y) needs y > 0")
        k = mpf(L.n) / 2
        if y < 1:
            D = 1 / mpmath.sqrt(L.covolume_squared())
            w = D * y ** (-k)
            inner = theta_min_sum(dual(L), 1 / y, tol / w, budget, prec, strict)
            return ThetaSum(float(y), w * inner.value, w * inner.err)
        c = mpmath.pi * y
        side, err = choose_side(L, lambda sd: _exp_tail(c, 2, sd), tol, budget, strict)
        value = side.total(lambda r: (c * r) * (c * r - (k + 1)) * mpmath.exp(-c * r))
        return ThetaSum(float(y), value, err)


def threshold(L: Lattice, budget: int = DEFAULT_BUDGET) -> float:
    """y* = (n/2 + 1) / (pi m_1) on the working scale."""
    m1 = first_k_shells(L, 1, budget, keep_vectors=False)[0].norm
    return float((mpf(L.n) / 2 + 1) / (mpmath.pi * L.scale.value() * mpf(m1.numerator) / m1.denominator))


@dataclass(frozen=True)
class ThresholdScan:
    y_star: float
    grid: tuple
    sums: tuple
    smallest_certified: float | None


def threshold_scan(L: Lattice, grid: Sequence[float], tol=1e-12, budget: int = DEFAULT_BUDGET) -> ThresholdScan:
    """S(y) on a grid, with the smallest y whose positivity is certified
    and from which on every grid point stays certified positive."""
    grid = tuple(sorted(float(y) for y in grid))
    sums = tuple(theta_min_sum(L, y, tol, budget, strict=False) for y in grid)
    smallest = None
    for y, S in zip(reversed(grid), reversed(sums)):
        if S.sign > 0:
            smallest = y
        else:
            break
    return ThresholdScan(threshold(L, budget), grid, sums, smallest)


def functional_residual(L: Lattice, y, tol=1e-12, budget: int = DEFAULT_BUDGET, prec: int = DEFAULT_PREC):
    """|Theta_A(1/y) - y^(n/2) D Theta_{A^-1}(y)| from two direct sums, and its bound."""
    with mpmath.workprec(prec):
        y = mpf(y)
        k = mpf(L.n) / 2
        D = 1 / mpmath.sqrt(L.covolume_squared())
        a = theta(L, 1 / y, tol, budget, prec, transform=False)
        b = theta(dual(L), y, tol, budget, prec, transform=False)
        w = y**k * D
        return abs(a.value - w * b.value), a.err + w * b.err


def mellin_check(L: Lattice, s, tol=1e-20, prec: int = 80, budget: int = DEFAULT_BUDGET):
    """Integrate (Theta - 1) y^(s-1) over (0, inf) by quadrature.

    Returns (integral, quadrature error estimate, truncation bound); the
    integral should equal Gamma(s) pi^(-s) zeta(L, s) for s > n/2.
    """
    with mpmath.workprec(prec):
        s = mpf(s)
        k = mpf(L.n) / 2
        if s <= k:
            raise DomainError("the Mellin integral converges for s > n/2 only")
        D = 1 / mpmath.sqrt(L.covolume_squared())
        side, e1 = _theta_side(L, 1, tol, budget, True)
        dside, e2 = _theta_side(dual(L), 1, tol, budget, True)

        def upper(y):
            return side.total(lambda r: mpmath.exp(-mpmath.pi * y * r)) * y ** (s - 1)

        def lower(y):
            inner = 1 + dside.total(lambda r: mpmath.exp(-mpmath.pi * r / y))
            return (D * y ** (-k) * inner - 1) * y ** (s - 1)

        I1, q1 = mpmath.quad(upper, [1, 2, 4, mpmath.inf], error=True)
        I2, q2 = mpmath.quad(lower, [0, mpf(1) / 4, mpf(1) / 2, 1], error=True)
        # integrate the pointwise tail bounds of both truncated sums
        t1 = mpmath.quad(lambda y: _exp_tail(mpmath.pi * y, 0, side) * y ** (s - 1), [1, mpmath.inf])
        t2 = mpmath.quad(lambda y: D * _exp_tail(mpmath.pi / y, 0, dside) * y ** (s - 1 - k), [0, 1])
        return I1 + I2, q1 + q2, t1 + t2


@dataclass(frozen=True)
class ThetaFit:
    y: float
    fitted: float
    predicted: float
    gap: float
    linear: float
    fit_err: float
    linear_err: float
    reliable: bool


def theta_second_variation_fit(
    L: Lattice,
    y: float,
    H: TangentDirection,
    step: float = 1e-3,
    tol=1e-14,
    budget: int = DEFAULT_BUDGET,
    prec: int = DEFAULT_PREC,
    require_certificates: bool = True,
) -> ThetaFit:
    """Quadratic coefficient of t -> Theta_{e_A(tH)}(iy) against
    Tr((A^-1 H)^2) S(y) / (n (n + 2)).

    The truncation radius is the one used for Theta(y) itself.  With
    ``require_certificates`` the shells inside it must all be 4-designs.
    """
    with mpmath.workprec(prec):
        y = mpf(y)
        if y < 1:
            raise DomainError("the path fit sums the lattice directly; use y >= 1")
        n = L.n
        side, _ = _theta_side(L, y, tol, budget, False)
        K = len(side.counts)
        if require_certificates and not certify_lattice(L, K, 4, budget).all_4_design:
            raise PreconditionError(f"{L.name}: shells 1..{K} are not all 4-designs")
        ts = fit_steps(step)
        sums, _ = path_sums(L, H, ts, side.bound, budget=budget)
        f = Kernel("exp", c=mpmath.pi * y)
        inc = increment(sums, f)
        errs = [r + q for r, q in zip(inc.remainder, inc.rounding)]
        fit = richardson(step, inc.values, errs, coefficient_tails(sums, f))
        S = theta_min_sum(L, y, tol, budget, prec, strict=False)
        predicted = float(H.invariant_norm * S.value / (n * (n + 2)))
        gap = abs(fit.quadratic - predicted) / abs(predicted) if predicted else abs(fit.quadratic)
        return ThetaFit(float(y), fit.quadratic, predicted, gap, fit.linear, fit.quadratic_err, fit.linear_err, fit.reliable)


def theta_csv(values: Sequence[ThetaValue], digits: int = 17) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["y", "theta", "err"])
    for v in values:
        w.writerow([f"{v.y:.{digits}e}", mpmath.nstr(v.value, digits, min_fixed=1, max_fixed=0), mpmath.nstr(v.err, 3, min_fixed=1, max_fixed=0)])
    return buf.getvalue()


def sum_csv(values: Sequence[ThetaSum], digits: int = 17) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["y", "S", "err", "sign"])
    for v in values:
        w.writerow(
            [
                f"{v.y:.{digits}e}",
                mpmath.nstr(v.value, digits, min_fixed=1, max_fixed=0),
                mpmath.nstr(v.err, 3, min_fixed=1, max_fixed=0),
                v.sign,
            ]
        )
    return buf.getvalue()


def monotone_on(L: Lattice, grid: Sequence[float], tol=1e-12) -> bool:
    vals = [theta(L, y, tol).value for y in sorted(grid)]
    return bool(np.all([a > b for a, b in zip(vals, vals[1:])]))
