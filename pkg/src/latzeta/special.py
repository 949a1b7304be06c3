"""Incomplete-gamma kernels and shell-series tail bounds.

G(a, u) = int_1^inf exp(-u t) t^(a-1) dt = u^(-a) Gamma(a, u) is the shell
kernel of the continued zeta function.  Its r-derivatives are again G:
d^j/dr^j G(a, c r) = (-c)^j G(a + j, c r).

Tail bounds model the lattice point count N(r) = #{x != 0 : Q[x] <= r} by
N_b(r) = kappa V_n r^(n/2) / sqrt(det Q), with kappa four times the largest
ratio N(r)/volume seen on the outer enumerated shells.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import mpmath
from mpmath import mpf


def G(a, u):
    """int_1^inf e^(-u t) t^(a-1) dt for u > 0 (any real a)."""
    return mpmath.expint(1 - a, u)


def G_bound(a, u):
    """Upper bound e^(-u) / (u - max(a-1, 0)), valid when u exceeds that."""
    b = max(mpf(a) - 1, 0)
    if u <= b:
        return mpmath.inf
    return mpmath.exp(-u) / (u - b)


def unit_ball_volume(n: int):
    return mpmath.pi ** (mpf(n) / 2) / mpmath.gamma(mpf(n) / 2 + 1)


@dataclass(frozen=True)
class CountModel:
    """Growth model for N(r) fitted on enumerated shells.

    ``norms`` are scaled norms (working form), ``counts`` the shell sizes.
    """

    n: int
    det: mpf
    norms: tuple
    counts: tuple
    safety: float = 4.0

    @property
    def radius(self):
        return self.norms[-1] if self.norms else mpf(0)

    @property
    def enumerated(self) -> int:
        return sum(self.counts)

    @property
    def coefficient(self):
        """K with N_b(r) = K r^(n/2).

        The ratio N(r)/volume is taken over the outer half of the enumerated
        radii: near the origin it reflects the kissing number, not growth.
        """
        base = unit_ball_volume(self.n) / mpmath.sqrt(self.det)
        ratio = mpf(1)
        total = 0
        for m, a in zip(self.norms, self.counts):
            total += a
            if 2 * m >= self.radius:
                ratio = max(ratio, total / (base * mpf(m) ** (mpf(self.n) / 2)))
        return self.safety * ratio * base

    def tail(self, f: Callable, integral: Callable, R=None):
        """Bound on sum_{Q[x] > R} f(Q[x]) for f >= 0 decreasing beyond R.

        ``integral(R)`` must bound int_R^inf r^(n/2 - 1) f(r) dr.
        """
        R = self.radius if R is None else R
        if R <= 0:
            return mpmath.inf
        K = self.coefficient
        k = mpf(self.n) / 2
        excess = max(K * R**k - self.enumerated, 0)
        return f(R) * excess + k * K * integral(R)


# Integrals int_R^inf r^(k-1) f(r) dr for the kernels used in the engines.


def integral_G(a, c, k):
    """For f(r) = G(a, c r), via the bound G(a, u) <= e^-u / (u - b)."""
    b = max(mpf(a) - 1, 0)

    def I(R):
        u = c * R
        if u <= b:
            return mpmath.inf
        return c ** (-k) * mpmath.gammainc(k, u) / (u - b)

    return I


def integral_power(s, k):
    """For f(r) = r^(-s), s > k."""

    def I(R):
        return R ** (k - s) / (s - k)

    return I


def integral_exp_poly(c, j, k):
    """For f(r) = (c r)^j e^(-c r)."""

    def I(R):
        return c ** (-k) * mpmath.gammainc(k + j, c * R)

    return I


def fsum(values: Sequence) -> mpf:
    return mpmath.fsum(values)
