"""Shell-grouped lattice sums with rigorous truncation.

A ``Side`` is the shell data of one lattice (norms already multiplied by the
scale) up to an exact radius, together with the count model used to bound
everything beyond it.  The radius for a requested tolerance is the first
entry of a fixed geometric sequence whose tail bound is small enough; it
depends only on the Gram matrix, scale, kernel and tolerance, so two
evaluations that need the same sum truncate it identically.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil
from typing import Callable

import mpmath
from mpmath import mpf

from .errors import ResourceError
from .lattice import Lattice
from .shells import DEFAULT_BUDGET, _grid, first_k_shells, shell_counts
from .special import CountModel

GROWTH = Fraction(5, 4)
MAX_STEPS = 200


def to_mpf(q: Fraction) -> mpf:
    return mpf(q.numerator) / q.denominator


@dataclass(frozen=True)
class Side:
    lattice: Lattice
    bound: Fraction
    norms: tuple
    counts: tuple
    model: CountModel

    @property
    def radius(self) -> mpf:
        """Scaled truncation radius."""
        return self.lattice.scale.value() * to_mpf(self.bound)

    @property
    def size(self) -> int:
        return sum(self.counts)

    def total(self, f: Callable) -> mpf:
        return mpmath.fsum(a * f(m) for m, a in zip(self.norms, self.counts))

    @property
    def gap_radius(self) -> mpf:
        """Smallest scaled norm that can lie beyond the bound (norms sit on a grid)."""
        return self.lattice.scale.value() * to_mpf(self.bound + _grid(self.lattice.gram))

    def tail(self, f: Callable, integral: Callable) -> mpf:
        # N(r) is flat on (bound, bound + step), so the estimate may start there
        return self.model.tail(f, integral, self.gap_radius)


def side_data(L: Lattice, R, budget: int = DEFAULT_BUDGET) -> Side:
    R = Fraction(R)
    found = shell_counts(L, R, budget)
    lam = L.scale.value()
    norms = tuple(lam * to_mpf(m) for m in found.norms)
    counts = tuple(found.counts)
    model = CountModel(L.n, L.covolume_squared(), norms, counts)
    return Side(L, R, norms, counts, model)


def radius_sequence(L: Lattice, budget: int = DEFAULT_BUDGET):
    """m_1 * GROWTH^j rounded up to the norm grid of the Gram matrix."""
    step = _grid(L.gram)
    m1 = first_k_shells(L, 1, budget, keep_vectors=False)[0].norm
    r = Fraction(m1)
    last = None
    for _ in range(MAX_STEPS):
        R = step * ceil(r / step)
        if R != last:
            yield R
            last = R
        r *= GROWTH


def choose_side(
    L: Lattice, tail: Callable[[Side], mpf], tol, budget: int = DEFAULT_BUDGET, strict: bool = True
) -> tuple[Side, mpf]:
    """Smallest radius in the sequence with ``tail(side) <= tol``.

    When the budget runs out first, raise, or with ``strict=False`` return
    the deepest side reached and its (larger) tail bound.
    """
    best = None
    for R in radius_sequence(L, budget):
        try:
            side = side_data(L, R, budget)
        except ResourceError:
            break
        err = tail(side)
        best = (side, err)
        if err <= tol:
            return best
    if best is not None and not strict:
        return best
    got = "nothing" if best is None else mpmath.nstr(best[1], 3)
    raise ResourceError(
        f"{L.name}: tolerance {mpmath.nstr(mpf(tol), 3)} not reached within the vector budget {budget} "
        f"(best tail bound {got})"
    )
