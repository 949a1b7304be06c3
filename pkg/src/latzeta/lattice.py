"""Gram matrices, lattices, duality, rescaling and the lattice file format."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import Any, Sequence

import mpmath
import numpy as np

from . import exact
from .errors import DomainError


@dataclass(frozen=True)
class GramMatrix:
    """Exact symmetric positive definite matrix over Q."""

    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(Fraction(v) for v in row) for row in self.entries)
        object.__setattr__(self, "entries", rows)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise DomainError("Gram matrix must be square and non-empty")
        if not exact.is_symmetric(rows):
            raise DomainError("Gram matrix is not symmetric")
        if not exact.is_positive_definite(rows):
            raise DomainError("Gram matrix is not positive definite")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "GramMatrix":
        return cls(tuple(tuple(Fraction(v) for v in r) for r in rows))

    @property
    def n(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def rows(self) -> list[list[Fraction]]:
        return [list(r) for r in self.entries]

    @cached_property
    def det(self) -> Fraction:
        return exact.det(self.entries)

    @cached_property
    def inverse(self) -> "GramMatrix":
        return GramMatrix.from_rows(exact.inverse(self.entries))

    def value(self, x: Sequence[int]) -> Fraction:
        return exact.quadratic_form(self.entries, x)

    @cached_property
    def is_integral(self) -> bool:
        return exact.is_integral(self.entries)

    @cached_property
    def is_even(self) -> bool:
        """Integral with even diagonal, i.e. x'Ax is even for all integer x."""
        return self.is_integral and all(self.entries[i][i].numerator % 2 == 0 for i in range(self.n))

    @cached_property
    def denominator(self) -> int:
        return exact.common_denominator(self.entries)

    def integer_matrix(self) -> tuple[np.ndarray, int]:
        """(M, d) with gram = M / d and M an int64 array."""
        d = self.denominator
        m = np.array([[int(v * d) for v in row] for row in self.entries], dtype=np.int64)
        return m, d

    def to_numpy(self) -> np.ndarray:
        return np.array([[float(v) for v in row] for row in self.entries])

    def scaled(self, c) -> "GramMatrix":
        c = Fraction(c)
        return GramMatrix.from_rows([[c * v for v in row] for row in self.entries])

    def conjugate(self, u: Sequence[Sequence[int]]) -> "GramMatrix":
        """U' A U, the Gram matrix after the basis change x -> U x."""
        return GramMatrix.from_rows(exact.matmul(exact.matmul(exact.transpose(u), self.entries), u))


@dataclass(frozen=True)
class Scale:
    """A positive factor lambda^2 = rational * radicand**(1/root).

    Irrational covolume normalisations stay symbolic; only ``value`` leaves
    exact arithmetic.
    """

    rational: Fraction = Fraction(1)
    radicand: Fraction = Fraction(1)
    root: int = 1

    def __post_init__(self):
        object.__setattr__(self, "rational", Fraction(self.rational))
        object.__setattr__(self, "radicand", Fraction(self.radicand))
        if self.rational <= 0 or self.radicand <= 0 or self.root < 1:
            raise DomainError("scale must be positive")
        # fold exact roots back into the rational part
        if self.root > 1:
            num = _exact_root(self.radicand.numerator, self.root)
            den = _exact_root(self.radicand.denominator, self.root)
            if num is not None and den is not None:
                object.__setattr__(self, "rational", self.rational * Fraction(num, den))
                object.__setattr__(self, "radicand", Fraction(1))
                object.__setattr__(self, "root", 1)
        if self.radicand == 1:
            object.__setattr__(self, "root", 1)

    @property
    def is_rational(self) -> bool:
        return self.radicand == 1

    def value(self, prec: int | None = None) -> mpmath.mpf:
        with mpmath.workprec(prec or mpmath.mp.prec):
            return _mpf(self.rational) * mpmath.root(_mpf(self.radicand), self.root)

    def __float__(self) -> float:
        return float(self.value(80))

    def power(self, k: int) -> "Scale":
        """lambda^(2k) as a Scale, for integer k (negative allowed)."""
        if k >= 0:
            return Scale(self.rational**k, self.radicand**k, self.root)
        return Scale(self.rational**k, self.radicand**k, self.root)

    def __str__(self) -> str:
        if self.is_rational:
            return exact.format_rational(self.rational)
        return f"{exact.format_rational(self.rational)}*({exact.format_rational(self.radicand)})^(1/{self.root})"


def _mpf(q: Fraction) -> mpmath.mpf:
    return mpmath.mpf(q.numerator) / q.denominator


def _exact_root(m: int, k: int) -> int | None:
    r = round(m ** (1.0 / k))
    for c in (r - 1, r, r + 1):
        if c >= 0 and c**k == m:
            return c
    return None


@dataclass(frozen=True)
class Frame:
    """Integer coordinates for a lattice: gram = weight * P P'.

    Row i of ``basis`` is the i-th basis vector, so the lattice vector with
    coordinates x sits at y = P' x.  Constructions that start from explicit
    vectors keep them; moment sums in y are cheaper and better scaled.
    """

    basis: tuple[tuple[int, ...], ...]
    weight: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "basis", tuple(tuple(int(v) for v in r) for r in self.basis))
        object.__setattr__(self, "weight", Fraction(self.weight))

    def matrix(self) -> np.ndarray:
        return np.array(self.basis, dtype=np.int64)

    def gram(self) -> list[list[Fraction]]:
        b = self.basis
        return [[self.weight * sum(p * q for p, q in zip(u, v)) for v in b] for u in b]


@dataclass(frozen=True)
class Lattice:
    """A named lattice: exact Gram matrix plus a symbolic scale.

    The working quadratic form is ``scale * gram``.  Design certificates and
    shell data live on the exact ``gram``; the scale enters only at
    numerical evaluation time.  ``frame`` is optional and must reproduce
    ``gram`` exactly.
    """

    name: str
    gram: GramMatrix
    scale: Scale = field(default_factory=Scale)
    provenance: tuple = ("file",)
    frame: Frame | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.frame is not None and [list(r) for r in self.gram.entries] != self.frame.gram():
            raise DomainError("frame does not reproduce the Gram matrix")

    @property
    def n(self) -> int:
        return self.gram.n

    def covolume_squared(self) -> mpmath.mpf:
        """det(scale * gram)."""
        return self.scale.value() ** self.n * _mpf(self.gram.det)

    def working_gram(self) -> np.ndarray:
        return float(self.scale) * self.gram.to_numpy()


def dual(lat: Lattice) -> Lattice:
    """Dual lattice: Gram inverse; the scale inverts with it."""
    inv = lat.gram.inverse
    scale = lat.scale.power(-1)
    return Lattice(f"dual({lat.name})", inv, scale, ("dual-of",) + (lat.provenance,))


def rescale_to_covolume_one(lat: Lattice) -> Lattice:
    """Attach lambda^2 = det(gram)^(-1/n) so that det(scale * gram) = 1."""
    d = lat.gram.det
    scale = Scale(1, 1 / d, lat.n)
    if lat.scale == scale:
        return lat
    return replace(lat, scale=scale, provenance=("rescaled",) + (lat.provenance,))


def rescaled(lat: Lattice, factor) -> Lattice:
    """Multiply the Gram matrix itself by a positive rational."""
    frame = None
    if lat.frame is not None:
        frame = Frame(lat.frame.basis, lat.frame.weight * Fraction(factor))
    return Lattice(
        f"{factor}*{lat.name}", lat.gram.scaled(factor), lat.scale, ("rescaled",) + (lat.provenance,), frame
    )


# -- file format ------------------------------------------------------------


def lattice_to_document(lat: Lattice) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "name": lat.name,
        "dim": lat.n,
        "gram": [[exact.format_rational(v) for v in row] for row in lat.gram.entries],
    }
    if lat.scale != Scale():
        doc["scale"] = exact.format_rational(lat.scale.rational)
        if not lat.scale.is_rational:
            doc["scale_radicand"] = exact.format_rational(lat.scale.radicand)
            doc["scale_root"] = lat.scale.root
    return doc


def lattice_from_document(doc: dict[str, Any]) -> Lattice:
    try:
        n = int(doc["dim"])
        rows = [[exact.parse_rational(str(v)) for v in row] for row in doc["gram"]]
        name = str(doc["name"])
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError(f"malformed lattice document: {exc}") from exc
    if len(rows) != n:
        raise DomainError(f"dim {n} does not match {len(rows)} gram rows")
    scale = Scale(
        exact.parse_rational(str(doc.get("scale", "1"))),
        exact.parse_rational(str(doc.get("scale_radicand", "1"))),
        int(doc.get("scale_root", 1)),
    )
    return Lattice(name, GramMatrix.from_rows(rows), scale, ("file",))


def write_lattice(lat: Lattice, path: str | Path) -> None:
    Path(path).write_text(json.dumps(lattice_to_document(lat), indent=1) + "\n")


def read_lattice(path: str | Path) -> Lattice:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise DomainError(f"{path}: not a lattice document ({exc})") from exc
    return lattice_from_document(doc)
