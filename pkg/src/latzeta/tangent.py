"""Tangent space of the determinant-one cone and its exponential map.

Directions H at A satisfy Tr(A^-1 H) = 0.  e_A(tH) = A exp(t A^-1 H) is
evaluated as A^(1/2) exp(t M) A^(1/2) with M = A^(-1/2) H A^(-1/2), which is
symmetric, so everything goes through one eigendecomposition.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, RangeError
from .lattice import GramMatrix

TANGENCY_TOL = 1e-12


def _sym_sqrt(A: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    w, V = np.linalg.eigh(A)
    if w[0] <= 0:
        raise DomainError("matrix is not positive definite")
    r = np.sqrt(w)
    return (V * r) @ V.T, (V / r) @ V.T


def _as_array(A) -> np.ndarray:
    if isinstance(A, GramMatrix):
        return A.to_numpy()
    return np.asarray(A, dtype=float)


@dataclass(frozen=True)
class TangentDirection:
    """A symmetric H with Tr(A^-1 H) = 0 at the base Gram matrix A."""

    H: np.ndarray = field(repr=False)
    base: GramMatrix

    def __post_init__(self):
        H = np.array(self.H, dtype=float)
        if H.shape != (self.base.n, self.base.n) or not np.allclose(H, H.T, rtol=0, atol=1e-14 * (1 + np.abs(H).max())):
            raise DomainError("direction must be a symmetric n x n matrix")
        H = (H + H.T) / 2
        A = self.base.to_numpy()
        tr = np.trace(np.linalg.solve(A, H))
        if abs(tr) > TANGENCY_TOL * max(1.0, np.linalg.norm(H)):
            raise DomainError(f"not tangent: Tr(A^-1 H) = {tr:.3e}")
        H.setflags(write=False)
        object.__setattr__(self, "H", H)

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def invariant_norm(self) -> float:
        """Tr((A^-1 H)^2), the quantity in the second-variation formulas."""
        M = np.linalg.solve(self.base.to_numpy(), self.H)
        return float(np.trace(M @ M))

    def scaled(self, c: float) -> "TangentDirection":
        return TangentDirection(c * self.H, self.base)

    def spectrum(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(lam, W, Wd): eigenvalues of M and the maps x -> z, xi -> w.

        A_t[x] = sum_i exp(t lam_i) z_i^2 with z = W x, and
        A_t^-1[xi] = sum_i exp(-t lam_i) w_i^2 with w = Wd xi.
        """
        A = self.base.to_numpy()
        R, Ri = _sym_sqrt(A)
        M = Ri @ self.H @ Ri
        lam, Q = np.linalg.eigh((M + M.T) / 2)
        return lam, Q.T @ R, Q.T @ Ri


def tangent_project(A, S) -> TangentDirection:
    """H = S - (<A^-1, S> / <A^-1, A^-1>) A^-1 (Frobenius inner product)."""
    base = A if isinstance(A, GramMatrix) else GramMatrix.from_rows(np.asarray(A).tolist())
    S = np.asarray(S, dtype=float)
    S = (S + S.T) / 2
    B = np.linalg.inv(base.to_numpy())
    B = (B + B.T) / 2
    H = S - (np.sum(B * S) / np.sum(B * B)) * B
    # one refinement step keeps Tr(A^-1 H) at rounding level
    H = H - (np.sum(B * H) / np.sum(B * B)) * B
    return TangentDirection(H, base)


def random_direction(A: GramMatrix, rng: np.random.Generator, normalize: str = "invariant") -> TangentDirection:
    """Entries uniform in [-1, 1], symmetrised, projected and normalised.

    ``normalize`` is "invariant" (Tr((A^-1 H)^2) = 1) or "frobenius".
    """
    n = A.n
    S = rng.uniform(-1.0, 1.0, size=(n, n))
    S = np.triu(S) + np.triu(S, 1).T
    d = tangent_project(A, S)
    if normalize == "invariant":
        return d.scaled(1 / np.sqrt(d.invariant_norm))
    if normalize == "frobenius":
        return d.scaled(1 / np.linalg.norm(d.H))
    raise DomainError(f"unknown normalisation {normalize!r}")


def random_directions(A: GramMatrix, count: int, seed: int, normalize: str = "invariant") -> list[TangentDirection]:
    rng = np.random.default_rng(seed)
    return [random_direction(A, rng, normalize) for _ in range(count)]


def exp_map(A, H: TangentDirection, t: float) -> np.ndarray:
    """A exp(t A^-1 H), symmetric positive definite, det preserved."""
    base = _as_array(A)
    if t == 0:
        return base.copy()
    R, Ri = _sym_sqrt(base)
    M = Ri @ H.H @ Ri
    lam, Q = np.linalg.eigh((M + M.T) / 2)
    arg = t * lam
    if np.max(np.abs(arg)) > 700:
        raise RangeError(f"exp_map overflows at t = {t}")
    E = (Q * np.exp(arg)) @ Q.T
    out = R @ E @ R
    out = (out + out.T) / 2
    if np.linalg.eigvalsh(out)[0] <= 0:
        raise RangeError(f"exp_map lost positive definiteness at t = {t}")
    return out
