"""First and second variation of zeta on the determinant-one cone.

Along t -> e_A(tH) with Tr(A^-1 H) = 0, on lattices whose shells are
4-designs,

    zeta(e_A(tH), s) = zeta(A, s) (1 + t^2 s (s - n/2) tau / (n (n + 2))) + O(t^3),

tau = Tr((A^-1 H)^2).  The fits below measure the t and t^2 coefficients
from the lattice sums themselves (continued form, same shells at every t)
and compare.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Sequence

import mpmath
import numpy as np
from mpmath import mpf

from .designs import certify_lattice
from .errors import DomainError, PreconditionError
from .lattice import Lattice, rescale_to_covolume_one
from .paths import Kernel, PathSums, coefficient_tails, combine, fit_steps, increment, is_unimodular, path_sums, richardson
from .series import to_mpf
from .shells import DEFAULT_BUDGET, first_k_shells, stream_half_vectors
from .special import CountModel, integral_power
from .tangent import TangentDirection, exp_map, random_directions, tangent_project
from .theta import theta_min_sum, threshold
from .zeta import DEFAULT_PREC, completed, strip_scan, zeta

__all__ = [
    "TangentDirection",
    "tangent_project",
    "exp_map",
    "random_directions",
    "zeta_first_variation",
    "gradient_identity",
    "zeta_path_sums",
    "zeta_second_variation_fit",
    "extremality_report",
]

EPS = np.finfo(float).eps


def _require_designs(L: Lattice, K: int, t: int, budget: int) -> None:
    if not certify_lattice(L, K, t, budget).all_pass(t):
        raise PreconditionError(f"{L.name}: shells 1..{K} are not all {t}-designs")


def _power_tail(L: Lattice, norms, counts, R, s):
    lam = L.scale.value()
    scaled = tuple(lam * to_mpf(m) for m in norms)
    model = CountModel(L.n, L.covolume_squared(), scaled, tuple(counts))
    k = mpf(L.n) / 2
    return model.tail(lambda r: r ** (-s), integral_power(s, k), lam * to_mpf(R))


@dataclass(frozen=True)
class FirstVariation:
    s: float
    residual: float
    bound: float

    @property
    def within_bound(self) -> bool:
        return abs(self.residual) <= self.bound


def zeta_first_variation(
    L: Lattice, s: float, H: TangentDirection, depth: int = 10, budget: int = DEFAULT_BUDGET
) -> FirstVariation:
    """<H, sum' x x' / (A[x] Q[x]^s)> over shells 1..depth.

    Each 2-design shell contributes Tr(A^-1 H) times a constant, which is 0
    on the tangent space; the bound covers rounding and the omitted shells
    (|H[x]| <= rho A[x], rho the spectral radius of A^-1 H).
    """
    n = L.n
    if s <= n / 2:
        raise DomainError(f"the series needs s > n/2 = {n / 2}")
    if H.base != L.gram:
        raise DomainError("direction is not based at this lattice's Gram matrix")
    _require_designs(L, depth, 2, budget)
    found = first_k_shells(L, depth, budget, keep_vectors=False)
    R = found[depth - 1].norm
    d = L.gram.denominator
    lam = float(L.scale)
    Hm = np.asarray(H.H)
    per_shell = {}
    absolute = 0.0
    for X, v in stream_half_vectors(L, R, budget):
        Xf = X.astype(float)
        q = np.einsum("ij,jk,ik->i", Xf, Hm, Xf) / (v / d)
        for m in np.unique(v):
            sel = q[v == m]
            per_shell[int(m)] = per_shell.get(int(m), 0.0) + 2 * float(np.sum(sel))
            absolute += 2 * float(np.sum(np.abs(sel))) * (lam * m / d) ** (-s)
    total = mpmath.fsum(mpf(val) * (lam * mpf(m) / d) ** (-s) for m, val in sorted(per_shell.items()))
    rho = float(np.max(np.abs(H.spectrum()[0]))) if n else 0.0
    tail = rho * _power_tail(L, found.norms, found.counts, R, s)
    bound = float(tail) + 8 * n * EPS * absolute
    return FirstVariation(float(s), float(total), bound)


@dataclass(frozen=True)
class GradientIdentity:
    s: float
    residual: float
    bound: float

    @property
    def within_bound(self) -> bool:
        return self.residual <= self.bound


def gradient_identity(L: Lattice, s: float, depth: int = 5, budget: int = DEFAULT_BUDGET) -> GradientIdentity:
    """max |sum' x x'/Q[x]^(s+1) - (zeta_K(Q, s)/n) Q^-1| over shells 1..depth.

    Both series stop at the same shell.  On 2-design shells the identity
    holds shell by shell, so what is left is rounding, which is the bound.
    """
    n = L.n
    if s <= n / 2:
        raise DomainError(f"the series needs s > n/2 = {n / 2}")
    _require_designs(L, depth, 2, budget)
    found = first_k_shells(L, depth, budget, keep_vectors=False)
    R = found[depth - 1].norm
    d = L.gram.denominator
    lam = float(L.scale)
    G = np.zeros((n, n))
    absolute = np.zeros((n, n))
    zk = 0.0
    for X, v in stream_half_vectors(L, R, budget):
        Xf = X.astype(float)
        q = lam * v / d
        w = 2 * q ** (-(s + 1))
        G += (Xf * w[:, None]).T @ Xf
        absolute += (np.abs(Xf) * w[:, None]).T @ np.abs(Xf)
        zk += float(np.sum(2 * q ** (-s)))
    Qinv = np.linalg.inv(lam * L.gram.to_numpy())
    residual = float(np.max(np.abs(G - zk / n * Qinv)))
    scale = float(absolute.max()) + zk * float(np.max(np.abs(Qinv))) / n
    return GradientIdentity(float(s), residual, 16 * n * EPS * scale * np.sqrt(sum(found.counts)))


# -- second variation ----------------------------------------------------------


def zeta_path_sums(
    L: Lattice,
    H: TangentDirection,
    s_values: Sequence[float],
    step: float = 1e-3,
    tol=1e-12,
    budget: int = DEFAULT_BUDGET,
) -> tuple[PathSums, PathSums]:
    """One streaming pass deep enough for every s in ``s_values``.

    The radii are the ones the continued form picks for zeta(A, s) itself
    (within the budget), maximised over s; all t share them.
    """
    R = Rd = None
    for s in s_values:
        c = completed(L, s, tol, budget, strict=False)
        R = c.sides[0].bound if R is None else max(R, c.sides[0].bound)
        Rd = c.sides[1].bound if Rd is None else max(Rd, c.sides[1].bound)
    if is_unimodular(L):
        R = Rd = max(R, Rd)
    return path_sums(L, H, fit_steps(step), R, Rd, budget=budget)


@dataclass(frozen=True)
class VariationReport:
    s: float
    tau: float
    zeta: float
    linear: float
    quadratic: float
    predicted: float
    gap: float
    linear_bound: float
    quadratic_err: float
    reliable: bool
    values: tuple = field(repr=False, default=())

    @property
    def verdict(self) -> str:
        return "local-min-direction" if self.predicted > 0 else "not-min-direction"

    @property
    def linear_ok(self) -> bool:
        return abs(self.linear) <= self.linear_bound


def zeta_second_variation_fit(
    L: Lattice,
    s: float,
    H: TangentDirection,
    step: float = 1e-3,
    tol=1e-12,
    budget: int = DEFAULT_BUDGET,
    prec: int = DEFAULT_PREC,
    sums: tuple[PathSums, PathSums] | None = None,
    require_certificates: bool = True,
) -> VariationReport:
    """Richardson central-difference fit of t -> zeta(e_A(tH), s).

    ``sums`` may be shared between several s (see ``zeta_path_sums``).
    """
    n = L.n
    if s <= 0 or s == n / 2:
        raise DomainError("need s > 0 and s != n/2")
    if sums is None:
        sums = zeta_path_sums(L, H, [s], step, tol, budget)
    primal, dside = sums
    if require_certificates:
        _require_designs(L, len(primal.counts), 4, budget)
        if not is_unimodular(L):
            _require_designs(dside.lattice, len(dside.counts), 4, budget)
    with mpmath.workprec(prec):
        sm = mpf(s)
        k = mpf(n) / 2
        D = 1 / mpmath.sqrt(L.covolume_squared())
        factor = mpmath.pi**sm * mpmath.rgamma(sm)
        fp = Kernel("G", a=sm, c=mpmath.pi)
        fd = Kernel("G", a=k - sm, c=mpmath.pi)
        vals, errs = combine([(factor, increment(primal, fp)), (factor * D, increment(dside, fd))])
        tp, td = coefficient_tails(primal, fp), coefficient_tails(dside, fd)
        trunc = (abs(factor) * (tp[0] + D * td[0]), abs(factor) * (tp[1] + D * td[1]))
        fit = richardson(step, vals, errs, trunc)
        z = zeta(L, s, tol, budget, prec, strict=False)
        tau = H.invariant_norm
        predicted = float(z.value * sm * (sm - k) / (n * (n + 2)) * tau)
        gap = abs(fit.quadratic - predicted) / abs(predicted) if predicted else abs(fit.quadratic)
        return VariationReport(
            float(s),
            tau,
            float(z.value),
            fit.linear,
            fit.quadratic,
            predicted,
            gap,
            fit.linear_err,
            fit.quadratic_err,
            fit.reliable,
            tuple((float(t), float(v)) for t, v in zip(primal.ts, vals)),
        )


def path_csv(report: VariationReport, digits: int = 17) -> str:
    """(t, zeta(e_A(tH), s) - zeta(A, s)) rows of a fit."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "delta_zeta"])
    for t, v in sorted(report.values):
        w.writerow([f"{t:.{digits}e}", f"{v:.{digits}e}"])
    return buf.getvalue()


# -- aggregated report -------------------------------------------------------


@dataclass(frozen=True)
class Verdict:
    s: float
    answer: str
    reason: str
    fit: VariationReport | None


@dataclass(frozen=True)
class ExtremalityReport:
    lattice: str
    depth: int
    all_2_design: bool
    all_4_design: bool
    strip_negative: bool | None
    strip_summary: str
    theta_y: float
    theta_sum: float
    theta_err: float
    theta_sign: int
    verdicts: tuple

    def lines(self) -> list[str]:
        out = [
            f"lattice: {self.lattice}",
            f"design_depth: {self.depth}",
            f"all_2_design: {str(self.all_2_design).lower()}",
            f"all_4_design: {str(self.all_4_design).lower()}",
            f"strip: {self.strip_summary}",
            f"theta_y: {self.theta_y:.6e}",
            f"theta_S: {self.theta_sum:.12e} +- {self.theta_err:.3e} sign {self.theta_sign}",
        ]
        for v in self.verdicts:
            out.append(f"s: {v.s:g}")
            out.append(f"  verdict: {v.answer}")
            out.append(f"  reason: {v.reason}")
            if v.fit is not None:
                f = v.fit
                out.append(f"  zeta: {f.zeta:.12e}")
                out.append(f"  fitted_quadratic: {f.quadratic:.12e} +- {f.quadratic_err:.3e}")
                out.append(f"  predicted_quadratic: {f.predicted:.12e}")
                out.append(f"  relative_gap: {f.gap:.3e}")
                out.append(f"  fitted_linear: {f.linear:.3e} bound {f.linear_bound:.3e}")
        return out


def extremality_report(
    L: Lattice,
    s_list: Sequence[float],
    depth: int = 3,
    seed: int = 0,
    step: float = 1e-3,
    tol=1e-12,
    budget: int = DEFAULT_BUDGET,
    strip_points: int = 37,
    gap_tol: float = 1e-3,
) -> ExtremalityReport:
    """Evidence per s that L is a strict local minimum of zeta(., s).

    "yes": shells 1..depth are 4-designs, the fitted second variation
    matches the prediction and the prediction is positive (for s < n/2
    this needs zeta < 0, taken from a strip scan).  "no": a 4-design
    certificate fails or the prediction is certified negative.
    Otherwise "inconclusive".
    """
    L1 = rescale_to_covolume_one(L)
    n = L1.n
    rep = certify_lattice(L1, depth, 4, budget)
    all2, all4 = rep.all_2_design, rep.all_4_design
    strip = None
    summary = "not needed"
    if any(s < n / 2 for s in s_list):
        scan = strip_scan(L1, strip_points, 1e-8, budget)
        strip = scan.all_negative
        summary = scan.summary
    y = 1.01 * threshold(L1, budget)
    S = theta_min_sum(L1, y, 1e-12, budget, strict=False)
    H = random_directions(L1.gram, 1, seed)[0]
    verdicts = []
    sums = None
    if all4:
        sums = zeta_path_sums(L1, H, s_list, step, tol, budget)
    for s in s_list:
        if not all4:
            verdicts.append(Verdict(float(s), "no", f"4-design certificate fails within {depth} shells", None))
            continue
        if s == n / 2 or s <= 0:
            verdicts.append(Verdict(float(s), "inconclusive", "s outside (0, n/2) and (n/2, inf)", None))
            continue
        fit = zeta_second_variation_fit(L1, s, H, step, tol, budget, sums=sums)
        if fit.gap > gap_tol or not fit.reliable:
            verdicts.append(Verdict(float(s), "inconclusive", f"second-variation fit off by {fit.gap:.2e}", fit))
        elif fit.predicted > 0 and (s > n / 2 or strip):
            why = "s > n/2" if s > n / 2 else "zeta < 0 on the strip scan"
            verdicts.append(Verdict(float(s), "yes", f"4-designs to depth {depth}, {why}, positive second variation", fit))
        elif fit.predicted < 0:
            verdicts.append(Verdict(float(s), "no", "second variation negative", fit))
        else:
            verdicts.append(Verdict(float(s), "inconclusive", "strip sign not certified", fit))
    return ExtremalityReport(
        L.name, depth, all2, all4, strip, summary, y, float(S.value), float(S.err), S.sign, tuple(verdicts)
    )
