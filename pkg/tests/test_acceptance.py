"""Acceptance suite A1-A10.

Each test appends one PASS/FAIL line (printed in the terminal summary)
before asserting.  Leech and BW32 work shares the per-process shell,
count and certificate caches, so the order below matters for runtime only.
"""

import time
from math import pi

from latzeta.catalog import CATALOG_NAMES, catalog_lattice
from latzeta.designs import certify_lattice
from latzeta.extremality import random_directions, zeta_first_variation, zeta_second_variation_fit
from latzeta.lattice import dual, rescale_to_covolume_one
from latzeta.shells import first_k_shells
from latzeta.structure import is_perfect, modular_check
from latzeta.theta import theta_min_sum, theta_second_variation_fit, threshold
from latzeta.zeta import functional_equation_residual, height_compare, strip_scan, zeta

from conftest import ACCEPTANCE
from support import brute_force

BIG = 10**9
SEED = 0


def report(tag: str, ok: bool, detail: str) -> None:
    line = f"{tag} {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE.append(line)
    print(line)
    assert ok, line


def catalog(name):
    return catalog_lattice(name, 4) if name == "Zn" else catalog_lattice(name)


# -- oracles ---------------------------------------------------------------


def q_series_mul(a, b, N):
    out = [0] * N
    for i, x in enumerate(a[:N]):
        if x:
            for j, y in enumerate(b[: N - i]):
                out[i + j] += x * y
    return out


def leech_theta(N):
    """Coefficients of E4^3 - 720 Delta in q = e^(2 pi i tau), exact integers."""
    E4 = [1] + [240 * sum(d**3 for d in range(1, k + 1) if k % d == 0) for k in range(1, N)]
    E12 = q_series_mul(q_series_mul(E4, E4, N), E4, N)
    # Delta = q prod (1 - q^k)^24
    P = [1] + [0] * (N - 1)
    for k in range(1, N):
        for _ in range(24):
            P = [P[i] - (P[i - k] if i >= k else 0) for i in range(N)]
    Delta = [0] + P[: N - 1]
    return [e - 720 * d for e, d in zip(E12, Delta)]


def e8_theta(N):
    return [1] + [240 * sum(d**3 for d in range(1, k + 1) if k % d == 0) for k in range(1, N)]


# -- A1 ----------------------------------------------------------------------


def test_a1_shell_counts():
    t0 = time.time()
    expected = {
        "A2": [(2, 6)],
        "D4": [(2, 24)],
        "E8": [(2, 240), (4, 2160), (6, 6720)],
        "K12": [(4, 756)],
        "BW16": [(4, 4320)],
        "Leech": [(4, 196560), (6, 16773120), (8, 398034000)],
    }
    ok, bad = True, []
    got = {}
    for name, rows in expected.items():
        shells = first_k_shells(catalog(name), len(rows), BIG, keep_vectors=False)
        got[name] = [(int(s.norm), s.cardinality) for s in shells]
        if got[name] != rows:
            ok = False
            bad.append(name)
    # oracles: brute force in small dimension, theta identities above
    for name in ("A2", "D4"):
        g = catalog(name).gram
        if [(int(m), c) for m, c in brute_force(g, 2)] != expected[name]:
            ok = False
            bad.append(name + "/brute")
    e8 = e8_theta(4)
    if [c for _, c in got["E8"]] != e8[1:4]:
        ok = False
        bad.append("E8/theta")
    lt = leech_theta(5)
    if [c for _, c in got["Leech"]] != lt[2:5] or lt[1] != 0:
        ok = False
        bad.append("Leech/theta")
    # K12 is 3-modular and BW16 2-modular: theta(L) = theta(sqrt(l) L*)
    for name, level in (("K12", 3), ("BW16", 2)):
        if not modular_check(catalog(name), level, depth=3, budget=BIG).shells_agree:
            ok = False
            bad.append(name + "/modular")
    dt = time.time() - t0
    ok = ok and dt <= 300
    report("A1", ok, f"shell counts {got}; oracle mismatches {bad or 'none'}; {dt:.0f} s (limit 300 s)")


# -- A2 ----------------------------------------------------------------------


def test_a2_design_certificates():
    t0 = time.time()
    failures = []
    for name in ("A2", "D4", "E8", "K12", "BW16"):
        rep = certify_lattice(catalog(name), 5, 4, BIG)
        if not rep.all_4_design or any(c.defects[4] != 0 for c in rep.certificates):
            failures.append(name)
    leech = certify_lattice(catalog("Leech"), 3, 4, BIG)
    if not leech.all_4_design:
        failures.append("Leech")
    bw6 = certify_lattice(catalog("BW16"), 2, 6, BIG)
    if not bw6.all_pass(6):
        failures.append("BW16/t6")
    z = certify_lattice(catalog("Zn"), 1, 4, BIG).certificates[0]
    control = (not z.passes[4]) and z.defects[4] != 0
    dt = time.time() - t0
    ok = not failures and control and dt <= 600
    report(
        "A2",
        ok,
        f"4-design failures {failures or 'none'}; Leech shells {[c.cardinality for c in leech.certificates]}; "
        f"Z4 shell 1 t=4 defect {z.defects[4]}; {dt:.0f} s (limit 600 s)",
    )


# -- A3 ----------------------------------------------------------------------

# lattices whose covolume-one strip values cannot reach 1e-12 within BIG
LOOSE = {"Leech": 0.1, "BW32": 4.0}


def test_a3_zeta_values_and_functional_equation():
    worst_zero = 0.0
    worst_fe = 0.0
    for name in CATALOG_NAMES:
        L = catalog(name)
        v = zeta(L, 0, 1e-12, BIG)
        worst_zero = max(worst_zero, float(abs(v.value + 1)))
        tol = LOOSE.get(name, 1e-12)
        for frac in (0.25, 0.5, 0.75):
            s = L.n / 2 * frac
            r, _ = functional_equation_residual(rescale_to_covolume_one(L), s, tol, BIG)
            worst_fe = max(worst_fe, float(r))
    z1 = zeta(catalog_lattice("Zn", 1), 1, 1e-13)
    riemann = abs(float(z1.value) - pi**2 / 3)
    ok = worst_zero <= 1e-10 and riemann <= 1e-12 and worst_fe <= 1e-10
    report("A3", ok, f"max |zeta(A,0)+1| = {worst_zero:.1e}; |zeta(Z1,1) - pi^2/3| = {riemann:.1e}; max FE residual = {worst_fe:.1e}")


# -- A4 ----------------------------------------------------------------------


def test_a4_second_variation():
    t0 = time.time()
    parts, ok = [], True
    for name, s in (("D4", 3.0), ("E8", 5.0), ("Leech", 13.0)):
        L = rescale_to_covolume_one(catalog(name))
        H = random_directions(L.gram, 1, SEED)[0]
        rep = zeta_second_variation_fit(L, s, H, budget=BIG)
        good = rep.gap <= 1e-3 and rep.linear_ok
        ok = ok and good
        parts.append(f"{name} s={s:g} gap {rep.gap:.1e} linear {abs(rep.linear):.1e}<= {rep.linear_bound:.1e}")
    dt = time.time() - t0
    ok = ok and dt <= 600
    report("A4", ok, "; ".join(parts) + f"; {dt:.0f} s (limit 600 s)")


# -- A5 ----------------------------------------------------------------------


def test_a5_first_variation():
    L = catalog("E8")
    rows = [zeta_first_variation(L, 5.0, H, depth=10, budget=BIG) for H in random_directions(L.gram, 5, SEED)]
    ok = all(r.within_bound for r in rows)
    worst = max(abs(r.residual) for r in rows)
    report("A5", ok, f"E8 s=5, 5 directions: max residual {worst:.1e}, min bound {min(r.bound for r in rows):.1e}")


# -- A6 ----------------------------------------------------------------------


def test_a6_strip_negativity():
    parts, ok = [], True
    for name in ("D4", "E8", "Leech"):
        scan = strip_scan(rescale_to_covolume_one(catalog(name)), 37, 1e-8, BIG)
        ok = ok and scan.all_negative and len(scan.values) == 37
        top = max(float(v.value) for v in scan.values)
        parts.append(f"{name}: {scan.summary} (max {top:.3f})")
    report("A6", ok, "; ".join(parts))


# -- A7 ----------------------------------------------------------------------


def test_a7_theta_criterion():
    parts, ok = [], True
    for name in ("D4", "E8", "Leech"):
        L = rescale_to_covolume_one(catalog(name))
        y = 1.01 * threshold(L, BIG)
        S = theta_min_sum(L, y, 1e-12, BIG, strict=False)
        ok = ok and S.sign == 1
        parts.append(f"{name} S({y:.4f}) = {float(S.value):.3e} +- {float(S.err):.1e}")
    L = rescale_to_covolume_one(catalog("D4"))
    H = random_directions(L.gram, 1, SEED)[0]
    fit = theta_second_variation_fit(L, 2, H, budget=BIG)
    ok = ok and fit.gap <= 1e-3
    parts.append(f"D4 theta fit at y=2 gap {fit.gap:.1e}")
    report("A7", ok, "; ".join(parts))


# -- A8 ----------------------------------------------------------------------


def test_a8_height_minimum():
    parts, ok = [], True
    for name in ("E8", "D4"):
        L = dual(rescale_to_covolume_one(catalog(name)))
        rows = height_compare(L, random_directions(L.gram, 3, SEED), budget=BIG)
        for r in rows:
            target = r.tau / (L.n + 2)
            good = r.strict_min_at_zero and abs(r.curvature - target) <= 0.05 * target
            ok = ok and good
        worst = max(abs(r.curvature / (r.tau / (L.n + 2)) - 1) for r in rows)
        parts.append(f"{name}*: strict min {all(r.strict_min_at_zero for r in rows)}, curvature/(tau/(n+2)) off by {worst:.1e}")
    report("A8", ok, "; ".join(parts))


# -- A9 ----------------------------------------------------------------------


def test_a9_modular_table():
    table = []
    ok = True
    for name, level, bound in (("E8", 1, 2), ("Leech", 1, 4), ("D4", 2, 2), ("K12", 3, 4)):
        depth = 3 if name == "Leech" else 5
        rep = modular_check(catalog(name), level, depth, BIG)
        good = rep.is_even and rep.shells_agree and rep.extremal_bound == bound and rep.is_extremal
        ok = ok and good
        table.append(f"({name}, l={level}) bound {rep.extremal_bound} min {rep.min_norm} {'extremal' if rep.is_extremal else 'not extremal'}")
    report("A9", ok, "; ".join(table))


# -- A10 ---------------------------------------------------------------------


def test_a10_perfection():
    e8, a2, z4 = (is_perfect(catalog(n), BIG) for n in ("E8", "A2", "Zn"))
    ok = (e8.perfect, e8.rank) == (True, 36) and (a2.perfect, a2.rank) == (True, 3) and (z4.perfect, z4.rank) == (False, 4)
    report("A10", ok, f"E8 rank {e8.rank}/36, A2 rank {a2.rank}/3, Z4 rank {z4.rank}/10")
