from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from latzeta.catalog import catalog_lattice
from latzeta.designs import (
    certify_lattice,
    design_constant,
    is_t_design,
    orbit_union_certificate,
    polarization_self_test,
    series_identity_check,
    strongly_critical,
)
from latzeta.errors import ConsistencyError, PreconditionError
from latzeta.lattice import Lattice
from latzeta.shells import Shell, first_k_shells

from support import integer_grams, unimodular


def test_design_constant_degree_two():
    # sum (x'Au)^2 over a shell = a m (u'Au) / n
    assert design_constant(24, Fraction(2), 4, 2) == 12
    assert design_constant(240, Fraction(2), 8, 4) == Fraction(3 * 240 * 4, 8 * 10)


def test_root_systems_are_4_designs():
    for name in ("A2", "D4", "E6", "E7", "E8"):
        rep = certify_lattice(catalog_lattice(name), 2, 4)
        assert rep.all_4_design, name


def test_cubic_first_shell_fails_4():
    shell = first_k_shells(catalog_lattice("Zn", 4), 1)[0]
    ok2, d2 = is_t_design(shell, catalog_lattice("Zn", 4).gram, 2)
    ok4, d4 = is_t_design(shell, catalog_lattice("Zn", 4).gram, 4)
    assert ok2 and d2 == 0
    assert not ok4 and d4 != 0


def test_e8_first_shell_is_6_design():
    rep = certify_lattice(catalog_lattice("E8"), 1, 6)
    assert rep.certificates[0].strength == 6


def test_polarization_agrees_with_tensor():
    for name, k in (("A2", 0), ("D4", 1), ("Zn", 0)):
        L = catalog_lattice(name, 3) if name == "Zn" else catalog_lattice(name)
        shell = first_k_shells(L, k + 1)[k]
        a, b = polarization_self_test(shell, L.gram, 4)
        assert a == b


@settings(max_examples=15)
@given(st.sampled_from(["A2", "D4"]), st.data())
def test_verdict_is_basis_invariant(name, data):
    L = catalog_lattice(name)
    U = data.draw(unimodular(L.n))
    M = Lattice("m", L.gram.conjugate(U))
    for k in range(2):
        shell = first_k_shells(M, 2)[k]
        assert is_t_design(shell, M.gram, 4)[0]


@given(integer_grams(n_min=2, n_max=3))
def test_defect_is_zero_iff_pass(g):
    L = Lattice("g", g)
    shell = first_k_shells(L, 1)[0]
    ok, d = is_t_design(shell, g, 2)
    assert ok == (d == 0)
    assert polarization_self_test(shell, g, 2)[0] == polarization_self_test(shell, g, 2)[1]


def test_wrong_shell_is_rejected():
    L = catalog_lattice("A2")
    s = first_k_shells(L, 1)[0]
    fake = Shell(1, Fraction(4), s.cardinality, s.half)
    with pytest.raises(ConsistencyError):
        is_t_design(fake, L.gram, 4)


def test_orbit_union_needs_common_norm():
    L = catalog_lattice("Zn", 2)
    a, b = first_k_shells(L, 2)
    with pytest.raises(ConsistencyError):
        orbit_union_certificate([a, b], L.gram, 2)
    ok, _ = orbit_union_certificate([a], L.gram, 2)
    assert ok


def test_strongly_critical_and_cubic():
    assert strongly_critical(catalog_lattice("D4"), 3).strongly_critical_to_depth
    rep = certify_lattice(catalog_lattice("Zn", 3), 3, 4)
    assert rep.all_2_design and not rep.all_4_design


def test_series_identity():
    r = series_identity_check(catalog_lattice("E8"), 5.0, np.diag([1.0, -1, 0, 0, 0, 0, 0, 0]), K=3)
    assert r.within_bound
    H = np.zeros((4, 4))
    H[0, 1] = H[1, 0] = 1.0
    with pytest.raises(PreconditionError):
        series_identity_check(catalog_lattice("Zn", 4), 3.0, H, K=2)
    r = series_identity_check(catalog_lattice("Zn", 4), 3.0, np.diag([1.0, -1, 0, 0]), K=2, require_certificates=False)
    assert not r.within_bound
