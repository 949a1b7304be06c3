from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from latzeta.catalog import catalog_lattice
from latzeta.errors import ResourceError
from latzeta.lattice import Lattice
from latzeta.shells import enumerate_shells, first_k_shells, format_shell_dump, kissing, min_norm, shell_counts

from support import brute_force, integer_grams, unimodular


@given(integer_grams(n_max=3), st.integers(1, 12))
def test_counts_match_brute_force(g, R):
    L = Lattice("g", g)
    got = shell_counts(L, R)
    assert list(zip(got.norms, got.counts)) == brute_force(g, R)


@given(integer_grams(n_max=3), st.data())
def test_counts_are_basis_invariant(g, data):
    U = data.draw(unimodular(g.n))
    a = shell_counts(Lattice("a", g), 10)
    b = shell_counts(Lattice("b", g.conjugate(U)), 10)
    assert (a.norms, a.counts) == (b.norms, b.counts)


def test_rational_gram_against_brute_force():
    g = catalog_lattice("A2").gram.inverse
    R = Fraction(8, 3)
    got = shell_counts(Lattice("a2*", g), R)
    assert list(zip(got.norms, got.counts)) == brute_force(g, R)


def sigma3(k):
    return sum(d**3 for d in range(1, k + 1) if k % d == 0)


def test_e8_matches_eisenstein_coefficients():
    shells = first_k_shells(catalog_lattice("E8"), 5, keep_vectors=False)
    assert shells.norms == [2, 4, 6, 8, 10]
    assert shells.counts == [240 * sigma3(k) for k in range(1, 6)]


def test_first_shells_small():
    assert first_k_shells(catalog_lattice("Zn", 1), 2, keep_vectors=False).counts == [2, 2]
    assert kissing(catalog_lattice("A2")) == 6
    assert kissing(catalog_lattice("D4")) == 24
    assert min_norm(catalog_lattice("K12")) == 4


def test_vectors_have_their_norm_and_come_in_pairs():
    L = catalog_lattice("D4")
    shells = enumerate_shells(L, 4)
    for sh in shells:
        V = sh.vectors
        assert len(V) == sh.cardinality
        assert all(L.gram.value(list(v)) == sh.norm for v in V)
        assert {tuple(v) for v in V} == {tuple(-v) for v in V}


def test_dump_format():
    text = format_shell_dump(first_k_shells(catalog_lattice("Zn", 1), 2, keep_vectors=True), include_vectors=True)
    assert text.splitlines() == ["# shells of Z1 up to norm 4/1", "shell 1 1/1 2", "  -1", "  1", "shell 2 4/1 2", "  -2", "  2"]


def test_budget_is_enforced():
    with pytest.raises(ResourceError):
        shell_counts(catalog_lattice("E8"), 40, budget=1000)
