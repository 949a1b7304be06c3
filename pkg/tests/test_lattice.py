from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from latzeta import exact
from latzeta.catalog import CATALOG_NAMES, barnes_wall, catalog_lattice, golay_codewords
from latzeta.errors import CatalogError, DomainError
from latzeta.lattice import (
    GramMatrix,
    Lattice,
    Scale,
    dual,
    read_lattice,
    rescale_to_covolume_one,
    rescaled,
    write_lattice,
)
from latzeta.shells import first_k_shells
from latzeta.structure import extremal_bound, is_perfect, modular_check

from support import integer_grams, unimodular


def test_gram_rejects_asymmetric_and_indefinite():
    with pytest.raises(DomainError):
        GramMatrix.from_rows([[2, 1], [0, 2]])
    with pytest.raises(DomainError):
        GramMatrix.from_rows([[1, 2], [2, 1]])
    with pytest.raises(DomainError):
        GramMatrix.from_rows([[0]])


def test_rational_entries_roundtrip():
    g = GramMatrix.from_rows([["1/2", 0], [0, "3/4"]])
    assert g.det == Fraction(3, 8)
    assert exact.format_rational(g.inverse.entries[1][1]) == "4/3"
    assert exact.parse_rational("-6/4") == Fraction(-3, 2)


@pytest.mark.parametrize(
    "name,n,det",
    [("A2", 2, 3), ("D4", 4, 4), ("E6", 6, 3), ("E7", 7, 2), ("E8", 8, 1), ("K12", 12, 729), ("BW16", 16, 256), ("Leech", 24, 1)],
)
def test_catalog_dimensions_and_determinants(name, n, det):
    L = catalog_lattice(name)
    assert L.n == n
    assert L.gram.det == det
    assert L.gram.is_even


def test_catalog_errors():
    with pytest.raises(CatalogError):
        catalog_lattice("nosuch")
    with pytest.raises(CatalogError):
        catalog_lattice("Zn")
    assert catalog_lattice("Zn", 3).gram.det == 1
    assert catalog_lattice("Z5").n == 5
    assert set(CATALOG_NAMES) >= {"E8", "Leech", "BW16"}


def test_golay_code_weights():
    words = golay_codewords()
    assert len(words) == 4096
    weights = np.bincount([sum(w) for w in words], minlength=25)
    assert weights[0] == 1 and weights[8] == 759 and weights[12] == 2576 and weights[16] == 759 and weights[24] == 1


def test_barnes_wall_eight_is_e8():
    L = barnes_wall(3)
    assert L.n == 8 and L.gram.det == 1 and L.gram.is_even
    assert [s.cardinality for s in first_k_shells(L, 2, keep_vectors=False)] == [240, 2160]


def test_dual_involution_and_scale():
    L = rescale_to_covolume_one(catalog_lattice("D4"))
    assert float(L.covolume_squared()) == pytest.approx(1.0, rel=1e-15)
    DD = dual(dual(L))
    assert DD.gram == L.gram
    assert float(DD.scale) == pytest.approx(float(L.scale), rel=1e-15)
    assert float(dual(L).covolume_squared()) == pytest.approx(1.0, rel=1e-14)


def test_scale_folds_exact_roots():
    s = Scale(1, Fraction(1, 16), 4)
    assert s.is_rational and s.rational == Fraction(1, 2)
    assert str(Scale(1, 3, 2)) == "1/1*(3/1)^(1/2)"
    with pytest.raises(DomainError):
        Scale(-1)


def test_file_roundtrip(tmp_path):
    L = rescale_to_covolume_one(catalog_lattice("A2"))
    p = tmp_path / "a2.json"
    write_lattice(L, p)
    M = read_lattice(p)
    assert M.gram == L.gram and M.scale == L.scale
    bad = tmp_path / "bad.json"
    bad.write_text("{ nope")
    with pytest.raises(DomainError):
        read_lattice(bad)


def test_perfection():
    assert is_perfect(catalog_lattice("E8")).rank == 36
    assert is_perfect(catalog_lattice("A2")).perfect
    r = is_perfect(catalog_lattice("Zn", 4))
    assert (r.rank, r.perfect) == (4, False)


def test_modular_bookkeeping():
    assert extremal_bound(8, 1) == 2 and extremal_bound(24, 1) == 4
    assert extremal_bound(4, 2) == 2 and extremal_bound(12, 3) == 4
    rep = modular_check(catalog_lattice("D4"), 2, depth=4)
    assert rep.shells_agree and rep.is_extremal
    # A2 is 3-modular, not 2-modular
    assert not modular_check(catalog_lattice("A2"), 2, depth=3).shells_agree


@given(integer_grams(), st.data())
def test_determinant_is_basis_invariant(g, data):
    U = data.draw(unimodular(g.n))
    h = g.conjugate(U)
    assert h.det == g.det


@given(integer_grams(), st.fractions(min_value=Fraction(1, 5), max_value=5))
def test_rescaled_determinant(g, c):
    L = Lattice("g", g)
    assert rescaled(L, c).gram.det == c**g.n * g.det
