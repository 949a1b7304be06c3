import numpy as np
import pytest

from latzeta.catalog import catalog_lattice
from latzeta.errors import DomainError, PreconditionError
from latzeta.extremality import (
    extremality_report,
    gradient_identity,
    path_csv,
    random_directions,
    tangent_project,
    zeta_first_variation,
    zeta_second_variation_fit,
)
from latzeta.lattice import GramMatrix, Lattice, rescale_to_covolume_one


def test_first_variation_vanishes_on_e8():
    L = catalog_lattice("E8")
    for H in random_directions(L.gram, 2, seed=4):
        fv = zeta_first_variation(L, 5, H, depth=4)
        assert fv.within_bound and abs(fv.residual) <= 1e-12
        # omitting fewer shells leaves a smaller tail
        assert zeta_first_variation(L, 5, H, depth=8).bound < fv.bound


def test_first_variation_off_diagonal_on_square_lattice():
    Z = catalog_lattice("Zn", 2)
    H = tangent_project(Z.gram, [[0.0, 1.0], [1.0, 0.0]])
    assert zeta_first_variation(Z, 2, H, depth=6).residual == 0


def test_first_variation_needs_2_designs():
    A = catalog_lattice("A2")
    # the first shell of x^2 + 2y^2 is {+-e1}
    L = Lattice("g", GramMatrix.from_rows([[1, 0], [0, 2]]))
    H = tangent_project(L.gram, np.diag([1.0, -1.0]))
    with pytest.raises(PreconditionError):
        zeta_first_variation(L, 2, H, depth=2)
    with pytest.raises(DomainError):
        zeta_first_variation(A, 0.5, random_directions(A.gram, 1, 0)[0])


def test_gradient_identity():
    g = gradient_identity(catalog_lattice("D4"), 3.0, depth=4)
    assert g.within_bound and g.bound < 1e-10


@pytest.mark.parametrize("name,s", [("D4", 3.0), ("A2", 2.0), ("E8", 2.0)])
def test_second_variation_matches(name, s):
    L = rescale_to_covolume_one(catalog_lattice(name))
    H = random_directions(L.gram, 1, seed=1)[0]
    rep = zeta_second_variation_fit(L, s, H)
    assert rep.gap <= 1e-6 and rep.reliable
    assert rep.linear_ok
    assert path_csv(rep).splitlines()[0] == "t,delta_zeta"


def test_second_variation_cubic_control():
    Z = catalog_lattice("Zn", 4)
    H = random_directions(Z.gram, 1, seed=1)[0]
    with pytest.raises(PreconditionError):
        zeta_second_variation_fit(Z, 3.0, H)
    rep = zeta_second_variation_fit(Z, 3.0, H, require_certificates=False)
    assert rep.gap > 0.1


def test_report_for_d4():
    rep = extremality_report(catalog_lattice("D4"), [1.0, 3.0], depth=3, seed=2)
    assert rep.all_4_design and rep.strip_negative and rep.theta_sign == 1
    assert [v.answer for v in rep.verdicts] == ["yes", "yes"]
    assert rep.lines()[0] == "lattice: D4"


def test_report_for_cubic():
    rep = extremality_report(catalog_lattice("Zn", 3), [2.0], depth=2)
    assert not rep.all_4_design
    assert rep.verdicts[0].answer == "no"
