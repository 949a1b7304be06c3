import mpmath
import pytest

from latzeta.catalog import catalog_lattice
from latzeta.errors import DomainError, PreconditionError
from latzeta.lattice import rescale_to_covolume_one
from latzeta.tangent import random_directions
from latzeta.theta import (
    functional_residual,
    mellin_check,
    monotone_on,
    sum_csv,
    theta,
    theta_csv,
    theta_min_sum,
    theta_second_variation_fit,
    threshold,
    threshold_scan,
)
from latzeta.zeta import zeta


def eisenstein4(y, terms=60):
    q = mpmath.exp(-2 * mpmath.pi * y)
    sig = lambda k: sum(d**3 for d in range(1, k + 1) if k % d == 0)
    return 1 + 240 * mpmath.fsum(sig(k) * q**k for k in range(1, terms))


@pytest.mark.parametrize("y", [0.3, 1.0, 2.5])
def test_integers_give_jacobi_theta(y):
    v = theta(catalog_lattice("Zn", 1), y)
    assert abs(v.value - mpmath.jtheta(3, 0, mpmath.exp(-mpmath.pi * y))) <= 1e-12
    assert v.err <= 1e-12


@pytest.mark.parametrize("y", [0.7, 1.2])
def test_e8_is_eisenstein(y):
    v = theta(catalog_lattice("E8"), y)
    assert abs(v.value - eisenstein4(y)) <= 1e-11


def test_large_y_keeps_excess():
    v = theta(catalog_lattice("E8"), 50)
    ratio = v.excess / (240 * mpmath.exp(-100 * mpmath.pi))
    assert ratio == pytest.approx(1.0, rel=1e-12)


def test_transformation_residual():
    r, e = functional_residual(catalog_lattice("D4"), 1.3)
    assert r <= e + 1e-20


def test_mellin_integral():
    L = catalog_lattice("A2")
    s = 2
    I, q, t = mellin_check(L, s)
    expected = mpmath.gamma(s) * mpmath.pi ** (-s) * zeta(L, s, tol=1e-20).value
    assert abs(I - expected) <= q + t + 1e-15
    with pytest.raises(DomainError):
        mellin_check(L, 0.5)


@pytest.mark.parametrize("y", [0.6, 1.4])
def test_sum_is_euler_operator_of_theta(y):
    L = catalog_lattice("D4")
    k = mpmath.mpf(L.n) / 2
    # diff raises the working precision, so theta must follow it
    f = lambda u: theta(L, mpmath.exp(u), tol=1e-60, prec=mpmath.mp.prec + 32).value
    with mpmath.workdps(30):
        u = mpmath.log(y)
        d1 = mpmath.diff(f, u, 1)
        d2 = mpmath.diff(f, u, 2)
    S = theta_min_sum(L, y, tol=1e-20)
    assert abs(S.value - (d2 + k * d1)) <= 1e-12


def test_threshold_positivity():
    L = rescale_to_covolume_one(catalog_lattice("E8"))
    ys = threshold(L)
    assert ys == pytest.approx(5 / (mpmath.pi * float(L.scale) * 2), rel=1e-14)
    S = theta_min_sum(L, 1.01 * ys)
    assert S.sign == 1
    scan = threshold_scan(L, [0.5 * ys, ys, 1.5 * ys, 3 * ys])
    assert scan.smallest_certified is not None and scan.smallest_certified <= ys
    assert sum_csv(scan.sums).splitlines()[0] == "y,S,err,sign"


def test_theta_fit_on_d4_and_cubic_control():
    L = catalog_lattice("D4")
    L1 = rescale_to_covolume_one(L)
    H = random_directions(L1.gram, 1, seed=0)[0]
    fit = theta_second_variation_fit(L1, 2, H)
    assert fit.gap <= 1e-3 and fit.reliable
    assert abs(fit.linear) <= fit.linear_err
    Z = catalog_lattice("Zn", 4)
    Hz = random_directions(Z.gram, 1, seed=0)[0]
    with pytest.raises(PreconditionError):
        theta_second_variation_fit(Z, 2, Hz)
    bad = theta_second_variation_fit(Z, 2, Hz, require_certificates=False)
    assert bad.gap > 0.1


def test_monotone_and_csv():
    L = catalog_lattice("E8")
    assert monotone_on(L, [0.5, 1, 2, 4])
    assert theta_csv([theta(L, 1)]).splitlines()[0] == "y,theta,err"
    with pytest.raises(DomainError):
        theta(L, 0)
