import math

import numpy as np
import pytest
from scipy import integrate

from rttstats.limits import (
    LimitLaw,
    descents_limit_params,
    general_clt_variance,
    inversions_limit_params,
    poisson_geometric_pmf,
    reference_cdf_normal,
    reference_pmf_poisson,
)
from rttstats.occupancy import occupied_clt_params


def _brute_pg(c, ell):
    # direct convolution of Poisson(a) and Geometric(a) on {0, 1, ...}
    a = 1 - math.exp(-c)
    return sum(math.exp(-a) * a**i / math.factorial(i) * a * (1 - a) ** (ell - i) for i in range(ell + 1))


def test_pg_at_zero():
    for c in (0.3, 1.0, 4.0):
        a = 1 - math.exp(-c)
        assert poisson_geometric_pmf(c, 0) == pytest.approx(a * math.exp(-a), rel=1e-14)
    assert poisson_geometric_pmf(1.0, 0) == pytest.approx(0.335949071234, abs=1e-12)


@pytest.mark.parametrize("c", [0.1, 0.5, 1.0, 2.0, 7.0])
def test_pg_matches_convolution(c):
    for ell in range(15):
        assert poisson_geometric_pmf(c, ell) == pytest.approx(_brute_pg(c, ell), rel=1e-12, abs=1e-300)


def test_pg_tends_to_poisson():
    for ell in range(6):
        assert poisson_geometric_pmf(40.0, ell) == pytest.approx(reference_pmf_poisson(1.0, ell), rel=1e-12)


def _pg_tail(c, upto):
    # P(X + Y > upto) = sum_x P(X = x) P(Y > upto - x) + P(X > upto)
    a = 1 - math.exp(-c)
    pois = [math.exp(-a + x * math.log(a) - math.lgamma(x + 1)) for x in range(upto + 1)]
    return sum(p * (1 - a) ** (upto + 1 - x) for x, p in enumerate(pois)) + (1 - sum(pois))


@pytest.mark.parametrize("c", np.linspace(0.1, 10, 12))
def test_pg_mass_up_to_200(c):
    p = np.array([poisson_geometric_pmf(c, ell) for ell in range(201)])
    assert p.sum() + _pg_tail(c, 200) == pytest.approx(1.0, abs=1e-12)
    if c >= 0.12:  # below this the geometric tail past 200 exceeds 1e-10
        assert p.sum() == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("c", np.linspace(0.1, 10, 12))
def test_pg_moments(c):
    ell = np.arange(801)
    p = np.array([poisson_geometric_pmf(c, k) for k in ell])
    mean = (ell * p).sum()
    var = (ell * ell * p).sum() - mean**2
    assert mean == pytest.approx(1 - math.exp(-c) + 1 / math.expm1(c), abs=1e-8)
    assert var == pytest.approx(1 - math.exp(-c) + math.exp(c) / math.expm1(c) ** 2, abs=1e-8)
    law = LimitLaw.poisson_geometric(c)
    assert law.mean() == pytest.approx(mean, abs=1e-8)
    assert law.variance() == pytest.approx(var, abs=1e-8)


def test_descents_params():
    assert descents_limit_params(50.0) == pytest.approx((0.5, 1 / 12), abs=1e-15)
    m, v = descents_limit_params(1e-8)
    assert abs(m) < 1e-7 and abs(v) < 1e-7
    m, v = descents_limit_params(1.0)
    assert m == pytest.approx((1 - math.exp(-1)) / 2, abs=1e-15)
    assert m == pytest.approx(0.316060, abs=1e-6)
    assert v == pytest.approx((1 + 2 * math.exp(-1) - 6 * math.exp(-2)) / 12, abs=1e-15)
    assert v == pytest.approx(0.0769789, abs=1e-7)


def test_inversions_params():
    assert inversions_limit_params(50.0) == pytest.approx((0.25, 1 / 36), abs=1e-15)
    m, v = inversions_limit_params(1e-8)
    assert abs(m) < 1e-7 and abs(v) < 1e-7
    m, v = inversions_limit_params(1.0)
    assert m == pytest.approx(0.216166, abs=1e-6)
    assert v == pytest.approx(0.0296838, abs=1e-7)


def test_general_clt_variance():
    a = 0.3
    assert general_clt_variance(a, 0.0) == pytest.approx((a / 12, (1 - (1 - a) ** 3) / 36), abs=1e-16)
    a, tau2 = occupied_clt_params(1.0)
    assert general_clt_variance(a, tau2) == pytest.approx(
        (descents_limit_params(1.0)[1], inversions_limit_params(1.0)[1]), abs=1e-15)
    with pytest.raises(ValueError):
        general_clt_variance(1.0, 0.1)
    with pytest.raises(ValueError):
        general_clt_variance(0.5, -1)


@pytest.mark.parametrize("c", np.linspace(0.05, 10, 20))
def test_specialization_identity(c):
    dvar, ivar = general_clt_variance(*occupied_clt_params(c))
    assert abs(dvar - descents_limit_params(c)[1]) <= 1e-12
    assert abs(ivar - inversions_limit_params(c)[1]) <= 1e-12


def test_reference_laws():
    assert reference_pmf_poisson(1.0, 0) == pytest.approx(math.exp(-1), rel=1e-15)
    assert reference_cdf_normal(2.0, 2.0, 3.0) == pytest.approx(0.5, abs=1e-15)
    # numeric integration oracle for the one-sigma value
    dens = lambda x: math.exp(-x * x / 2) / math.sqrt(2 * math.pi)
    want = 0.5 + integrate.quad(dens, 0, 1)[0]
    assert reference_cdf_normal(1.0 + 2.0, 1.0, 4.0) == pytest.approx(want, abs=1e-12)
    assert want == pytest.approx(0.841344, abs=1e-6)


def test_limit_law_object():
    law = LimitLaw.normal(0.0, 1.0)
    assert not law.discrete
    assert law.cdf(0.0) == 0.5
    np.testing.assert_allclose(law.cdf_array([-1.0, 0.0, 1.0]),
                               [reference_cdf_normal(x) for x in (-1.0, 0.0, 1.0)], atol=1e-15)
    pg = LimitLaw.poisson_geometric(1.0)
    table = pg.pmf_table()
    assert 1 - table.sum() < 1e-12
    assert pg.pmf_table(100).size == 101
    assert pg.cdf(2.5) == pytest.approx(table[:3].sum())
    assert pg.cdf(-1) == 0.0
    assert pg.describe() == {"kind": "poisson-geometric", "params": [1.0]}
    with pytest.raises(ValueError):
        law.pmf(0)
    with pytest.raises(ValueError):
        LimitLaw("uniform", (0,))
    with pytest.raises(ValueError):
        LimitLaw.poisson_geometric(0.0)
