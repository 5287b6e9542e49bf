"""Occupied-box count after throwing r balls into n boxes.

The same count is the number of distinct cards picked by r random-to-top
shuffles.  Moments use the exact finite-n formulas; the PMF comes from the
forward recurrence P_{r+1}(k) = P_r(k) k/n + P_r(k-1) (n-k+1)/n, in exact
rationals when n*r <= 10**4 and in floating point beyond.
"""
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels
from .rng import as_rng
from .shuffle import draw_picks

EXACT_WORK_LIMIT = 10**4


@dataclass(frozen=True)
class OccupancyLaw:
    n: int
    r: int
    mean: float
    variance: float
    pmf: np.ndarray


def _check(n, r):
    if n < 1 or r < 0:
        raise ValueError(f"need n >= 1 and r >= 0, got n={n}, r={r}")


def sample_occupied(n, r, rng=None):
    _check(n, r)
    picks = draw_picks(n, r, as_rng(rng))
    return int(kernels.count_distinct(picks, n))


def _moments_fraction(n, r):
    q1 = Fraction(n - 1, n) ** r
    q2 = Fraction(n - 2, n) ** r
    mean = n - n * q1
    var = n * q1 + n * (n - 1) * q2 - n * n * q1 * q1
    return mean, var


def occupied_moments(n, r, exact=False):
    """Exact mean and variance of the occupied count.

    ``exact=True`` returns Fractions.  The float path rewrites the variance as
    n q1 - n q2 + n^2 q1^2 expm1(r log(q2/q1^2)) to avoid cancellation.
    """
    _check(n, r)
    if exact:
        return _moments_fraction(n, r)
    if n <= 2 or n * r <= EXACT_WORK_LIMIT:
        mean, var = _moments_fraction(n, r)
        return float(mean), float(var)
    l1 = math.log1p(-1.0 / n)
    l2 = math.log1p(-2.0 / n)
    q1 = math.exp(r * l1)
    q2 = math.exp(r * l2)
    mean = -n * math.expm1(r * l1)
    var = n * q1 - n * q2 + n * n * q1 * q1 * math.expm1(r * (l2 - 2 * l1))
    return mean, var


def _pmf_fraction(n, r):
    p = [Fraction(0)] * (n + 1)
    p[0] = Fraction(1)
    for step in range(r):
        top = min(step + 1, n)
        for k in range(top, 0, -1):
            p[k] = p[k] * Fraction(k, n) + p[k - 1] * Fraction(n - k + 1, n)
        p[0] = Fraction(0)
    return p


def occupied_pmf(n, r, exact=False):
    """PMF of the occupied count over k = 0..n.

    Returns a list of Fractions when ``exact`` is set, else a float array.
    """
    _check(n, r)
    if exact:
        return _pmf_fraction(n, r)
    if n * r <= EXACT_WORK_LIMIT:
        return np.array([float(x) for x in _pmf_fraction(n, r)])
    return kernels.occupancy_pmf(n, r)


def occupancy_law(n, r):
    mean, var = occupied_moments(n, r)
    return OccupancyLaw(n=n, r=r, mean=mean, variance=var, pmf=occupied_pmf(n, r))


def occupied_clt_params(c):
    """(mean, variance) coefficients of n for the occupied count at r = c n."""
    if not c > 0:
        raise ValueError(f"shuffle ratio must be positive, got {c}")
    e = math.exp(-c)
    return -math.expm1(-c), e - (1 + c) * e * e
