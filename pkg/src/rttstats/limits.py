"""Limiting distributions and their parameters.

All normal-limit parameters are returned as coefficients: descents are
centred by mean_coeff * n and scaled by sqrt(n); inversions are centred by
mean_coeff * n**2 and scaled by n**1.5.
"""
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

TAIL_EPS = 1e-12


def _a_of_c(c):
    if not c > 0:
        raise ValueError(f"shuffle ratio must be positive, got {c}")
    return -math.expm1(-c)


def poisson_geometric_pmf(c, ell):
    """P(X + Y = ell), X ~ Poisson(a), Y ~ Geometric(a) on {0, 1, ...}, a = 1 - e^-c.

    Evaluates sum_j a (1-a)^j e^-a a^(ell-j) / (ell-j)!.
    """
    a = _a_of_c(c)
    if ell < 0:
        return 0.0
    b = math.exp(-c)  # 1 - a without cancellation
    total = 0.0
    for j in range(ell + 1):
        i = ell - j
        log_poisson = i * math.log(a) - math.lgamma(i + 1) if i else 0.0
        total += b ** j * math.exp(log_poisson)
    return a * math.exp(-a) * total


def reference_pmf_poisson(rate, ell):
    if not rate > 0:
        raise ValueError(f"rate must be positive, got {rate}")
    if ell < 0:
        return 0.0
    return math.exp(ell * math.log(rate) - rate - math.lgamma(ell + 1))


def reference_cdf_normal(x, mean=0.0, variance=1.0):
    if not variance > 0:
        raise ValueError(f"variance must be positive, got {variance}")
    z = (x - mean) / math.sqrt(2.0 * variance)
    return 0.5 * math.erfc(-z)


def descents_limit_params(c):
    e = math.exp(-c)
    _a_of_c(c)
    return -math.expm1(-c) / 2, (1 + 2 * e - 3 * (1 + c) * e * e) / 12


def inversions_limit_params(c):
    e = math.exp(-c)
    _a_of_c(c)
    return -math.expm1(-2 * c) / 4, (1 + 8 * e**3 - 9 * (1 + c) * e**4) / 36


def general_clt_variance(a, tau2):
    """Limit variances of randomly indexed descent and inversion sums.

    An index with K/n -> a and fluctuation variance tau2 * n gives
    (a/12 + tau2/4) for descents and (1-(1-a)^3)/36 + (1-a)^2 tau2 / 4 for
    inversions.
    """
    if not 0 < a < 1:
        raise ValueError(f"index fraction must lie in (0, 1), got {a}")
    if tau2 < 0:
        raise ValueError(f"tau2 must be non-negative, got {tau2}")
    b = 1 - a
    return a / 12 + tau2 / 4, (1 - b**3) / 36 + b * b * tau2 / 4


@dataclass(frozen=True)
class LimitLaw:
    kind: str  # "poisson-geometric" | "poisson" | "normal"
    params: tuple

    def __post_init__(self):
        if self.kind == "poisson-geometric":
            _a_of_c(self.params[0])
        elif self.kind == "poisson":
            if not self.params[0] > 0:
                raise ValueError("poisson rate must be positive")
        elif self.kind == "normal":
            if not self.params[1] > 0:
                raise ValueError("normal variance must be positive")
        else:
            raise ValueError(f"unknown limit law {self.kind!r}")

    @classmethod
    def poisson_geometric(cls, c):
        return cls("poisson-geometric", (float(c),))

    @classmethod
    def poisson(cls, rate=1.0):
        return cls("poisson", (float(rate),))

    @classmethod
    def normal(cls, mean=0.0, variance=1.0):
        return cls("normal", (float(mean), float(variance)))

    @property
    def discrete(self):
        return self.kind != "normal"

    def pmf(self, ell):
        if self.kind == "poisson-geometric":
            return poisson_geometric_pmf(self.params[0], ell)
        if self.kind == "poisson":
            return reference_pmf_poisson(self.params[0], ell)
        raise ValueError("normal law has no pmf")

    def pmf_table(self, upto=None):
        """PMF on 0..L, L = max(upto, point where the tail mass < 1e-12)."""
        if not self.discrete:
            raise ValueError("normal law has no pmf")
        probs, total, ell = [], 0.0, 0
        while True:
            p = self.pmf(ell)
            probs.append(p)
            total += p
            done = 1.0 - total < TAIL_EPS or ell >= 10_000
            if (upto is None or ell >= upto) and done:
                break
            ell += 1
        return np.array(probs)

    def cdf(self, x):
        if self.kind == "normal":
            return reference_cdf_normal(x, *self.params)
        if x < 0:
            return 0.0
        return float(min(1.0, self.pmf_table(int(math.floor(x)))[: int(math.floor(x)) + 1].sum()))

    def cdf_array(self, xs):
        xs = np.asarray(xs, dtype=np.float64)
        if self.kind == "normal":
            mean, var = self.params
            return ndtr((xs - mean) / math.sqrt(var))
        return np.array([self.cdf(x) for x in xs])

    def mean(self):
        if self.kind == "poisson-geometric":
            a = _a_of_c(self.params[0])
            return a + (1 - a) / a
        return self.params[0]

    def variance(self):
        if self.kind == "poisson-geometric":
            a = _a_of_c(self.params[0])
            return a + (1 - a) / a**2
        if self.kind == "poisson":
            return self.params[0]
        return self.params[1]

    def describe(self):
        return {"kind": self.kind, "params": list(self.params)}
