"""Closed-form finite-n quantities for random-to-top shuffles.

Convention: 0**0 == 1 everywhere (r = 0 and k = 0 edge terms), which Python
already follows for ints, floats and Fractions.  Functions taking ``exact``
return Fractions when it is set.
"""
import math
from fractions import Fraction

import numpy as np

from .occupancy import occupied_pmf

EXACT_Q_LIMIT = 20  # Q(k, m, s) in rationals up to this k
EXACT_LAW_LIMIT = 60  # finite-n fixed point law in rationals up to this n
_TRUNC = 1e-18


def _check_nr(n, r):
    if n < 1 or r < 0:
        raise ValueError(f"need n >= 1 and r >= 0, got n={n}, r={r}")


def return_probabilities(n, r, exact=False):
    """P(card k sits at position k after r shuffles), for k = 1..n.

    Each entry is ((k-1)/n)^r + P(K >= k)/n with K the occupied count.
    """
    _check_nr(n, r)
    pmf = occupied_pmf(n, r, exact=exact)
    if exact:
        tail = [Fraction(0)] * (n + 2)
        for k in range(n, -1, -1):
            tail[k] = tail[k + 1] + pmf[k]
        return [Fraction(k - 1, n) ** r + tail[k] / n for k in range(1, n + 1)]
    tail = np.cumsum(np.asarray(pmf)[::-1])[::-1]  # tail[k] = P(K >= k)
    k = np.arange(1, n + 1)
    return ((k - 1) / n) ** r + tail[1:] / n


def return_probability(n, r, k, exact=False):
    if not 1 <= k <= n:
        raise ValueError(f"card {k} outside 1..{n}")
    return return_probabilities(n, r, exact=exact)[k - 1]


def expected_fixed_points(n, r, exact=False):
    """1 + sum_{k=0}^{n-2} (k/n)^r."""
    _check_nr(n, r)
    if exact:
        return 1 + sum((Fraction(k, n) ** r for k in range(n - 1)), Fraction(0))
    k = np.arange(n - 1, dtype=np.float64)
    return 1.0 + float(np.sum((k / n) ** r))


def expected_inversions(n, r, exact=False):
    """(C(n,2)/2) (1 - ((n-2)/n)^r); zero for n < 2."""
    _check_nr(n, r)
    if n < 2:
        return Fraction(0) if exact else 0.0
    if exact:
        return Fraction(math.comb(n, 2), 2) * (1 - Fraction(n - 2, n) ** r)
    return math.comb(n, 2) / 2 * (1.0 - ((n - 2) / n) ** r)


def expected_descents(n, r, exact=False):
    """Exact mean number of descents after r random-to-top shuffles.

    Given K = k distinct picks (0 < k < n) the top block contributes (k-1)/2
    descents on average and the boundary pair (k, k+1) is a descent with
    probability (n-k)/(n-k+1): the card at position k is uniform over the
    picked set S and the card below it is min(complement of S).  K = 0 gives
    the identity, K = n a uniform permutation.
    """
    _check_nr(n, r)
    pmf = occupied_pmf(n, r, exact=exact)
    if exact:
        total = Fraction(0)
        for k in range(1, n + 1):
            total += pmf[k] * (Fraction(k - 1, 2) + Fraction(n - k, n - k + 1))
        return total
    k = np.arange(1, n + 1, dtype=np.float64)
    per_k = (k - 1) / 2 + (n - k) / (n - k + 1)
    return float(np.dot(np.asarray(pmf)[1:], per_k))


def derangements(m):
    """D_m via D_m = (m-1)(D_{m-1} + D_{m-2}), D_0 = 1, D_1 = 0."""
    if m < 0:
        raise ValueError(m)
    prev, cur = 1, 0
    if m == 0:
        return 1
    for i in range(2, m + 1):
        prev, cur = cur, (i - 1) * (cur + prev)
    return cur


def _derangement_ratio(m):
    # D_m / m! = sum_{i<=m} (-1)^i / i!, summed until terms vanish
    total, term = 0.0, 1.0
    for i in range(m + 1):
        total += term
        term = -term / (i + 1)
        if abs(term) < 1e-20:
            break
    return total


def uniform_fixed_point_law(size, s, exact=False):
    """P(a uniform permutation of [size] has exactly s fixed points)."""
    if not 0 <= s <= size:
        return Fraction(0) if exact else 0.0
    if exact or size <= EXACT_Q_LIMIT:
        val = Fraction(math.comb(size, s) * derangements(size - s), math.factorial(size))
        return val if exact else float(val)
    return _derangement_ratio(size - s) / math.factorial(s) if s < 171 else 0.0


def q_fixed_points(k, m, s, exact=None):
    """Q(k, m, s): P(a random (k-1)-permutation of [m-1] has s fixed points).

    For m > k this is the inclusion-exclusion sum
    (1/s!) sum_{t=s}^{k-1} (-1)^(t-s) (k-1)_t / ((t-s)! (m-1)_t); for m == k it
    is the fixed point law of a uniform permutation of [k-1].
    """
    if k < 1 or m < k:
        raise ValueError(f"need m >= k >= 1, got k={k}, m={m}")
    if exact is None:
        exact = k <= EXACT_Q_LIMIT
    if not 0 <= s <= k - 1:
        return Fraction(0) if exact else 0.0
    if m == k:
        return uniform_fixed_point_law(k - 1, s, exact=exact)
    if exact:
        ratio = Fraction(1)  # (k-1)_t / (m-1)_t
        for t in range(s):
            ratio *= Fraction(k - 1 - t, m - 1 - t)
        total = Fraction(0)
        inv_fact = Fraction(1)  # 1/(t-s)!
        for u in range(k - s):
            total += (-1) ** u * ratio * inv_fact
            t = s + u
            ratio *= Fraction(k - 1 - t, m - 1 - t)
            inv_fact /= u + 1
        return total / math.factorial(s)
    # log-space head term, then iterate ratio terms in fixed order
    log_ratio = sum(math.log((k - 1 - t) / (m - 1 - t)) for t in range(s))
    head = math.exp(log_ratio - math.lgamma(s + 1))
    if head == 0.0:
        return 0.0
    total, term = 0.0, head
    for u in range(k - s):
        total += term
        t = s + u
        term = -term * (k - 1 - t) / ((m - 1 - t) * (u + 1))
        if abs(term) <= _TRUNC * abs(total) or term == 0.0:
            break
    return total


def prefix_max_pmf(n, j, m, exact=False):
    """P(max of the first j entries of a uniform permutation equals m)."""
    if not 1 <= j <= n:
        raise ValueError(f"prefix length {j} outside 1..{n}")
    if m < j or m > n:
        return Fraction(0) if exact else 0.0
    if exact or n <= 1000:
        val = Fraction(math.comb(m - 1, j - 1), math.comb(n, j))
        return val if exact else float(val)
    log_val = (math.lgamma(m) - math.lgamma(j) - math.lgamma(m - j + 1)
               - math.lgamma(n + 1) + math.lgamma(j + 1) + math.lgamma(n - j + 1))
    return math.exp(log_val)


def _law_exact(n, k):
    pmf = [Fraction(0)] * (n + 1)
    for j in range(n - k + 1):
        m = n - j
        weight = Fraction(math.comb(m - 1, k - 1), math.comb(n, k))
        if m == k:
            # the first k positions hold a permutation of [k]
            for s in range(k + 1):
                pmf[j + s] += weight * uniform_fixed_point_law(k, s, exact=True)
        else:
            for s in range(k):
                pmf[j + s] += weight * q_fixed_points(k, m, s, exact=True)
    return pmf


def _q_row(k, m, smax):
    """Vector of Q(k, m, s) for s = 0..smax (float, m > k)."""
    tmax = min(k - 1, 2 * smax + 60)
    t = np.arange(tmax + 1)
    log_ratio = np.concatenate(([0.0], np.cumsum(np.log((k - 1 - t[:-1]) / (m - 1 - t[:-1])))))
    ratio = np.exp(log_ratio)
    umax = tmax
    u = np.arange(umax + 1)
    sign_over_fact = np.exp(-np.array([math.lgamma(x + 1) for x in u])) * np.where(u % 2, -1.0, 1.0)
    row = np.zeros(smax + 1)
    for s in range(min(smax, k - 1) + 1):
        span = min(umax, tmax - s) + 1
        row[s] = np.dot(ratio[s:s + span], sign_over_fact[:span]) / math.factorial(s)
    return row


def fixed_point_law_finite(n, a, exact=False):
    """Exact PMF over l = 0..n of n - max(first k) + #fixed points in first k.

    Here k = floor(a n) and the permutation is uniform on [n].  Conditioning
    on the prefix maximum m gives sum over m of Q(k, m, l - n + m) times the
    maximum's law; the m == k term uses the full permutation of [k].
    """
    if not 0 < a <= 1:
        raise ValueError(f"index fraction must lie in (0, 1], got {a}")
    k = math.floor(a * n)
    if k < 1:
        raise ValueError(f"floor(a n) = {k} must be at least 1")
    if exact or n <= EXACT_LAW_LIMIT:
        pmf = _law_exact(n, k)
        return pmf if exact else np.array([float(x) for x in pmf])

    smax = 170
    pmf = np.zeros(n + 1)
    weight = k / n  # P(max = n)
    for j in range(n - k + 1):
        m = n - j
        if weight < 1e-300:
            break
        if m == k:
            law = np.array([uniform_fixed_point_law(k, s) for s in range(min(k, smax) + 1)])
        else:
            law = _q_row(k, m, min(smax, k - 1))
        hi = min(n + 1, j + law.size)
        pmf[j:hi] += weight * law[:hi - j]
        # C(m-2, k-1)/C(n, k) from C(m-1, k-1)/C(n, k)
        if m - 1 >= k:
            weight *= (m - k) / (m - 1)
        else:
            weight = 0.0
    return pmf
