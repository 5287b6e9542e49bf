"""Hot inner loops.

Every kernel exists twice: a plain loop written for numba's nopython mode and
a vectorized numpy twin.  Both take and return the same array types; integer
kernels agree exactly, the float PMF kernel to rounding.  ``_accel.select``
picks one at import time.  Card values are
1-based throughout (deck arrays hold values in ``1..n``).
"""
import numpy as np

from ._accel import select


# -- random-to-top deck from a pick sequence ---------------------------------

def _rtt_deck_loop(picks, n):
    # Scanning picks backwards yields cards in order of last selection, newest
    # first; unpicked cards then follow in increasing order.
    seen = np.zeros(n + 1, dtype=np.bool_)
    deck = np.empty(n, dtype=np.int64)
    pos = 0
    for t in range(picks.shape[0] - 1, -1, -1):
        c = picks[t]
        if not seen[c]:
            seen[c] = True
            deck[pos] = c
            pos += 1
    distinct = pos
    for c in range(1, n + 1):
        if not seen[c]:
            deck[pos] = c
            pos += 1
    return deck, distinct


def _rtt_deck_numpy(picks, n):
    picks = np.asarray(picks, dtype=np.int64)
    rev = picks[::-1]
    cards, first = np.unique(rev, return_index=True)
    top = cards[np.argsort(first, kind="stable")]
    seen = np.zeros(n + 1, dtype=np.bool_)
    seen[top] = True
    rest = np.flatnonzero(~seen[1:]) + 1
    deck = np.concatenate((top, rest)).astype(np.int64)
    return deck, int(top.size)


# -- inversion counting -------------------------------------------------------

def _inversions_loop(a):
    n = a.shape[0]
    src = a.copy()
    dst = np.empty_like(src)
    total = 0
    width = 1
    while width < n:
        for lo in range(0, n, 2 * width):
            mid = min(lo + width, n)
            hi = min(lo + 2 * width, n)
            i = lo
            j = mid
            k = lo
            while i < mid and j < hi:
                if src[i] <= src[j]:
                    dst[k] = src[i]
                    i += 1
                else:
                    dst[k] = src[j]
                    j += 1
                    total += mid - i
                k += 1
            while i < mid:
                dst[k] = src[i]
                i += 1
                k += 1
            while j < hi:
                dst[k] = src[j]
                j += 1
                k += 1
        src, dst = dst, src
        width *= 2
    return total


def _inversions_numpy(a):
    # Bottom-up merge count, one vectorized pass per level.  Offsetting values
    # by block id lets a single global sort/searchsorted act blockwise.
    v = np.asarray(a, dtype=np.int64)
    n = v.size
    if n < 2:
        return 0
    v = v - v.min()
    base = int(v.max()) + 1
    idx = np.arange(n, dtype=np.int64)
    total = 0
    width = 1
    while width < n:
        block = idx // (2 * width)
        left = (idx // width) % 2 == 0
        keys = block * base + v
        lk, rk = keys[left], keys[~left]
        lblock, rblock = block[left], block[~left]
        not_greater = np.searchsorted(lk, rk, side="right")
        left_end = np.searchsorted(lblock, rblock, side="right")
        total += int((left_end - not_greater).sum())
        v = np.sort(keys) - block * base
        width *= 2
    return total


# -- distinct count / occupancy ---------------------------------------------

def _count_distinct_loop(picks, n):
    seen = np.zeros(n + 1, dtype=np.bool_)
    k = 0
    for t in range(picks.shape[0]):
        c = picks[t]
        if not seen[c]:
            seen[c] = True
            k += 1
    return k


def _count_distinct_numpy(picks, n):
    return int(np.count_nonzero(np.bincount(np.asarray(picks, dtype=np.int64), minlength=n + 1)))


def _occupancy_pmf_loop(n, r):
    # Only the band [lo, hi] of mass above 1e-300 is updated.  The PMF is
    # unimodal, so flushing the edges to zero drops < 1e-295 total mass and
    # keeps the loop clear of slow denormal arithmetic.
    p = np.zeros(n + 1)
    p[0] = 1.0
    lo = 0
    hi = 0
    for _ in range(r):
        hi = min(hi + 1, n)
        for k in range(hi, max(lo, 1) - 1, -1):
            p[k] = p[k] * (k / n) + p[k - 1] * ((n - k + 1) / n)
        p[0] = 0.0
        while lo < n and p[lo] < 1e-300:
            p[lo] = 0.0
            lo += 1
        while hi > lo and p[hi] < 1e-300:
            p[hi] = 0.0
            hi -= 1
    return p


def _occupancy_pmf_numpy(n, r):
    p = np.zeros(n + 1)
    p[0] = 1.0
    k = np.arange(n + 1, dtype=np.float64)
    stay = k / n
    move = (n - k[:-1]) / n
    for _ in range(r):
        nxt = p * stay
        nxt[1:] += p[:-1] * move
        p = nxt
    return p


rtt_deck = select(_rtt_deck_loop, _rtt_deck_numpy)
count_inversions = select(_inversions_loop, _inversions_numpy)
count_distinct = select(_count_distinct_loop, _count_distinct_numpy)
occupancy_pmf = select(_occupancy_pmf_loop, _occupancy_pmf_numpy)

# name -> (loop implementation, numpy implementation); used by the benchmark
# and the backend-agreement tests.
IMPLEMENTATIONS = {
    "rtt_deck": (_rtt_deck_loop, _rtt_deck_numpy),
    "count_inversions": (_inversions_loop, _inversions_numpy),
    "count_distinct": (_count_distinct_loop, _count_distinct_numpy),
    "occupancy_pmf": (_occupancy_pmf_loop, _occupancy_pmf_numpy),
}


def count_descents(a):
    a = np.asarray(a)
    return int(np.count_nonzero(a[:-1] > a[1:]))


def count_fixed(a):
    a = np.asarray(a)
    return int(np.count_nonzero(a == np.arange(1, a.size + 1)))
