"""Permutations in one-line notation and their statistics.

Position 1 is the top of the deck; ``p[i]`` (1-based) is the card at depth
``i``.  Internally entries are stored in a read-only int64 array.
"""
from dataclasses import dataclass

import numpy as np

from . import kernels
from .rng import as_rng


class Permutation:
    __slots__ = ("_entries",)

    def __init__(self, entries, check=True):
        arr = np.array(entries, dtype=np.int64).reshape(-1)
        if check:
            n = arr.size
            if n < 1:
                raise ValueError("a permutation needs n >= 1 entries")
            seen = np.zeros(n + 1, dtype=bool)
            if arr.min() < 1 or arr.max() > n:
                raise ValueError(f"entries must lie in 1..{n}")
            seen[arr] = True
            if not seen[1:].all():
                raise ValueError("entries are not a bijection of 1..n")
        arr.setflags(write=False)
        self._entries = arr

    @property
    def entries(self):
        return self._entries

    @property
    def n(self):
        return int(self._entries.size)

    def __len__(self):
        return self.n

    def __iter__(self):
        return iter(self._entries.tolist())

    def __getitem__(self, position):
        """1-based access: ``p[1]`` is the top card."""
        if not 1 <= position <= self.n:
            raise IndexError(position)
        return int(self._entries[position - 1])

    def __eq__(self, other):
        if isinstance(other, Permutation):
            return np.array_equal(self._entries, other._entries)
        return NotImplemented

    def __hash__(self):
        return hash(self._entries.tobytes())

    def __repr__(self):
        return "Permutation({" + ",".join(map(str, self._entries.tolist())) + "})"

    def tolist(self):
        return self._entries.tolist()


@dataclass(frozen=True)
class PrefixSummary:
    j: int
    prefix_max: int
    prefix_fixed: int
    prefix_descents: int
    prefix_inversions: int


def _arr(p):
    if isinstance(p, Permutation):
        return p.entries
    return np.ascontiguousarray(p, dtype=np.int64)


def identity(n):
    if n < 1:
        raise ValueError(f"invalid deck size {n}")
    return Permutation(np.arange(1, n + 1), check=False)


def sample_uniform(n, rng=None):
    """Uniform random permutation of 1..n (Fisher-Yates via numpy)."""
    if n < 1:
        raise ValueError(f"invalid deck size {n}")
    rng = as_rng(rng)
    return Permutation(rng.permutation(n) + 1, check=False)


def invert(p):
    a = _arr(p)
    inv = np.empty_like(a)
    inv[a - 1] = np.arange(1, a.size + 1)
    return Permutation(inv, check=False)


def compose(p, q):
    """(p o q)(i) = p(q(i))."""
    a, b = _arr(p), _arr(q)
    return Permutation(a[b - 1], check=False)


def count_fixed_points(p):
    return kernels.count_fixed(_arr(p))


def count_descents(p):
    return kernels.count_descents(_arr(p))


def count_inversions(p):
    """Number of pairs i < j with p(i) > p(j), by merge counting."""
    return int(kernels.count_inversions(np.array(_arr(p), dtype=np.int64)))


def count_inversions_bruteforce(p):
    a = _arr(p).tolist()
    n = len(a)
    return sum(1 for i in range(n) for k in range(i + 1, n) if a[i] > a[k])


def prefix_summary(p, j):
    a = _arr(p)
    n = a.size
    if not 1 <= j <= n:
        raise ValueError(f"prefix length {j} outside 1..{n}")
    head = a[:j]
    # inversions (i, k) with i <= j: all pairs minus those inside the suffix
    inv = count_inversions(a)
    if j < n:
        inv -= int(kernels.count_inversions(np.array(a[j:], dtype=np.int64)))
    return PrefixSummary(
        j=j,
        prefix_max=int(head.max()),
        prefix_fixed=kernels.count_fixed(head),
        prefix_descents=kernels.count_descents(head),
        prefix_inversions=inv,
    )
