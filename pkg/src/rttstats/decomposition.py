"""Samplers that bypass shuffling through the occupancy decompositions.

Each sampler draws the occupied count K first, then reads the statistic off a
uniform permutation (or independent uniforms) indexed by K:

* resampled deck: a uniform permutation with its last n - K entries sorted
  ascending has the law of the shuffled deck;
* fixed points: n - max(first K) + #fixed points among the first K;
* descents: K - 1 adjacent comparisons of iid uniforms plus one boundary
  indicator (the indicator channel only matches after sqrt(n) scaling);
* inversions: R_1 + ... + R_K with independent R_i uniform on {0..n-i}.
"""
import numpy as np

from . import kernels
from .occupancy import sample_occupied
from .permutation import Permutation
from .rng import as_rng

CHANNELS = ("resampled-deck", "formula-direct")


def reorder_tail(perm, k):
    """Sort positions k+1..n of ``perm`` ascending (returns a new array)."""
    out = np.array(perm.entries if isinstance(perm, Permutation) else perm, dtype=np.int64)
    out[k:] = np.sort(out[k:])
    return out


def resampled_deck_array(n, r, rng):
    k = sample_occupied(n, r, rng)
    perm = rng.permutation(n).astype(np.int64) + 1
    return reorder_tail(perm, k), k


def sample_resampled_deck(n, r, rng=None):
    deck, _ = resampled_deck_array(n, r, as_rng(rng))
    return Permutation(deck, check=False)


def fixed_points_from_prefix(perm, k):
    """n - max(perm[:k]) + #{i <= k : perm[i] = i}; k = 0 gives n."""
    a = np.asarray(perm.entries if isinstance(perm, Permutation) else perm)
    if k == 0:
        return int(a.size)
    head = a[:k]
    return int(a.size - head.max()) + kernels.count_fixed(head)


def descents_indicator(u, k, boundary):
    """Descents among u[0..k-1] plus the boundary indicator."""
    if k == 0:
        return 0
    head = u[:k]
    return int(np.count_nonzero(head[:-1] > head[1:])) + int(boundary)


def sample_fixed_points_decomposed(n, r, rng=None):
    rng = as_rng(rng)
    k = sample_occupied(n, r, rng)
    perm = rng.permutation(n) + 1
    return fixed_points_from_prefix(perm, k)


def sample_descents_decomposed(n, r, rng=None, channel="resampled-deck"):
    if n < 2:
        raise ValueError("descents need n >= 2")
    rng = as_rng(rng)
    if channel == "resampled-deck":
        deck, _ = resampled_deck_array(n, r, rng)
        return kernels.count_descents(deck)
    if channel == "formula-direct":
        k = sample_occupied(n, r, rng)
        u = rng.random(k)
        # card at position k vs smallest unpicked card: a descent with
        # probability (n-k)/(n-k+1); drawn independently of the block
        boundary = 0 < k < n and rng.random() < (n - k) / (n - k + 1)
        return descents_indicator(u, k, boundary)
    raise ValueError(f"unknown descent channel {channel!r}")


def sample_inversions_decomposed(n, r, rng=None):
    rng = as_rng(rng)
    k = sample_occupied(n, r, rng)
    if k == 0:
        return 0
    highs = n - np.arange(1, k + 1) + 1  # R_i uniform on {0..n-i}
    return int(rng.integers(0, highs).sum())
