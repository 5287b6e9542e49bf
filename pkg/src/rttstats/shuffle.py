"""Iterated random-to-top shuffles.

A trajectory is fixed by its pick sequence: the card value chosen at each
step.  ``apply_naive`` replays the moves literally; ``apply_fast`` builds the
same deck in O(r + n) by ordering picked cards by their last pick time
(newest on top) and appending unpicked cards in increasing order.
"""
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import kernels
from .permutation import Permutation, invert
from .rng import as_rng


@dataclass(frozen=True)
class SelectionSequence:
    n: int
    picks: tuple

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"invalid deck size {self.n}")
        picks = tuple(int(c) for c in self.picks)
        bad = [c for c in picks if not 1 <= c <= self.n]
        if bad:
            raise ValueError(f"pick {bad[0]} outside 1..{self.n}")
        object.__setattr__(self, "picks", picks)

    @property
    def r(self):
        return len(self.picks)

    def to_line(self):
        return " ".join(str(v) for v in (self.n, self.r, *self.picks))

    @classmethod
    def from_line(cls, line):
        fields = [int(tok) for tok in line.split()]
        if len(fields) < 2:
            raise ValueError("expected 'n r p1 ... pr'")
        n, r, picks = fields[0], fields[1], fields[2:]
        if len(picks) != r:
            raise ValueError(f"header says r={r} but {len(picks)} picks follow")
        return cls(n, tuple(picks))

    def save(self, path):
        Path(path).write_text(self.to_line() + "\n")

    @classmethod
    def load(cls, path):
        return cls.from_line(Path(path).read_text().strip())


@dataclass(frozen=True)
class ShuffleOutcome:
    deck: Permutation
    distinct_selected: int


def apply_naive(s):
    deck = list(range(1, s.n + 1))
    for c in s.picks:
        deck.remove(c)
        deck.insert(0, c)
    return ShuffleOutcome(Permutation(deck, check=False), len(set(s.picks)))


def apply_fast(s):
    deck, distinct = kernels.rtt_deck(np.asarray(s.picks, dtype=np.int64), s.n)
    return ShuffleOutcome(Permutation(deck, check=False), int(distinct))


def draw_picks(n, r, rng):
    if n < 1 or r < 0:
        raise ValueError(f"need n >= 1 and r >= 0, got n={n}, r={r}")
    return rng.integers(1, n + 1, size=r, dtype=np.int64)


def deck_array(n, r, rng):
    """Raw (deck, distinct) for one random-to-top trajectory; no wrapping."""
    return kernels.rtt_deck(draw_picks(n, r, rng), n)


def sample_selection(n, r, rng=None):
    return SelectionSequence(n, tuple(draw_picks(n, r, as_rng(rng)).tolist()))


def sample_random_to_top(n, r, rng=None):
    deck, distinct = deck_array(n, r, as_rng(rng))
    return ShuffleOutcome(Permutation(deck, check=False), int(distinct))


def sample_top_to_random(n, r, rng=None):
    return invert(sample_random_to_top(n, r, rng).deck)
