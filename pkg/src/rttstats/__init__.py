"""Iterated random-to-top shuffles: permutation statistics, exact finite-n
formulas, occupancy decompositions and Monte Carlo limit-law checks."""
from ._accel import BACKEND
from .permutation import (
    Permutation,
    PrefixSummary,
    count_descents,
    count_fixed_points,
    count_inversions,
    identity,
    invert,
    prefix_summary,
    sample_uniform,
)
from .shuffle import (
    SelectionSequence,
    ShuffleOutcome,
    apply_fast,
    apply_naive,
    sample_random_to_top,
    sample_top_to_random,
)

__version__ = "0.1.0"
