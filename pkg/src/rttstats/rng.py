"""Seeded random streams.

Generator family: numpy ``PCG64`` seeded through ``SeedSequence``.  Trial
``t`` of an experiment seeded with ``seed`` uses the substream
``SeedSequence(seed, spawn_key=(t,))``, so a trial's draws depend only on
``(seed, t)`` and never on scheduling.  The family is fixed for a release.
"""
import numpy as np

GENERATOR_FAMILY = "numpy.PCG64/SeedSequence"


def make_rng(seed, trial=None):
    if trial is None:
        ss = np.random.SeedSequence(seed)
    else:
        ss = np.random.SeedSequence(seed, spawn_key=(int(trial),))
    return np.random.Generator(np.random.PCG64(ss))


def as_rng(rng):
    """Accept a Generator, an integer seed or None."""
    if isinstance(rng, np.random.Generator):
        return rng
    return make_rng(rng)
