import numpy as np

from au.config import AU__RNG_ALGORITHM

_BIT_GENERATORS = {
    "PCG64": np.random.PCG64,
}


def generator(seed: int, *stream: int) -> np.random.Generator:
    """Seeded generator for one named stream of a run.

    Distinct `stream` tuples under the same seed are statistically independent,
    so callers can draw points, boxes and tables without sharing state.
    """
    sequence = np.random.SeedSequence([seed, *stream])
    return np.random.Generator(_BIT_GENERATORS[AU__RNG_ALGORITHM](sequence))
