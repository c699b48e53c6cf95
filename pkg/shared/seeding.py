"""Reproducibility helpers.

All stochastic code takes an explicit ``numpy.random.Generator``; nothing
touches global random state.
"""

import numpy as np


def get_rng(seed: int) -> np.random.Generator:
    """Return a PCG64 generator for ``seed``.

    Generators are not shared between threads; each training run owns one.
    """
    return np.random.default_rng(seed)
