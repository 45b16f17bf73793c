"""Seeded random streams.

Every random draw goes through a Philox (counter-based) generator keyed by a
64-bit seed and an optional path of stream indices, so replicate ``r`` of an
experiment sees the same numbers whether replicates run serially or not.
"""

import numpy as np

from ._validation import check_seed

DEFAULT_SEED = 20231204


def stream(seed, *path):
    """Generator for the stream ``(seed, *path)``; path entries are non-negative ints."""
    seed = check_seed(seed)
    ss = np.random.SeedSequence(entropy=seed, spawn_key=tuple(int(p) for p in path))
    return np.random.Generator(np.random.Philox(ss))


def derive_seed(seed, *path):
    """A 64-bit integer seed for the sub-stream ``(seed, *path)``."""
    seed = check_seed(seed)
    ss = np.random.SeedSequence(entropy=seed, spawn_key=tuple(int(p) for p in path))
    return int(ss.generate_state(1, dtype=np.uint64)[0])
