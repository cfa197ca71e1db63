"""Portable seeded randomness.

Everything random in the package draws from numpy's Philox generator, a
64-bit counter-based PRNG whose streams are identical across platforms.
"""

import os

import numpy as np

SEED_ENV = "DRSUB_SEED"


def make_rng(seed: int | None, stream: int = 0) -> np.random.Generator:
    """Generator keyed by ``(seed, stream)``; distinct streams never overlap."""
    seed = resolve_seed(seed)
    key = np.array([seed & 0xFFFFFFFFFFFFFFFF, stream & 0xFFFFFFFFFFFFFFFF], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def resolve_seed(seed: int | None) -> int:
    """Explicit seed, else ``$DRSUB_SEED``, else 0."""
    if seed is not None:
        return int(seed)
    env = os.environ.get(SEED_ENV)
    if env:
        return int(env)
    return 0
