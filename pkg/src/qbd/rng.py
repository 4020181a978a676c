"""Deterministic random-number streams.

All sampling code takes an explicit integer seed and derives independent
substreams from (seed, stream ids) through a counter-based Philox generator,
so results are bit-reproducible and sample batches can run in parallel
without sharing generator state.
"""

from __future__ import annotations

import numpy as np


def make_rng(seed: int, *stream: int) -> np.random.Generator:
    """Generator for the given seed, optionally split by stream indices.

    ``make_rng(s)`` and ``make_rng(s, i)`` for distinct ``i`` are
    statistically independent streams of the same root seed.
    """
    seq = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(s) for s in stream))
    return np.random.Generator(np.random.Philox(seq))


def as_rng(seed) -> np.random.Generator:
    """Accept a bare seed or a (seed, *stream) tuple."""
    if isinstance(seed, tuple):
        return make_rng(*seed)
    return make_rng(seed)
