"""
Seeded random streams.
Every stream is derived from a master seed plus integer keys through numpy's SeedSequence,
so a record (p, m) gets the same stream no matter which order or thread generates it.
"""

from typing import Union

import numpy as np

# Stream tags keep independent uses of one master seed apart.
STREAM_PRIOR = 0
STREAM_RECORD = 1
STREAM_SPLIT = 2
STREAM_INPUT = 3
STREAM_TEST = 4
STREAM_SHUFFLE = 5
STREAM_INIT = 6
STREAM_PF = 7
STREAM_MH = 8

SeedLike = Union[int, np.integer]


def derive_seed(master_seed: SeedLike, *keys: int) -> int:
    """Collapse (master_seed, *keys) into one 64-bit seed."""
    sequence = np.random.SeedSequence([int(master_seed) & 0xFFFFFFFFFFFFFFFF, *[int(k) for k in keys]])
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


def make_rng(seed: SeedLike, *keys: int) -> np.random.Generator:
    if keys:
        seed = derive_seed(seed, *keys)
    return np.random.Generator(np.random.PCG64(int(seed) & 0xFFFFFFFFFFFFFFFF))
