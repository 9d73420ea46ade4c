"""Reproducible, splittable random streams for parallel Monte Carlo.

Every stream is a counter-based Philox generator derived from
``SeedSequence(seed, spawn_key=path)``. A stream's identity depends only
on the root seed and its integer path - never on worker count, thread
scheduling or how many draws other streams made - so a run is
reproducible event-for-event under any parallel layout.

Event batches are carved into fixed-size chunks; chunk ``c`` of series
``s`` always draws from ``substream(seed, s, c)``, and per-chunk partial
results are merged in chunk order, which makes merged statistics
bit-identical across worker counts.
"""

from __future__ import annotations

import numpy as np

from .errors import ValidationError

DEFAULT_CHUNK_SIZE = 1 << 16
MAX_SEED = 2**64 - 1


def check_seed(seed: int) -> int:
    if not isinstance(seed, (int, np.integer)) or isinstance(seed, bool):
        raise ValidationError(f"seed must be an integer, got {seed!r}")
    if not (0 <= int(seed) <= MAX_SEED):
        raise ValidationError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return int(seed)


def substream(seed: int, *path: int) -> np.random.Generator:
    """Independent generator addressed by (seed, path...)."""
    seq = np.random.SeedSequence(check_seed(seed), spawn_key=tuple(int(p) for p in path))
    return np.random.Generator(np.random.Philox(seq))


def chunk_sizes(n: int, chunk_size: int = DEFAULT_CHUNK_SIZE) -> list[int]:
    """Fixed partition of n events into chunks, independent of worker count."""
    if n < 0:
        raise ValidationError(f"event count must be >= 0, got {n}")
    if chunk_size < 1:
        raise ValidationError(f"chunk size must be >= 1, got {chunk_size}")
    full, rem = divmod(n, chunk_size)
    return [chunk_size] * full + ([rem] if rem else [])
