"""Seeded counter-based random streams.

Every stochastic component of the toolkit (frequency sampling, decoder
restarts, data generation, k-means seeding) draws from a Philox stream whose
128-bit key is derived from a user seed plus a structural path such as
``("restart", iteration, index)``.  Streams are therefore independent of each
other and of any execution order: the same seed always produces the same
numbers regardless of chunking or scheduling.
"""

from __future__ import annotations

import hashlib

import numpy as np

__all__ = ["substream"]


def _key(seed: int, path: tuple) -> int:
    """Derive a 128-bit Philox key from (seed, path), stable across runs."""
    tag = repr((int(seed), path)).encode("ascii")
    digest = hashlib.blake2b(tag, digest_size=16).digest()
    return int.from_bytes(digest, "little")


def substream(seed: int, *path) -> np.random.Generator:
    """Return a Generator for the substream identified by ``(seed, *path)``.

    ``path`` elements must be ints or strings.  Distinct paths give
    statistically independent streams; the same path always gives the same
    stream.
    """
    for p in path:
        if not isinstance(p, (int, str)):
            raise TypeError(f"substream path elements must be int or str, got {type(p)!r}")
    return np.random.Generator(np.random.Philox(key=_key(seed, tuple(path))))
