"""Seeded randomness.

Every seeded operation in this package draws from numpy's PCG64 generator,
which is platform-independent and stable across processes and numpy
releases.  Seeds are 64-bit non-negative integers and are part of the
external interface: the same seed always reproduces the same latents and
noise buffers, on any machine.

Derived streams (one per noise site, one per dataset entry, ...) come from
``numpy.random.SeedSequence(seed).spawn(n)`` so that streams are mutually
independent while remaining a pure function of the parent seed.
"""

from __future__ import annotations

import numpy as np

MAX_SEED = 2**63 - 1


def check_seed(seed: int, name: str = "seed") -> int:
    from .errors import InvalidArgument

    if not isinstance(seed, (int, np.integer)):
        raise InvalidArgument(f"{name} must be an integer, got {type(seed).__name__}")
    if not 0 <= int(seed) <= MAX_SEED:
        raise InvalidArgument(f"{name} must be in [0, 2**63-1], got {seed}")
    return int(seed)


def rng_from_seed(seed: int) -> np.random.Generator:
    """One PCG64 stream for the given seed."""
    return np.random.Generator(np.random.PCG64(check_seed(seed)))


def spawn_rngs(seed: int, n: int) -> list[np.random.Generator]:
    """``n`` independent PCG64 streams derived from one seed."""
    seqs = np.random.SeedSequence(check_seed(seed)).spawn(n)
    return [np.random.Generator(np.random.PCG64(s)) for s in seqs]
