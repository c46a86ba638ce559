"""Seeded spatial noise buffers for the synthesis network."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..config import ArchConfig
from ..errors import InvalidArgument
from ..rng import check_seed, spawn_rngs


@dataclass
class NoiseBuffers:
    """Per-site standard-normal buffers, a pure function of the seed.

    ``buffers`` maps site name -> float32 (res, res) array.  The same seed
    always regenerates bit-identical buffers (PCG64; one spawned stream per
    site, so sites are mutually independent).
    """

    seed: int
    buffers: dict[str, np.ndarray] = field(default_factory=dict)

    def validate_for(self, arch: ArchConfig) -> "NoiseBuffers":
        expected = {s.name: s.resolution for s in arch.noise_sites}
        if set(self.buffers) != set(expected):
            raise InvalidArgument(
                f"noise buffers cover sites {sorted(self.buffers)}, expected {sorted(expected)}"
            )
        for name, buf in self.buffers.items():
            res = expected[name]
            if buf.shape != (res, res):
                raise InvalidArgument(
                    f"noise buffer {name!r} has shape {buf.shape}, expected ({res}, {res})"
                )
        return self

    def copy(self) -> "NoiseBuffers":
        return NoiseBuffers(self.seed, {k: v.copy() for k, v in self.buffers.items()})


def sample_noise(seed: int, arch: ArchConfig) -> NoiseBuffers:
    """Deterministic standard-normal buffers for every injection site."""
    check_seed(seed)
    sites = arch.noise_sites
    rngs = spawn_rngs(seed, len(sites))
    buffers = {
        site.name: rng.standard_normal((site.resolution, site.resolution), dtype=np.float32)
        for site, rng in zip(sites, rngs)
    }
    return NoiseBuffers(seed=seed, buffers=buffers)
