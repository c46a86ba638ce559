"""Style-mixing grids: coarse identity sources crossed with fine style
sources."""

from __future__ import annotations

import numpy as np

from ..errors import InvalidArgument
from ..models.checkpoint import GeneratorCheckpoint
from ..models.latents import StyleMixSpec, style_mix, validate_w_plus
from ..models.noise import NoiseBuffers, sample_noise
from ..models.ops import synthesize_batch


def mix_grid(coarse_sources: list[np.ndarray], fine_sources: list[np.ndarray],
             cutoff: int, ckpt: GeneratorCheckpoint,
             noise: NoiseBuffers | None = None, noise_seed: int = 0,
             batch_size: int = 1) -> np.ndarray:
    """Grid of shape (|coarse|, |fine|, R, R, 3).

    Cell (i, j) renders coarse[i]'s layers below the cutoff with fine[j]'s
    layers at and above it (full-strength mix).  One noise realization is
    shared by every cell.  The default batch size of 1 keeps each cell
    bit-identical to a standalone render (conv results can differ in the
    last ulp across batch sizes); raise it when that parity is not needed.
    """
    if not coarse_sources or not fine_sources:
        raise InvalidArgument("mix_grid needs at least one coarse and one fine source")
    spec = StyleMixSpec(cutoff=cutoff, strength=1.0)
    stacks = []
    for coarse in coarse_sources:
        coarse = validate_w_plus(coarse, ckpt.num_layers, ckpt.latent_dim)
        for fine in fine_sources:
            fine = validate_w_plus(fine, ckpt.num_layers, ckpt.latent_dim)
            stacks.append(style_mix(coarse, fine, spec))
    stacks = np.stack(stacks)
    noise = noise if noise is not None else sample_noise(noise_seed, ckpt.arch)
    cells = []
    for lo in range(0, len(stacks), batch_size):
        cells.append(synthesize_batch(stacks[lo:lo + batch_size], noise, ckpt.gates, ckpt))
    imgs = np.concatenate(cells, axis=0)
    res = ckpt.arch.output_res
    return imgs.reshape(len(coarse_sources), len(fine_sources), res, res, 3)
