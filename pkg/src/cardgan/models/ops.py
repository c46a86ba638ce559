"""Spec-level generator operations.

Numpy in, numpy out; torch only inside.  All functions are pure given
(parameters, inputs, seeds) and safe to call concurrently on a shared
read-only checkpoint.
"""

from __future__ import annotations

import numpy as np
import torch

from ..errors import InvalidArgument, NumericFailure
from ..rng import check_seed, rng_from_seed, spawn_rngs
from .checkpoint import GeneratorCheckpoint
from .latents import broadcast_w, truncate, validate_image, validate_w_plus
from .noise import NoiseBuffers, sample_noise
from ..config import NoiseGateConfig


def sample_z(seed: int, latent_dim: int, n: int = 1) -> np.ndarray:
    """Standard-normal input latents from the documented PCG64 stream."""
    rng = rng_from_seed(seed)
    return rng.standard_normal((n, latent_dim), dtype=np.float32)


def map_latent(z: np.ndarray, ckpt: GeneratorCheckpoint) -> np.ndarray:
    """Map one input latent through the mapping network."""
    return map_latents(np.asarray(z, dtype=np.float32)[None, :], ckpt)[0]


def map_latents(z: np.ndarray, ckpt: GeneratorCheckpoint) -> np.ndarray:
    z = np.asarray(z, dtype=np.float32)
    if z.ndim != 2 or z.shape[1] != ckpt.latent_dim:
        raise InvalidArgument(
            f"latent batch must have shape (N, {ckpt.latent_dim}), got {tuple(z.shape)}"
        )
    if not np.all(np.isfinite(z)):
        raise InvalidArgument("latent contains non-finite entries")
    with torch.no_grad():
        w = ckpt.mapping(torch.from_numpy(z))
    return w.numpy().astype(np.float32)


def _noise_to_torch(noise: NoiseBuffers) -> dict[str, torch.Tensor]:
    return {k: torch.from_numpy(v) for k, v in noise.buffers.items()}


def synthesize(w_plus: np.ndarray, noise: NoiseBuffers, gates: NoiseGateConfig,
               ckpt: GeneratorCheckpoint) -> np.ndarray:
    """Render one latent stack to an (R, R, 3) image in [-1, 1]."""
    w_plus = validate_w_plus(w_plus, ckpt.num_layers, ckpt.latent_dim)
    return synthesize_batch(w_plus[None], noise, gates, ckpt)[0]


def synthesize_batch(w_plus: np.ndarray, noise: NoiseBuffers | list[NoiseBuffers],
                     gates: NoiseGateConfig, ckpt: GeneratorCheckpoint) -> np.ndarray:
    """Render a batch; ``noise`` is shared, or one buffer set per sample."""
    w_plus = np.asarray(w_plus, dtype=np.float32)
    if w_plus.ndim != 3:
        raise InvalidArgument(f"latent stack batch must be 3-D, got shape {w_plus.shape}")
    if isinstance(noise, NoiseBuffers):
        noise.validate_for(ckpt.arch)
        noise_t = _noise_to_torch(noise)
    else:
        if len(noise) != w_plus.shape[0]:
            raise InvalidArgument(f"got {len(noise)} noise sets for batch of {w_plus.shape[0]}")
        for nb in noise:
            nb.validate_for(ckpt.arch)
        noise_t = {
            name: torch.from_numpy(np.stack([nb.buffers[name] for nb in noise])[:, None])
            for name in noise[0].buffers
        }
    with torch.no_grad():
        img = ckpt.synthesis(torch.from_numpy(w_plus), noise_t, gates)
    if not torch.isfinite(img).all():
        raise NumericFailure("synthesis produced non-finite activations")
    return img.clamp(-1, 1).permute(0, 2, 3, 1).numpy().astype(np.float32)


def generate(latent_seed: int, noise_seed: int, psi: float,
             ckpt: GeneratorCheckpoint) -> tuple[np.ndarray, np.ndarray, NoiseBuffers]:
    """Seeded end-to-end sample: map, broadcast, truncate, synthesize.

    Returns (image, latent stack, noise buffers) so any result can be
    reproduced or re-edited from its intermediates.
    """
    check_seed(latent_seed, "latent_seed")
    check_seed(noise_seed, "noise_seed")
    z = sample_z(latent_seed, ckpt.latent_dim)[0]
    w = map_latent(z, ckpt)
    w_plus = broadcast_w(w, ckpt.num_layers)
    w_plus = truncate(w_plus, psi, ckpt.require_w_mean())
    noise = sample_noise(noise_seed, ckpt.arch)
    img = synthesize(w_plus, noise, ckpt.gates, ckpt)
    return img, w_plus, noise


def generate_batch(latent_seeds: np.ndarray | list[int], noise: NoiseBuffers | list[NoiseBuffers],
                   psi: float, ckpt: GeneratorCheckpoint, batch_size: int = 16) -> np.ndarray:
    """Vectorized seeded generation used by the evaluation runners."""
    w_mean = ckpt.require_w_mean()
    zs = np.stack([sample_z(int(s), ckpt.latent_dim)[0] for s in latent_seeds])
    ws = map_latents(zs, ckpt)
    stacks = np.stack([truncate(broadcast_w(w, ckpt.num_layers), psi, w_mean) for w in ws])
    imgs = []
    for lo in range(0, len(stacks), batch_size):
        hi = min(lo + batch_size, len(stacks))
        chunk_noise = noise if isinstance(noise, NoiseBuffers) else noise[lo:hi]
        imgs.append(synthesize_batch(stacks[lo:hi], chunk_noise, ckpt.gates, ckpt))
    return np.concatenate(imgs, axis=0)


def noise_for_latents(seed: int, n: int, ckpt: GeneratorCheckpoint) -> list[NoiseBuffers]:
    """One independent noise set per latent, derived from a single seed."""
    rngs = spawn_rngs(seed, n)
    out = []
    for rng in rngs:
        sub = int(rng.integers(0, 2**63 - 1))
        out.append(sample_noise(sub, ckpt.arch))
    return out


def discriminate(img: np.ndarray, discriminator) -> float | np.ndarray:
    """Adversary logit(s) for one image or a batch (no augmentation)."""
    arr = np.asarray(img, dtype=np.float32)
    single = arr.ndim == 3
    if single:
        validate_image(arr)
        arr = arr[None]
    if arr.ndim != 4:
        raise InvalidArgument(f"expected (H, W, 3) or (N, H, W, 3), got shape {arr.shape}")
    with torch.no_grad():
        scores = discriminator(torch.from_numpy(arr).permute(0, 3, 1, 2))
    if not torch.isfinite(scores).all():
        raise NumericFailure("discriminator produced non-finite scores")
    out = scores.numpy().astype(np.float32)
    return float(out[0]) if single else out
