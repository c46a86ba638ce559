"""Procedural toy datasets for smoke runs and experiments.

Smooth random color fields: a low-resolution palette per image, upsampled
with the pipeline's resampling kernel.  Deterministic per seed.
"""

from __future__ import annotations

import numpy as np

from ..rng import spawn_rngs
from .processing import resample_bicubic


def synthetic_blob_images(n: int, res: int, seed: int = 0, palette_res: int = 5) -> np.ndarray:
    """(n, res, res, 3) float32 images in [-1, 1]."""
    images = []
    for rng in spawn_rngs(seed, n):
        low = rng.uniform(-1.0, 1.0, size=(palette_res, palette_res, 3))
        img = resample_bicubic(low, res)
        images.append(np.clip(img, -1.0, 1.0).astype(np.float32))
    return np.stack(images)
