"""Pluggable image feature extractors for FID.

Distances are comparable only within one extractor; every report should
name the extractor it used.  Available ids:

* ``pixel``             flattened pixels (tiny tests, closed-form oracles)
* ``random-projection`` fixed-seed Gaussian projection of pixels to 256
                        dims; hermetic and the desk-scale default
* ``inception-v3``      torchvision Inception features when the pretrained
                        weights are locally available

Extractors are differentiable torch functions so the projection loss can
share them; the numpy entry point wraps the torch one.
"""

from __future__ import annotations

import numpy as np
import torch

from ..errors import ConfigError, InvalidArgument

DEFAULT_EXTRACTOR = "random-projection"
_PROJECTION_DIM = 256
_PROJECTION_SEED = 0x7EA7
_projection_cache: dict[int, torch.Tensor] = {}
_inception = None


def available_extractors() -> list[str]:
    return ["pixel", "random-projection", "inception-v3"]


def _projection_matrix(in_dim: int) -> torch.Tensor:
    if in_dim not in _projection_cache:
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([_PROJECTION_SEED, in_dim])))
        mat = rng.standard_normal((in_dim, _PROJECTION_DIM), dtype=np.float32) / np.sqrt(in_dim)
        _projection_cache[in_dim] = torch.from_numpy(mat)
    return _projection_cache[in_dim]


def _inception_model():
    global _inception
    if _inception is None:
        try:
            from torchvision.models import Inception_V3_Weights, inception_v3

            model = inception_v3(weights=Inception_V3_Weights.IMAGENET1K_V1)
            model.fc = torch.nn.Identity()
            model.eval()
            _inception = model
        except Exception as exc:
            raise ConfigError(
                f"inception-v3 extractor unavailable (pretrained weights not loadable): {exc}"
            ) from exc
    return _inception


def extract_features_torch(batch: torch.Tensor, extractor_id: str = DEFAULT_EXTRACTOR) -> torch.Tensor:
    """(N, C, H, W) in [-1, 1] -> (N, F); differentiable."""
    if batch.ndim != 4:
        raise InvalidArgument(f"expected (N, C, H, W), got shape {tuple(batch.shape)}")
    if extractor_id == "pixel":
        return batch.flatten(1)
    if extractor_id == "random-projection":
        flat = batch.flatten(1)
        return flat @ _projection_matrix(flat.shape[1]).to(flat.dtype)
    if extractor_id == "inception-v3":
        model = _inception_model()
        x = torch.nn.functional.interpolate(batch, size=(299, 299), mode="bilinear",
                                            align_corners=False)
        with torch.no_grad():
            return model(x)
    raise ConfigError(f"unknown extractor {extractor_id!r}; available: {available_extractors()}")


def extract_features(images: np.ndarray, extractor_id: str = DEFAULT_EXTRACTOR,
                     batch_size: int = 64) -> np.ndarray:
    """(N, H, W, C) numpy images in [-1, 1] -> (N, F) feature matrix."""
    images = np.asarray(images, dtype=np.float32)
    if images.ndim != 4:
        raise InvalidArgument(f"expected (N, H, W, C) images, got shape {images.shape}")
    if images.size and (images.min() < -1.0 - 1e-5 or images.max() > 1.0 + 1e-5):
        raise InvalidArgument("image values must lie in [-1, 1]")
    out = []
    for lo in range(0, len(images), batch_size):
        chunk = torch.from_numpy(images[lo:lo + batch_size]).permute(0, 3, 1, 2)
        with torch.no_grad():
            out.append(extract_features_torch(chunk, extractor_id).numpy())
    if not out:
        return np.zeros((0, 0), dtype=np.float32)
    return np.concatenate(out, axis=0).astype(np.float32)
