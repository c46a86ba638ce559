"""Cropping and resampling.

Resampling uses a separable cubic convolution kernel (Catmull-Rom,
a = -0.5) with per-output-pixel weight normalization and kernel widening
when downsampling.  The 2x super-resolution hook is a pluggable backend
registry; the always-present ``bicubic`` fallback reuses the exact same
kernel, so it is bit-identical to a plain 2x upsample.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from ..errors import ConfigError, InvalidArgument


def _catmull_rom(x: np.ndarray, a: float = -0.5) -> np.ndarray:
    ax = np.abs(x)
    inner = (a + 2.0) * ax**3 - (a + 3.0) * ax**2 + 1.0
    outer = a * ax**3 - 5.0 * a * ax**2 + 8.0 * a * ax - 4.0 * a
    return np.where(ax <= 1.0, inner, np.where(ax < 2.0, outer, 0.0))


def _axis_weights(in_size: int, out_size: int) -> np.ndarray:
    """(out_size, in_size) row-normalized resampling matrix."""
    scale = in_size / out_size
    widen = max(scale, 1.0)  # widen the kernel when downsampling
    centers = (np.arange(out_size) + 0.5) * scale - 0.5
    radius = int(np.ceil(2.0 * widen))
    offsets = np.arange(-radius, radius + 1)
    idx = np.floor(centers)[:, None] + offsets[None, :]
    weights = _catmull_rom((idx - centers[:, None]) / widen)
    idx = np.clip(idx, 0, in_size - 1).astype(np.int64)
    matrix = np.zeros((out_size, in_size))
    for row in range(out_size):
        np.add.at(matrix[row], idx[row], weights[row])
    return matrix / matrix.sum(axis=1, keepdims=True)


def resample_bicubic(image: np.ndarray, target_res: int) -> np.ndarray:
    """Resample a square (H, H, C) image to (target, target, C), float64 math.

    Same-size calls are bit-identical passthroughs.
    """
    image = np.asarray(image)
    if image.ndim != 3 or image.shape[0] != image.shape[1]:
        raise InvalidArgument(f"expected a square (H, H, C) image, got shape {image.shape}")
    if target_res < 1:
        raise InvalidArgument(f"target resolution must be positive, got {target_res}")
    if image.shape[0] == target_res:
        return image.copy()
    w = _axis_weights(image.shape[0], target_res)
    out = np.einsum("oi,ijc->ojc", w, image.astype(np.float64))
    out = np.einsum("oj,ijc->ioc", w, out)
    return out.astype(image.dtype if np.issubdtype(image.dtype, np.floating) else np.float64)


def to_unit_range(image: np.ndarray) -> np.ndarray:
    """uint8 [0, 255] -> float32 [-1, 1]."""
    return (np.asarray(image, dtype=np.float32) / 127.5 - 1.0).astype(np.float32)


def from_unit_range(image: np.ndarray) -> np.ndarray:
    """float [-1, 1] -> uint8 [0, 255], round-half-away like PIL."""
    scaled = (np.asarray(image, dtype=np.float64) + 1.0) * 127.5
    return np.clip(np.floor(scaled + 0.5), 0, 255).astype(np.uint8)


def crop_and_resample(image: np.ndarray, crop_box: tuple[int, int, int, int],
                      target_res: int) -> np.ndarray:
    """Crop (left, top, right, bottom) and resample to a power-of-two size.

    Returns a float32 (R, R, 3) image in [-1, 1]; uint8 input is converted.
    """
    image = np.asarray(image)
    if image.ndim != 3 or image.shape[2] != 3:
        raise InvalidArgument(f"expected an (H, W, 3) image, got shape {image.shape}")
    left, top, right, bottom = crop_box
    h, w = image.shape[:2]
    if not (0 <= left < right <= w and 0 <= top < bottom <= h):
        raise InvalidArgument(f"crop box {crop_box} out of bounds for {w}x{h} image")
    if right - left != bottom - top:
        raise InvalidArgument(f"crop box {crop_box} is not square")
    if target_res & (target_res - 1) or target_res < 1:
        raise InvalidArgument(f"target resolution must be a power of two, got {target_res}")
    crop = image[top:bottom, left:right]
    if image.dtype == np.uint8:
        crop = to_unit_range(crop).astype(np.float64)
    out = resample_bicubic(crop, target_res)
    return np.clip(out, -1.0, 1.0).astype(np.float32)


# -- super resolution ---------------------------------------------------------

def _bicubic_backend(image: np.ndarray) -> np.ndarray:
    return resample_bicubic(image, image.shape[0] * 2)


sr_backends: dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "bicubic": _bicubic_backend,
}


def super_resolve_2x(image: np.ndarray, sr_backend: str = "bicubic") -> np.ndarray:
    """Double the spatial resolution via a registered backend."""
    image = np.asarray(image)
    if image.ndim != 3 or image.shape[0] != image.shape[1]:
        raise InvalidArgument(f"expected a square (H, H, C) image, got shape {image.shape}")
    if sr_backend not in sr_backends:
        raise ConfigError(
            f"unknown super-resolution backend {sr_backend!r}; "
            f"registered: {sorted(sr_backends)}"
        )
    out = sr_backends[sr_backend](image)
    expected = image.shape[0] * 2
    if out.shape[0] != expected or out.shape[1] != expected:
        raise ConfigError(
            f"backend {sr_backend!r} returned {out.shape[:2]}, expected {(expected, expected)}"
        )
    return out
