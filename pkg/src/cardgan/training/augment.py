"""Discriminator-input augmentation pipeline.

Three categories: blitting (flips, quarter rotations, integer cyclic
translation), geometric (continuous affine warps), and color (linear
color-space transforms).  Each enabled transform fires independently per
image with probability p.  Everything is differentiable with respect to
the input pixels, so generator gradients pass through when fake batches
are augmented on the discriminator path.

Randomness is drawn from one PCG64 stream per image, spawned from the
call seed (see :func:`augmentation_rng`); the draw order per transform is
fixed (one uniform "fire" draw, then the transform's parameters), which
makes every transform reproducible by an external oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import torch
import torch.nn.functional as F

from ..errors import InvalidArgument
from ..rng import spawn_rngs

BLIT_TRANSFORMS = ("xflip", "rot90", "int_translate")
GEOMETRIC_TRANSFORMS = ("iso_scale", "rotate", "aniso_scale", "frac_translate")
COLOR_TRANSFORMS = ("brightness", "contrast", "luma_flip", "hue", "saturation")

_LUMA = np.array([0.299, 0.587, 0.114], dtype=np.float64)
_LUMA_AXIS = _LUMA / np.linalg.norm(_LUMA)


@dataclass(frozen=True)
class AugmentationPipelineConfig:
    """Enabled transforms per category and their parameter ranges."""

    blit: tuple[str, ...] = BLIT_TRANSFORMS
    geometric: tuple[str, ...] = GEOMETRIC_TRANSFORMS
    color: tuple[str, ...] = COLOR_TRANSFORMS
    int_translate_max: float = 0.125   # fraction of resolution
    iso_scale_std: float = 0.2         # log2 units
    aniso_scale_std: float = 0.2       # log2 units
    frac_translate_std: float = 0.125  # fraction of resolution
    brightness_std: float = 0.2
    contrast_std: float = 0.5          # log2 units
    saturation_std: float = 1.0        # log2 units

    def __post_init__(self) -> None:
        for name, known in (("blit", BLIT_TRANSFORMS), ("geometric", GEOMETRIC_TRANSFORMS),
                            ("color", COLOR_TRANSFORMS)):
            unknown = set(getattr(self, name)) - set(known)
            if unknown:
                raise InvalidArgument(f"unknown {name} transforms: {sorted(unknown)}")


def augmentation_rng(seed: int, image_index: int, batch_size: int) -> np.random.Generator:
    """The per-image stream used by :func:`apply_augmentations`."""
    return spawn_rngs(seed, batch_size)[image_index]


def _fires(rng: np.random.Generator, p: float) -> bool:
    return bool(rng.uniform() < p)


def _rotation2d(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def _geometric_matrix(rng: np.random.Generator, p: float,
                      cfg: AugmentationPipelineConfig) -> np.ndarray | None:
    """Forward affine in normalized [-1, 1] coordinates, or None if inert."""
    m = np.eye(3)
    fired = False
    for t in cfg.geometric:
        if not _fires(rng, p):
            continue
        fired = True
        if t == "iso_scale":
            s = 2.0 ** rng.normal(0.0, cfg.iso_scale_std)
            m = np.diag([s, s, 1.0]) @ m
        elif t == "rotate":
            m = _rotation2d(rng.uniform(-math.pi, math.pi)) @ m
        elif t == "aniso_scale":
            s = 2.0 ** rng.normal(0.0, cfg.aniso_scale_std)
            m = np.diag([s, 1.0 / s, 1.0]) @ m
        elif t == "frac_translate":
            tx = rng.normal(0.0, cfg.frac_translate_std) * 2.0
            ty = rng.normal(0.0, cfg.frac_translate_std) * 2.0
            shift = np.eye(3)
            shift[0, 2], shift[1, 2] = tx, ty
            m = shift @ m
    return m if fired else None


def _color_matrix(rng: np.random.Generator, p: float,
                  cfg: AugmentationPipelineConfig) -> tuple[np.ndarray, np.ndarray] | None:
    """(3x3 matrix, bias) acting on RGB pixel vectors, or None if inert."""
    mat = np.eye(3)
    bias = np.zeros(3)
    v = _LUMA_AXIS
    proj = np.outer(v, v)
    fired = False
    for t in cfg.color:
        if not _fires(rng, p):
            continue
        fired = True
        if t == "brightness":
            bias = bias + rng.normal(0.0, cfg.brightness_std)
        elif t == "contrast":
            c = 2.0 ** rng.normal(0.0, cfg.contrast_std)
            mat = c * mat
            bias = c * bias
        elif t == "luma_flip":
            flip = np.eye(3) - 2.0 * proj
            mat = flip @ mat
            bias = flip @ bias
        elif t == "hue":
            theta = rng.uniform(-math.pi, math.pi)
            k = v
            kx = np.array([[0, -k[2], k[1]], [k[2], 0, -k[0]], [-k[1], k[0], 0]])
            rot = np.eye(3) + math.sin(theta) * kx + (1 - math.cos(theta)) * (kx @ kx)
            mat = rot @ mat
            bias = rot @ bias
        elif t == "saturation":
            s = 2.0 ** rng.normal(0.0, cfg.saturation_std)
            sat = proj + (np.eye(3) - proj) * s
            mat = sat @ mat
            bias = sat @ bias
    return (mat, bias) if fired else None


def _apply_blit(img: torch.Tensor, rng: np.random.Generator, p: float,
                cfg: AugmentationPipelineConfig) -> torch.Tensor:
    res = img.shape[-1]
    for t in cfg.blit:
        if not _fires(rng, p):
            continue
        if t == "xflip":
            img = torch.flip(img, dims=[-1])
        elif t == "rot90":
            img = torch.rot90(img, k=int(rng.integers(1, 4)), dims=(-2, -1))
        elif t == "int_translate":
            max_shift = int(round(cfg.int_translate_max * res))
            dx = int(rng.integers(-max_shift, max_shift + 1))
            dy = int(rng.integers(-max_shift, max_shift + 1))
            img = torch.roll(img, shifts=(dy, dx), dims=(-2, -1))
    return img


def apply_augmentations(batch: torch.Tensor, p: float,
                        cfg: AugmentationPipelineConfig, seed: int) -> torch.Tensor:
    """Augment an (N, 3, H, W) batch in [-1, 1]; p = 0 is a bit-exact no-op.

    Meant for discriminator inputs only (real and fake alike); generator
    outputs that get persisted or evaluated never pass through here.
    """
    if not 0.0 <= p <= 1.0:
        raise InvalidArgument(f"augmentation probability must be in [0, 1], got {p}")
    if batch.ndim != 4:
        raise InvalidArgument(f"expected (N, C, H, W) batch, got shape {tuple(batch.shape)}")
    if p == 0.0:
        return batch
    rngs = spawn_rngs(seed, batch.shape[0])
    out = []
    for img, rng in zip(batch, rngs):
        img = _apply_blit(img, rng, p, cfg)
        geo = _geometric_matrix(rng, p, cfg)
        if geo is not None:
            inv = np.linalg.inv(geo)
            theta = torch.tensor(inv[:2, :], dtype=img.dtype).unsqueeze(0)
            grid = F.affine_grid(theta, (1, *img.shape), align_corners=False)
            img = F.grid_sample(img.unsqueeze(0), grid, mode="bilinear",
                                padding_mode="reflection", align_corners=False)[0]
        col = _color_matrix(rng, p, cfg)
        if col is not None:
            mat = torch.tensor(col[0], dtype=img.dtype)
            bias = torch.tensor(col[1], dtype=img.dtype)
            img = torch.einsum("ij,jhw->ihw", mat, img) + bias.view(3, 1, 1)
        out.append(img)
    return torch.stack(out).clamp(-1.0, 1.0)
