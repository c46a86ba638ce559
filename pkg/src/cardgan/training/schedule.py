"""Learning-rate schedule: constant, then cosine decay to a floor."""

from __future__ import annotations

import math
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from .loop import TrainConfig


def lr_schedule(step: int, cfg: "TrainConfig") -> float:
    """Learning rate at an optimizer step.

    Constant at ``lr_initial`` until ``lr_decay_start_images`` training
    images, then a cosine half-phase down to ``lr_final`` at
    ``total_images``.  Monotone non-increasing in ``step``.
    """
    if step < 0:
        raise ValueError(f"step must be non-negative, got {step}")
    images = step * cfg.batch_size
    start = cfg.decay_start_images
    if images <= start:
        return cfg.lr_initial
    if images >= cfg.total_images:
        return cfg.lr_final
    t = (images - start) / (cfg.total_images - start)
    return cfg.lr_final + (cfg.lr_initial - cfg.lr_final) * 0.5 * (1.0 + math.cos(math.pi * t))
