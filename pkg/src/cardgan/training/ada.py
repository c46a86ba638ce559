"""Adaptive augmentation probability controller.

The overfitting signal is the mean sign of discriminator outputs on real
images: near +1 the discriminator separates reals confidently (overfit
risk, raise p), near -1 it does not (lower p).  p moves by a fixed
increment per adjustment so a full 0-to-1 sweep takes ``speed_images``
training images.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InvalidArgument


@dataclass
class AdaState:
    p: float = 0.0
    rt_estimate: float = 0.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.p <= 1.0:
            raise InvalidArgument(f"augmentation probability must be in [0, 1], got {self.p}")


def ada_update(state: AdaState, real_scores: np.ndarray, target: float,
               images_seen: int, speed_images: int) -> AdaState:
    """One controller adjustment after ``images_seen`` images since the last.

    Returns a new state; the input is untouched.
    """
    if not 0.0 < target < 1.0:
        raise InvalidArgument(f"ada target must be in (0, 1), got {target}")
    scores = np.asarray(real_scores, dtype=np.float64)
    rt = float(np.sign(scores).mean()) if scores.size else state.rt_estimate
    step = images_seen / float(speed_images)
    p = state.p + step * float(np.sign(rt - target))
    return AdaState(p=float(np.clip(p, 0.0, 1.0)), rt_estimate=rt)
