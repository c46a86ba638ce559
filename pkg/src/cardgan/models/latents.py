"""Pure latent-space operations: truncation, style mixing, broadcasting.

Latents are numpy float32 arrays: a mapped latent w has shape (D,), a
per-layer stack has shape (L, D) with index 0 driving the coarsest (4x4)
layer.  All operations here are deterministic and allocation-pure.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InvalidArgument
from ..rng import check_seed


def _check_finite(arr: np.ndarray, name: str) -> np.ndarray:
    arr = np.asarray(arr, dtype=np.float32)
    if not np.all(np.isfinite(arr)):
        raise InvalidArgument(f"{name} contains non-finite entries")
    return arr


def validate_w(w: np.ndarray, dim: int | None = None) -> np.ndarray:
    w = _check_finite(w, "latent")
    if w.ndim != 1:
        raise InvalidArgument(f"latent must be 1-D, got shape {w.shape}")
    if dim is not None and w.shape[0] != dim:
        raise InvalidArgument(f"latent has dimension {w.shape[0]}, expected {dim}")
    return w


def validate_w_plus(w_plus: np.ndarray, num_layers: int | None = None,
                    dim: int | None = None) -> np.ndarray:
    w_plus = _check_finite(w_plus, "latent stack")
    if w_plus.ndim != 2:
        raise InvalidArgument(f"latent stack must be 2-D (L, D), got shape {w_plus.shape}")
    if num_layers is not None and w_plus.shape[0] != num_layers:
        raise InvalidArgument(f"latent stack has {w_plus.shape[0]} layers, expected {num_layers}")
    if dim is not None and w_plus.shape[1] != dim:
        raise InvalidArgument(f"latent stack has dimension {w_plus.shape[1]}, expected {dim}")
    return w_plus


def validate_image(img: np.ndarray, res: int | None = None) -> np.ndarray:
    """An image is a (H, W, 3) float32 array with H == W in [-1, 1] sRGB."""
    img = np.asarray(img, dtype=np.float32)
    if img.ndim != 3 or img.shape[2] != 3 or img.shape[0] != img.shape[1]:
        raise InvalidArgument(f"image must have shape (R, R, 3), got {img.shape}")
    if res is not None and img.shape[0] != res:
        raise InvalidArgument(f"image resolution {img.shape[0]} does not match {res}")
    if not np.all(np.isfinite(img)):
        raise InvalidArgument("image contains non-finite entries")
    return img


def broadcast_w(w: np.ndarray, num_layers: int) -> np.ndarray:
    """Repeat one mapped latent into a per-layer stack."""
    w = validate_w(w)
    return np.repeat(w[None, :], num_layers, axis=0)


def truncate(w_plus: np.ndarray, psi: float, w_mean: np.ndarray,
             cutoff_layers: int | None = None) -> np.ndarray:
    """Interpolate layers below ``cutoff_layers`` toward the latent mean.

    out[i] = w_mean + psi * (w[i] - w_mean) for i < cutoff_layers; layers at
    or above the cutoff pass through unchanged.  psi = 1 is the identity,
    psi = 0 collapses to the mean.
    """
    w_plus = validate_w_plus(w_plus)
    num_layers = w_plus.shape[0]
    if cutoff_layers is None:
        cutoff_layers = num_layers
    if not np.isfinite(psi):
        raise InvalidArgument(f"psi must be finite, got {psi}")
    if not 0 <= cutoff_layers <= num_layers:
        raise InvalidArgument(f"cutoff_layers must be in [0, {num_layers}], got {cutoff_layers}")
    w_mean = validate_w(w_mean, w_plus.shape[1])
    out = w_plus.copy()
    # psi = 1 and psi = 0 are exact by contract, not merely up to rounding
    if psi == 1.0:
        return out
    if psi == 0.0:
        out[:cutoff_layers] = w_mean[None, :]
        return out
    out[:cutoff_layers] = w_mean[None, :] + np.float32(psi) * (w_plus[:cutoff_layers] - w_mean[None, :])
    return out


@dataclass(frozen=True)
class StyleMixSpec:
    """Layer cutoff and blend strength for mixing two latent stacks.

    ``mix_seed`` identifies the style source when the mix partner is drawn
    from a seed rather than supplied explicitly.
    """

    cutoff: int
    strength: float
    mix_seed: int = 0

    def validate(self, num_layers: int) -> "StyleMixSpec":
        if not 0 <= self.cutoff <= num_layers:
            raise InvalidArgument(f"cutoff must be in [0, {num_layers}], got {self.cutoff}")
        if not (np.isfinite(self.strength) and 0.0 <= self.strength <= 1.0):
            raise InvalidArgument(f"strength must be in [0, 1], got {self.strength}")
        check_seed(self.mix_seed, "mix_seed")
        return self


def style_mix(identity: np.ndarray, style: np.ndarray, spec: StyleMixSpec) -> np.ndarray:
    """Blend fine layers of ``style`` into ``identity``.

    Layers below the cutoff come from ``identity`` unchanged; layers at or
    above it are (1 - strength) * identity + strength * style.
    """
    identity = validate_w_plus(identity)
    style = validate_w_plus(style)
    if identity.shape != style.shape:
        raise InvalidArgument(
            f"latent stacks must agree in shape, got {identity.shape} vs {style.shape}"
        )
    spec.validate(identity.shape[0])
    out = identity.copy()
    # boundary strengths are exact by contract
    if spec.strength == 0.0:
        return out
    if spec.strength == 1.0:
        out[spec.cutoff:] = style[spec.cutoff:]
        return out
    s = np.float32(spec.strength)
    out[spec.cutoff:] = (1 - s) * identity[spec.cutoff:] + s * style[spec.cutoff:]
    return out
