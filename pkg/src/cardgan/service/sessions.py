"""Edit sessions: the JSON surface of the generation endpoint.

A session is fully reproducible: the same session always renders the same
image.  The edit order is fixed and documented: seeds -> truncation ->
style-mix -> principal-direction edits -> synthesis.  When a session
references a stored archive, the archive supplies the latent stack and
noise in place of the seeds; the remaining edits still apply (their
defaults are exact no-ops).
"""

from __future__ import annotations

from typing import Annotated, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..errors import InvalidArgument
from ..latent_tools.pca import PcaBasis, PcaEdit, apply_pca_edits
from ..models.checkpoint import GeneratorCheckpoint
from ..models.latents import StyleMixSpec, broadcast_w, style_mix, truncate
from ..models.noise import NoiseBuffers, sample_noise
from ..models.ops import map_latent, sample_z, synthesize
from ..rng import MAX_SEED
from .archives import LatentArchive

Seed = Annotated[int, Field(ge=0, le=MAX_SEED)]


class StyleMixParams(BaseModel):
    model_config = ConfigDict(extra="forbid")

    mix_seed: Seed = 0
    cutoff: int = Field(0, ge=0)
    strength: float = Field(0.0, ge=0.0, le=1.0)


class PcaEditParams(BaseModel):
    model_config = ConfigDict(extra="forbid")

    direction: int = Field(ge=0)
    weight: float = Field(ge=-40.0, le=40.0)
    layer_lo: Optional[int] = Field(None, ge=0)
    layer_hi: Optional[int] = Field(None, ge=0)


class EditSession(BaseModel):
    model_config = ConfigDict(extra="forbid", protected_namespaces=())

    model_id: str
    latent_seed: Seed = 0
    noise_seed: Seed = 0
    truncation: float = Field(1.0, ge=-2.0, le=2.0)
    truncation_cutoff: Optional[int] = Field(None, ge=0)
    style_mix: Optional[StyleMixParams] = None
    pca_edits: list[PcaEditParams] = Field(default_factory=list)
    archive_id: Optional[str] = None
    explicit_w_plus: Optional[list[list[float]]] = None

    def canonical(self) -> dict:
        return self.model_dump(exclude_none=True)


def validate_model_ranges(session: EditSession, ckpt: GeneratorCheckpoint,
                          max_pca_edits: int) -> None:
    """Model-dependent range checks; messages name the offending field."""
    num_layers = ckpt.num_layers
    d = ckpt.latent_dim
    if session.style_mix is not None and session.style_mix.cutoff > num_layers - 1:
        raise InvalidArgument(
            f"style_mix.cutoff: must be in [0, {num_layers - 1}] for this model, "
            f"got {session.style_mix.cutoff}")
    if session.truncation_cutoff is not None and session.truncation_cutoff > num_layers:
        raise InvalidArgument(
            f"truncation_cutoff: must be in [0, {num_layers}], got {session.truncation_cutoff}")
    if len(session.pca_edits) > max_pca_edits:
        raise InvalidArgument(
            f"pca_edits: at most {max_pca_edits} active edits, got {len(session.pca_edits)}")
    for i, edit in enumerate(session.pca_edits):
        if edit.direction > d - 1:
            raise InvalidArgument(
                f"pca_edits[{i}].direction: must be in [0, {d - 1}] for this model, "
                f"got {edit.direction}")
        lo = edit.layer_lo if edit.layer_lo is not None else 0
        hi = edit.layer_hi if edit.layer_hi is not None else num_layers
        if not 0 <= lo <= hi <= num_layers:
            raise InvalidArgument(
                f"pca_edits[{i}].layer_range: need 0 <= lo <= hi <= {num_layers}, "
                f"got ({edit.layer_lo}, {edit.layer_hi})")
    if session.explicit_w_plus is not None:
        arr = np.asarray(session.explicit_w_plus, dtype=np.float32)
        if arr.shape != (num_layers, d):
            raise InvalidArgument(
                f"explicit_w_plus: expected shape ({num_layers}, {d}), got {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise InvalidArgument("explicit_w_plus: contains non-finite values")


def resolve_session(session: EditSession, ckpt: GeneratorCheckpoint,
                    basis: PcaBasis | None,
                    archive: LatentArchive | None = None) -> tuple[np.ndarray, np.ndarray, NoiseBuffers]:
    """Apply the documented edit order and render.

    Returns (image, final latent stack, noise buffers).  Needs a PCA basis
    only when the session carries principal-direction edits.
    """
    num_layers = ckpt.num_layers

    if archive is not None:
        w_plus = archive.w_plus.copy()
        noise = archive.to_noise(ckpt)
    elif session.explicit_w_plus is not None:
        w_plus = np.asarray(session.explicit_w_plus, dtype=np.float32)
        noise = sample_noise(session.noise_seed, ckpt.arch)
    else:
        z = sample_z(session.latent_seed, ckpt.latent_dim)[0]
        w_plus = broadcast_w(map_latent(z, ckpt), num_layers)
        noise = sample_noise(session.noise_seed, ckpt.arch)

    w_mean = ckpt.require_w_mean()
    cutoff = session.truncation_cutoff if session.truncation_cutoff is not None else num_layers
    w_plus = truncate(w_plus, session.truncation, w_mean, cutoff)

    if session.style_mix is not None and session.style_mix.strength > 0:
        mix = session.style_mix
        style_z = sample_z(mix.mix_seed, ckpt.latent_dim)[0]
        style_stack = broadcast_w(map_latent(style_z, ckpt), num_layers)
        # the style source sees the same truncation as the identity path
        style_stack = truncate(style_stack, session.truncation, w_mean, cutoff)
        w_plus = style_mix(w_plus, style_stack,
                           StyleMixSpec(cutoff=mix.cutoff, strength=mix.strength,
                                        mix_seed=mix.mix_seed))

    if session.pca_edits:
        if basis is None:
            raise InvalidArgument("pca_edits: no principal-direction basis available for this model")
        edits = [
            PcaEdit(e.direction, e.weight,
                    None if e.layer_lo is None and e.layer_hi is None
                    else (e.layer_lo or 0, e.layer_hi if e.layer_hi is not None else num_layers))
            for e in session.pca_edits
        ]
        w_plus = apply_pca_edits(w_plus, basis, edits)

    image = synthesize(w_plus, noise, ckpt.gates, ckpt)
    return image, w_plus, noise
