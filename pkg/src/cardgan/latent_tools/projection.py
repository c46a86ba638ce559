"""Optimization-based image inversion.

Recovers a per-layer latent stack (and optionally the gated-on noise
buffers) that reproduces a target image, by minimizing a weighted sum of
feature-space distance and pixel MSE under Adam with ramped learning
rate.  Gated-off noise buffers are never free variables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import torch

from ..errors import InvalidArgument, NumericFailure
from ..evaluation.features import DEFAULT_EXTRACTOR, extract_features_torch
from ..models.checkpoint import GeneratorCheckpoint
from ..models.latents import broadcast_w, validate_image
from ..models.noise import NoiseBuffers, sample_noise
from ..models.ops import synthesize


@dataclass(frozen=True)
class ProjectionOptions:
    steps: int = 400
    lr: float = 0.1
    lr_rampup_frac: float = 0.05
    lr_rampdown_frac: float = 0.25
    feature_weight: float = 1.0
    pixel_weight: float = 0.1
    extractor_id: str = DEFAULT_EXTRACTOR
    # fine (gated-on) noise buffers are free variables by default; gated-off
    # buffers are never optimized
    optimize_noise: bool = True
    noise_seed: int = 0
    divergence_factor: float = 10.0
    divergence_patience: int = 100

    def __post_init__(self) -> None:
        if self.steps < 0:
            raise InvalidArgument(f"steps must be non-negative, got {self.steps}")
        if self.lr <= 0:
            raise InvalidArgument(f"lr must be positive, got {self.lr}")


@dataclass
class ProjectionResult:
    w_plus: np.ndarray
    noise: NoiseBuffers
    loss_trace: list[tuple[int, float]] = field(default_factory=list)
    final_image: np.ndarray | None = None


def _lr_at(step: int, opts: ProjectionOptions) -> float:
    t = step / max(opts.steps, 1)
    ramp = min(1.0, (1.0 - t) / max(opts.lr_rampdown_frac, 1e-8))
    ramp = 0.5 - 0.5 * math.cos(ramp * math.pi)
    ramp = ramp * min(1.0, t / max(opts.lr_rampup_frac, 1e-8))
    return opts.lr * ramp


def project(target: np.ndarray, ckpt: GeneratorCheckpoint,
            opts: ProjectionOptions | None = None) -> ProjectionResult:
    """Invert ``target`` under the checkpoint's gates; returns best iterate."""
    opts = opts or ProjectionOptions()
    target = validate_image(target, ckpt.arch.output_res)
    target_t = torch.from_numpy(target).permute(2, 0, 1).unsqueeze(0)
    with torch.no_grad():
        target_feat = extract_features_torch(target_t, opts.extractor_id)

    w_init = broadcast_w(ckpt.require_w_mean(), ckpt.num_layers)
    w_opt = torch.from_numpy(w_init.copy()).unsqueeze(0).requires_grad_(True)

    noise = sample_noise(opts.noise_seed, ckpt.arch)
    noise_t = {k: torch.from_numpy(v.copy()) for k, v in noise.buffers.items()}
    trainable_noise = []
    if opts.optimize_noise:
        for site in ckpt.arch.noise_sites:
            if ckpt.gates.enabled(site.resolution):
                noise_t[site.name].requires_grad_(True)
                trainable_noise.append(noise_t[site.name])

    optimizer = torch.optim.Adam([w_opt] + trainable_noise, lr=opts.lr, betas=(0.9, 0.999))

    def compute_loss() -> torch.Tensor:
        img = ckpt.synthesis(w_opt, noise_t, ckpt.gates).clamp(-1, 1)
        feat = extract_features_torch(img, opts.extractor_id)
        loss = opts.feature_weight * (feat - target_feat).square().mean()
        loss = loss + opts.pixel_weight * (img - target_t).square().mean()
        return loss

    trace: list[tuple[int, float]] = []
    with torch.no_grad():
        initial = float(compute_loss())
    trace.append((0, initial))

    best_loss = initial
    best_w = w_opt.detach().clone()
    best_noise = {k: v.detach().clone() for k, v in noise_t.items()}
    over_budget = 0

    for step in range(1, opts.steps + 1):
        lr = _lr_at(step - 1, opts)
        for group in optimizer.param_groups:
            group["lr"] = lr
        optimizer.zero_grad(set_to_none=True)
        loss = compute_loss()
        if not torch.isfinite(loss):
            raise NumericFailure(f"projection loss became non-finite at step {step}")
        loss.backward()
        optimizer.step()
        value = float(loss.detach())
        trace.append((step, value))
        if value < best_loss:
            best_loss = value
            best_w = w_opt.detach().clone()
            best_noise = {k: v.detach().clone() for k, v in noise_t.items()}
        if value > opts.divergence_factor * initial:
            over_budget += 1
            if over_budget >= opts.divergence_patience:
                raise NumericFailure(
                    f"projection diverged: loss above {opts.divergence_factor}x the initial "
                    f"value for {opts.divergence_patience} consecutive steps"
                )
        else:
            over_budget = 0

    result_noise = NoiseBuffers(
        seed=opts.noise_seed,
        buffers={k: v.numpy().astype(np.float32) for k, v in best_noise.items()},
    )
    w_best = best_w[0].numpy().astype(np.float32)
    final = synthesize(w_best, result_noise, ckpt.gates, ckpt)
    return ProjectionResult(w_plus=w_best, noise=result_noise, loss_trace=trace,
                            final_image=final)
