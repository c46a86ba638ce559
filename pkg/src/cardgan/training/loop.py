"""Adversarial training loop.

Alternating discriminator/generator updates with the non-saturating
logistic loss, lazy R1 regularization, adaptive discriminator
augmentation, cosine learning-rate decay, and an EMA copy of the
generator for inference.  Single logical writer over model state;
determinism is guaranteed single-device for a fixed seed.
"""

from __future__ import annotations

import copy
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import torch

from ..config import ArchConfig, NoiseGateConfig
from ..errors import InvalidArgument, NumericFailure
from ..models.checkpoint import GeneratorCheckpoint
from ..models.networks import Discriminator, MappingNetwork, SynthesisNetwork
from ..rng import rng_from_seed
from .ada import AdaState, ada_update
from .augment import AugmentationPipelineConfig, apply_augmentations
from .losses import d_loss, g_loss, r1_penalty
from .schedule import lr_schedule

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class TrainConfig:
    batch_size: int = 96
    lr_initial: float = 2.5e-3
    lr_final: float = 2.5e-4
    lr_decay_start_images: int | None = None  # default: halfway point
    r1_gamma: float = 10.0
    r1_interval: int = 16
    ada_enabled: bool = True
    ada_target: float = 0.6
    ada_adjust_interval: int = 4        # steps between controller updates
    ada_speed_images: int = 500_000     # images for a full 0-to-1 sweep of p
    ema_halflife_kimg: float = 10.0
    total_images: int = 25_000_000
    snapshot_interval_images: int = 200_000
    path_length_reg: bool = False       # off by default; flag exists for ablations
    pl_weight: float = 2.0
    pl_interval: int = 16
    w_avg_samples: int = 10_000
    seed: int = 0
    augment: AugmentationPipelineConfig = field(default_factory=AugmentationPipelineConfig)

    def __post_init__(self) -> None:
        for name in ("batch_size", "lr_initial", "r1_gamma", "r1_interval",
                     "ada_adjust_interval", "ada_speed_images", "total_images",
                     "snapshot_interval_images"):
            if getattr(self, name) <= 0:
                raise InvalidArgument(f"{name} must be positive")
        if not 0.0 < self.ada_target < 1.0:
            raise InvalidArgument(f"ada_target must be in (0, 1), got {self.ada_target}")

    @property
    def decay_start_images(self) -> int:
        if self.lr_decay_start_images is not None:
            return self.lr_decay_start_images
        return self.total_images // 2

    @property
    def ema_beta(self) -> float:
        if self.ema_halflife_kimg <= 0:
            return 0.0
        return 0.5 ** (self.batch_size / (self.ema_halflife_kimg * 1000.0))


class Trainer:
    """Owns model state for one run; gate config is fixed for its lifetime."""

    def __init__(self, arch: ArchConfig, gates: NoiseGateConfig, images: np.ndarray,
                 cfg: TrainConfig, out_dir: str | Path | None = None):
        gates.validate_for(arch)
        images = np.asarray(images, dtype=np.float32)
        if images.ndim != 4 or images.shape[1:] != (arch.output_res, arch.output_res, arch.img_channels):
            raise InvalidArgument(
                f"training images must have shape (N, {arch.output_res}, {arch.output_res}, "
                f"{arch.img_channels}), got {images.shape}"
            )
        if len(images) < cfg.batch_size:
            raise InvalidArgument(f"dataset of {len(images)} images is smaller than one batch")
        self.arch = arch
        self.gates = gates
        self.cfg = cfg
        self.images = images
        self.out_dir = Path(out_dir) if out_dir is not None else None
        if self.out_dir is not None:
            self.out_dir.mkdir(parents=True, exist_ok=True)

        torch.manual_seed(cfg.seed)
        self.mapping = MappingNetwork(arch.latent_dim, arch.mapping_layers)
        self.synthesis = SynthesisNetwork(arch)
        self.discriminator = Discriminator(arch)
        self.mapping_ema = copy.deepcopy(self.mapping)
        self.synthesis_ema = copy.deepcopy(self.synthesis)
        for p in list(self.mapping_ema.parameters()) + list(self.synthesis_ema.parameters()):
            p.requires_grad_(False)

        g_params = list(self.mapping.parameters()) + list(self.synthesis.parameters())
        self.opt_g = torch.optim.Adam(g_params, lr=cfg.lr_initial, betas=(0.0, 0.99), eps=1e-8)
        self.opt_d = torch.optim.Adam(self.discriminator.parameters(), lr=cfg.lr_initial,
                                      betas=(0.0, 0.99), eps=1e-8)
        self.rng = rng_from_seed(cfg.seed)
        self.ada_state = AdaState()
        self.step_count = 0
        self.pl_mean = 0.0
        self._last_real_scores: np.ndarray | None = None
        self._metrics_file = None
        if self.out_dir is not None:
            self._metrics_file = (self.out_dir / "metrics.jsonl").open("a")

    # -- internals ---------------------------------------------------------

    @property
    def images_seen(self) -> int:
        return self.step_count * self.cfg.batch_size

    def _sample_real(self) -> torch.Tensor:
        idx = self.rng.integers(0, len(self.images), size=self.cfg.batch_size)
        batch = self.images[idx]
        return torch.from_numpy(batch).permute(0, 3, 1, 2).contiguous()

    def _sample_noise_batch(self, b: int) -> dict[str, torch.Tensor]:
        return {
            s.name: torch.from_numpy(
                self.rng.standard_normal((b, 1, s.resolution, s.resolution), dtype=np.float32)
            )
            for s in self.arch.noise_sites
        }

    def _forward_g(self, b: int) -> tuple[torch.Tensor, torch.Tensor]:
        z = torch.from_numpy(self.rng.standard_normal((b, self.arch.latent_dim), dtype=np.float32))
        w = self.mapping(z)
        w_plus = w.unsqueeze(1).expand(-1, self.arch.num_layers, -1)
        noise = self._sample_noise_batch(b)
        return self.synthesis(w_plus, noise, self.gates), w_plus

    def _augment(self, batch: torch.Tensor) -> torch.Tensor:
        if not self.cfg.ada_enabled:
            return batch
        seed = int(self.rng.integers(0, 2**63 - 1))
        return apply_augmentations(batch, self.ada_state.p, self.cfg.augment, seed)

    def _check_finite(self, value: torch.Tensor, what: str) -> torch.Tensor:
        if not torch.isfinite(value).all():
            snap = None
            if self.out_dir is not None:
                snap = self.out_dir / "diagnostic.ckpt"
                self.snapshot(snap)
            raise NumericFailure(
                f"{what} became non-finite at step {self.step_count}"
                + (f"; diagnostic snapshot at {snap}" if snap else "")
            )
        return value

    # -- public API --------------------------------------------------------

    def train_step(self, real_batch: torch.Tensor | None = None) -> dict[str, float]:
        """One alternating D/G update; returns scalar metrics."""
        cfg = self.cfg
        lr = lr_schedule(self.step_count, cfg)
        for opt in (self.opt_d, self.opt_g):
            for group in opt.param_groups:
                group["lr"] = lr

        real = real_batch if real_batch is not None else self._sample_real()
        if real.shape[0] != cfg.batch_size:
            raise InvalidArgument(f"real batch size {real.shape[0]} != configured {cfg.batch_size}")

        # discriminator phase
        with torch.no_grad():
            fake, _ = self._forward_g(cfg.batch_size)
        real_aug = self._augment(real)
        fake_aug = self._augment(fake)
        real_scores = self.discriminator(real_aug)
        fake_scores = self.discriminator(fake_aug)
        loss_d = d_loss(real_scores, fake_scores)
        r1_value = 0.0
        if self.step_count % cfg.r1_interval == 0:
            # lazy regularization: scale by the interval to keep the
            # effective strength of the penalty unchanged
            r1 = r1_penalty(self.discriminator, real_aug, cfg.r1_gamma)
            r1_value = float(r1.detach())
            loss_d = loss_d + r1 * cfg.r1_interval
        self._check_finite(loss_d, "discriminator loss")
        self.opt_d.zero_grad(set_to_none=True)
        loss_d.backward()
        self.opt_d.step()
        self._last_real_scores = real_scores.detach().numpy()

        # generator phase
        fake, w_plus = self._forward_g(cfg.batch_size)
        gen_scores = self.discriminator(self._augment(fake))
        loss_g = g_loss(gen_scores)
        if cfg.path_length_reg and self.step_count % cfg.pl_interval == 0:
            loss_g = loss_g + self._path_length_penalty(fake, w_plus) * cfg.pl_interval
        self._check_finite(loss_g, "generator loss")
        self.opt_g.zero_grad(set_to_none=True)
        loss_g.backward()
        self.opt_g.step()

        # EMA generator
        beta = cfg.ema_beta
        with torch.no_grad():
            for ema, live in ((self.mapping_ema, self.mapping), (self.synthesis_ema, self.synthesis)):
                for p_ema, p in zip(ema.parameters(), live.parameters()):
                    p_ema.lerp_(p, 1.0 - beta)
                for b_ema, b in zip(ema.buffers(), live.buffers()):
                    b_ema.copy_(b)

        self.step_count += 1

        # augmentation controller
        if cfg.ada_enabled and self.step_count % cfg.ada_adjust_interval == 0:
            self.ada_state = ada_update(
                self.ada_state, self._last_real_scores, cfg.ada_target,
                images_seen=cfg.ada_adjust_interval * cfg.batch_size,
                speed_images=cfg.ada_speed_images,
            )

        metrics = {
            "step": self.step_count,
            "images": self.images_seen,
            "loss_d": float(loss_d.detach()),
            "loss_g": float(loss_g.detach()),
            "r1": r1_value,
            "ada_p": self.ada_state.p,
            "ada_rt": self.ada_state.rt_estimate,
            "lr": lr,
        }
        if self._metrics_file is not None:
            self._metrics_file.write(json.dumps(metrics) + "\n")
            self._metrics_file.flush()
        return metrics

    def _path_length_penalty(self, fake: torch.Tensor, w_plus: torch.Tensor) -> torch.Tensor:
        pl_noise = torch.randn_like(fake) / fake.shape[-1]
        (grads,) = torch.autograd.grad(
            outputs=(fake * pl_noise).sum(), inputs=w_plus, create_graph=True
        )
        lengths = grads.square().sum(dim=2).mean(dim=1).sqrt()
        self.pl_mean += 0.01 * (float(lengths.mean().detach()) - self.pl_mean)
        return ((lengths - self.pl_mean) ** 2).mean() * self.cfg.pl_weight

    def train(self, num_steps: int, snapshot: bool = True) -> list[dict[str, float]]:
        history = []
        next_snap = self.images_seen + self.cfg.snapshot_interval_images
        for _ in range(num_steps):
            history.append(self.train_step())
            if snapshot and self.out_dir is not None and self.images_seen >= next_snap:
                self.snapshot(self.out_dir / f"snapshot-{self.images_seen:09d}.ckpt")
                next_snap += self.cfg.snapshot_interval_images
        if snapshot and self.out_dir is not None:
            self.snapshot(self.out_dir / "final.ckpt")
        return history

    def checkpoint(self, include_discriminator: bool = True) -> GeneratorCheckpoint:
        """EMA generator + current discriminator as a checkpoint object."""
        ckpt = GeneratorCheckpoint(
            arch=self.arch, gates=self.gates,
            mapping=copy.deepcopy(self.mapping_ema),
            synthesis=copy.deepcopy(self.synthesis_ema),
            discriminator=copy.deepcopy(self.discriminator) if include_discriminator else None,
            ema_decay=self.cfg.ema_beta,
        )
        ckpt.mapping.eval()
        ckpt.synthesis.eval()
        if ckpt.discriminator is not None:
            ckpt.discriminator.eval()
        ckpt.estimate_w_mean(self.cfg.w_avg_samples, seed=self.cfg.seed)
        return ckpt

    def snapshot(self, path: str | Path) -> Path:
        return self.checkpoint().save(path)

    def close(self) -> None:
        if self._metrics_file is not None:
            self._metrics_file.close()
            self._metrics_file = None
