"""Generator checkpoint: parameters + architecture + gates + latent stats.

Serialized with the named-tensor container (see :mod:`cardgan.container`):
the manifest carries the architecture, gate configuration, EMA decay and
format version; the payload carries every parameter tensor plus the mean
latent ``w_mean``.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
import torch

from ..config import ArchConfig, NoiseGateConfig
from ..container import Container, read_container, read_container_bytes, write_container, write_container_bytes
from ..errors import InvalidArgument
from ..rng import rng_from_seed
from .networks import Discriminator, MappingNetwork, SynthesisNetwork

CHECKPOINT_KIND = "generator-checkpoint"
FORMAT_VERSION = 1


@dataclass
class GeneratorCheckpoint:
    arch: ArchConfig
    gates: NoiseGateConfig
    mapping: MappingNetwork
    synthesis: SynthesisNetwork
    discriminator: Discriminator | None = None
    w_mean: np.ndarray | None = None
    ema_decay: float = 0.0
    format_version: int = FORMAT_VERSION

    @property
    def latent_dim(self) -> int:
        return self.arch.latent_dim

    @property
    def num_layers(self) -> int:
        return self.arch.num_layers

    def with_gates(self, gates: NoiseGateConfig) -> "GeneratorCheckpoint":
        """Same parameters under a different gate configuration."""
        gates.validate_for(self.arch)
        return GeneratorCheckpoint(
            arch=self.arch, gates=gates, mapping=self.mapping, synthesis=self.synthesis,
            discriminator=self.discriminator, w_mean=self.w_mean,
            ema_decay=self.ema_decay, format_version=self.format_version,
        )

    def estimate_w_mean(self, n_samples: int = 10_000, seed: int = 0) -> np.ndarray:
        """Mean mapped latent over fresh input latents; cached on the checkpoint."""
        rng = rng_from_seed(seed)
        z = rng.standard_normal((n_samples, self.arch.latent_dim), dtype=np.float32)
        with torch.no_grad():
            w = self.mapping(torch.from_numpy(z))
        self.w_mean = w.mean(dim=0).numpy().astype(np.float32)
        return self.w_mean

    def require_w_mean(self) -> np.ndarray:
        if self.w_mean is None:
            self.estimate_w_mean()
        return self.w_mean

    def _tensors(self, include_discriminator: bool = True) -> dict[str, np.ndarray]:
        tensors: dict[str, np.ndarray] = {}
        for prefix, module in (("mapping", self.mapping), ("synthesis", self.synthesis)):
            for name, t in module.state_dict().items():
                tensors[f"{prefix}.{name}"] = t.numpy()
        if include_discriminator and self.discriminator is not None:
            for name, t in self.discriminator.state_dict().items():
                tensors[f"disc.{name}"] = t.numpy()
        tensors["w_mean"] = self.require_w_mean()
        return tensors

    def _meta(self) -> dict:
        return {
            "format_version": self.format_version,
            "arch_config": self.arch.to_dict(),
            "gate_config": self.gates.to_dict(),
            "ema_decay": self.ema_decay,
        }

    def save(self, path: str | Path, include_discriminator: bool = True) -> Path:
        return write_container(path, CHECKPOINT_KIND, self._meta(),
                               self._tensors(include_discriminator))

    def to_bytes(self, include_discriminator: bool = True) -> bytes:
        return write_container_bytes(CHECKPOINT_KIND, self._meta(),
                                     self._tensors(include_discriminator))

    @classmethod
    def _from_container(cls, c: Container) -> "GeneratorCheckpoint":
        if c.kind != CHECKPOINT_KIND:
            raise InvalidArgument(f"not a generator checkpoint: kind {c.kind!r}")
        arch = ArchConfig.from_dict(c.meta["arch_config"])
        gates = NoiseGateConfig.from_dict(c.meta["gate_config"]).validate_for(arch)
        mapping = MappingNetwork(arch.latent_dim, arch.mapping_layers)
        synthesis = SynthesisNetwork(arch)
        groups: dict[str, dict[str, torch.Tensor]] = {"mapping": {}, "synthesis": {}, "disc": {}}
        for name, arr in c.tensors.items():
            if name == "w_mean":
                continue
            prefix, _, rest = name.partition(".")
            if prefix not in groups:
                raise InvalidArgument(f"unexpected tensor {name!r} in checkpoint")
            groups[prefix][rest] = torch.from_numpy(arr)
        mapping.load_state_dict(groups["mapping"])
        synthesis.load_state_dict(groups["synthesis"])
        discriminator = None
        if groups["disc"]:
            discriminator = Discriminator(arch)
            discriminator.load_state_dict(groups["disc"])
        ckpt = cls(
            arch=arch, gates=gates, mapping=mapping, synthesis=synthesis,
            discriminator=discriminator,
            w_mean=c.tensors.get("w_mean"),
            ema_decay=float(c.meta.get("ema_decay", 0.0)),
            format_version=int(c.meta["format_version"]),
        )
        ckpt.mapping.eval()
        ckpt.synthesis.eval()
        if ckpt.discriminator is not None:
            ckpt.discriminator.eval()
        return ckpt

    @classmethod
    def load(cls, path: str | Path) -> "GeneratorCheckpoint":
        return cls._from_container(read_container(path))

    @classmethod
    def from_bytes(cls, blob: bytes) -> "GeneratorCheckpoint":
        return cls._from_container(read_container_bytes(blob))


def new_checkpoint(arch: ArchConfig, gates: NoiseGateConfig | None = None,
                   seed: int = 0, with_discriminator: bool = False) -> GeneratorCheckpoint:
    """Freshly initialized checkpoint (random weights) for the given seed."""
    gates = gates if gates is not None else NoiseGateConfig.coarse_suppressed(arch)
    gates.validate_for(arch)
    torch.manual_seed(seed)
    mapping = MappingNetwork(arch.latent_dim, arch.mapping_layers)
    synthesis = SynthesisNetwork(arch)
    disc = Discriminator(arch) if with_discriminator else None
    ckpt = GeneratorCheckpoint(arch=arch, gates=gates, mapping=mapping,
                               synthesis=synthesis, discriminator=disc)
    ckpt.mapping.eval()
    ckpt.synthesis.eval()
    return ckpt
