"""Latent archives: self-describing latent + noise bundles.

An archive carries everything needed to re-render an image on a
compatible model: the resolved per-layer latent stack, the noise buffers
for gated-on sites (gated-off sites contribute exactly zero, so they are
reconstructed as zeros on load), the gate configuration, and provenance
(the originating edit-session JSON, when known).
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..config import NoiseGateConfig
from ..container import read_container_bytes, write_container_bytes
from ..errors import InvalidArgument
from ..models.checkpoint import GeneratorCheckpoint
from ..models.noise import NoiseBuffers

ARCHIVE_KIND = "latent-archive"
ARCHIVE_FORMAT_VERSION = 1


@dataclass
class LatentArchive:
    model_id: str
    output_res: int
    latent_dim: int
    num_layers: int
    gate_config: NoiseGateConfig
    w_plus: np.ndarray
    noise_seed: int
    noise_buffers: dict[str, np.ndarray] = field(default_factory=dict)  # gated-on sites
    provenance: dict | None = None
    format_version: int = ARCHIVE_FORMAT_VERSION

    @classmethod
    def from_render(cls, model_id: str, ckpt: GeneratorCheckpoint, w_plus: np.ndarray,
                    noise: NoiseBuffers, provenance: dict | None = None) -> "LatentArchive":
        buffers = {
            site.name: noise.buffers[site.name]
            for site in ckpt.arch.noise_sites
            if ckpt.gates.enabled(site.resolution)
        }
        return cls(
            model_id=model_id,
            output_res=ckpt.arch.output_res,
            latent_dim=ckpt.latent_dim,
            num_layers=ckpt.num_layers,
            gate_config=ckpt.gates,
            w_plus=np.asarray(w_plus, dtype=np.float32),
            noise_seed=noise.seed,
            noise_buffers=buffers,
            provenance=provenance,
        )

    def to_bytes(self) -> bytes:
        meta = {
            "format_version": self.format_version,
            "model_id": self.model_id,
            "output_res": self.output_res,
            "latent_dim": self.latent_dim,
            "num_layers": self.num_layers,
            "gate_config": self.gate_config.to_dict(),
            "noise_seed": self.noise_seed,
            "provenance": self.provenance,
        }
        tensors = {"w_plus": self.w_plus}
        for name, buf in self.noise_buffers.items():
            tensors[f"noise.{name}"] = buf
        return write_container_bytes(ARCHIVE_KIND, meta, tensors)

    @property
    def archive_id(self) -> str:
        return hashlib.sha256(self.to_bytes()).hexdigest()

    @classmethod
    def from_bytes(cls, blob: bytes) -> "LatentArchive":
        c = read_container_bytes(blob)
        if c.kind != ARCHIVE_KIND:
            raise InvalidArgument(f"not a latent archive: kind {c.kind!r}")
        meta = c.meta
        noise_buffers = {
            name.removeprefix("noise."): arr
            for name, arr in c.tensors.items() if name.startswith("noise.")
        }
        return cls(
            model_id=str(meta["model_id"]),
            output_res=int(meta["output_res"]),
            latent_dim=int(meta["latent_dim"]),
            num_layers=int(meta["num_layers"]),
            gate_config=NoiseGateConfig.from_dict(meta["gate_config"]),
            w_plus=c.tensor("w_plus"),
            noise_seed=int(meta["noise_seed"]),
            noise_buffers=noise_buffers,
            provenance=meta.get("provenance"),
        )

    def validate_against(self, ckpt: GeneratorCheckpoint) -> None:
        """Raise InvalidArgument naming the mismatch if the archive cannot be
        rendered on the given model."""
        problems = []
        if self.output_res != ckpt.arch.output_res:
            problems.append(f"resolution {self.output_res} != {ckpt.arch.output_res}")
        if self.latent_dim != ckpt.latent_dim:
            problems.append(f"latent dimension {self.latent_dim} != {ckpt.latent_dim}")
        if self.num_layers != ckpt.num_layers:
            problems.append(f"layer count {self.num_layers} != {ckpt.num_layers}")
        if not problems and self.gate_config.enabled_by_resolution != ckpt.gates.enabled_by_resolution:
            problems.append(
                f"gate config {self.gate_config.to_spec()} != {ckpt.gates.to_spec()}")
        if problems:
            raise InvalidArgument(
                f"archive from model {self.model_id!r} is incompatible: " + "; ".join(problems))
        if self.w_plus.shape != (ckpt.num_layers, ckpt.latent_dim):
            raise InvalidArgument(f"archive w_plus has shape {self.w_plus.shape}")

    def to_noise(self, ckpt: GeneratorCheckpoint) -> NoiseBuffers:
        """Full buffer set: stored gated-on sites plus zeros at gated-off
        sites (which the gates multiply away regardless)."""
        buffers = {}
        for site in ckpt.arch.noise_sites:
            if site.name in self.noise_buffers:
                buffers[site.name] = self.noise_buffers[site.name]
            else:
                buffers[site.name] = np.zeros((site.resolution, site.resolution), dtype=np.float32)
        return NoiseBuffers(seed=self.noise_seed, buffers=buffers)


class ArchiveStore:
    """Content-addressed archive files under one directory."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def put_bytes(self, blob: bytes) -> str:
        archive_id = hashlib.sha256(blob).hexdigest()
        path = self.root / f"{archive_id}.latent"
        if not path.exists():
            path.write_bytes(blob)
        return archive_id

    def put(self, archive: LatentArchive) -> str:
        return self.put_bytes(archive.to_bytes())

    def get_bytes(self, archive_id: str) -> bytes | None:
        path = self.root / f"{archive_id}.latent"
        return path.read_bytes() if path.exists() else None

    def get(self, archive_id: str) -> LatentArchive | None:
        blob = self.get_bytes(archive_id)
        return None if blob is None else LatentArchive.from_bytes(blob)
