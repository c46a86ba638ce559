"""Evaluation runners: gate-configuration ablation and the two-noise-regime
sensitivity experiment.

``noise_sensitivity`` renders the same latents twice, once with a single
noise realization shared by every latent and once with fresh noise per
latent, and reports the FID between the two image sets.  A network whose
gates are all off produces bit-identical sets, hence an exact zero.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigError, InvalidArgument
from ..models.checkpoint import GeneratorCheckpoint
from ..models.noise import sample_noise
from ..models.ops import generate_batch, noise_for_latents
from ..config import NoiseGateConfig
from ..rng import rng_from_seed
from .features import DEFAULT_EXTRACTOR, extract_features
from .fid import FeatureStats, fit_stats, frechet_distance

NOISE_MODES = ("constant-per-run", "random-per-latent")


@dataclass(frozen=True)
class AblationRow:
    label: str
    gates: NoiseGateConfig
    noise_mode: str
    n_samples: int

    def __post_init__(self) -> None:
        if self.noise_mode not in NOISE_MODES:
            raise InvalidArgument(f"noise_mode must be one of {NOISE_MODES}, got {self.noise_mode!r}")
        if self.n_samples < 2:
            raise InvalidArgument(f"n_samples must be >= 2, got {self.n_samples}")


@dataclass(frozen=True)
class AblationSpec:
    rows: tuple[AblationRow, ...]

    def __post_init__(self) -> None:
        labels = [r.label for r in self.rows]
        if len(set(labels)) != len(labels):
            raise ConfigError(f"ablation labels must be unique, got {labels}")


@dataclass
class AblationResult:
    entries: list[dict] = field(default_factory=list)
    extractor_id: str = DEFAULT_EXTRACTOR

    def to_json(self) -> str:
        return json.dumps({"extractor": self.extractor_id, "rows": self.entries}, indent=2)

    def to_text_table(self) -> str:
        width = max([len("Configuration")] + [len(e["label"]) for e in self.entries])
        lines = [f"| {'Configuration'.ljust(width)} | {'FID':>10} |"]
        lines.append(f"|{'-' * (width + 2)}|{'-' * 12}|")
        for e in self.entries:
            lines.append(f"| {e['label'].ljust(width)} | {e['fid']:>10.4f} |")
        return "\n".join(lines)


def _latent_seeds(seed: int, n: int) -> list[int]:
    rng = rng_from_seed(seed)
    return [int(s) for s in rng.integers(0, 2**63 - 1, size=n)]


def _render_set(ckpt: GeneratorCheckpoint, n: int, noise_mode: str, seed: int,
                noise_seed: int, psi: float, batch_size: int) -> np.ndarray:
    seeds = _latent_seeds(seed, n)
    if noise_mode == "constant-per-run":
        noise = sample_noise(noise_seed, ckpt.arch)
    else:
        noise = noise_for_latents(noise_seed, n, ckpt)
    return generate_batch(seeds, noise, psi, ckpt, batch_size=batch_size)


def run_ablation(ckpt_set: dict[str, GeneratorCheckpoint], spec: AblationSpec,
                 ref_stats: FeatureStats, extractor_id: str = DEFAULT_EXTRACTOR,
                 seed: int = 0, psi: float = 1.0, batch_size: int = 16) -> AblationResult:
    """One FID per spec row, each against the same reference statistics."""
    result = AblationResult(extractor_id=extractor_id)
    for row in spec.rows:
        if row.label not in ckpt_set:
            raise ConfigError(f"no checkpoint supplied for ablation row {row.label!r}")
        ckpt = ckpt_set[row.label]
        if ckpt.gates.enabled_by_resolution != row.gates.enabled_by_resolution:
            raise ConfigError(
                f"row {row.label!r}: checkpoint was trained with gates "
                f"{ckpt.gates.to_spec()!r}, spec asks for {row.gates.to_spec()!r}"
            )
        images = _render_set(ckpt, row.n_samples, row.noise_mode, seed=seed,
                             noise_seed=seed + 1, psi=psi, batch_size=batch_size)
        stats = fit_stats(extract_features(images, extractor_id))
        fid = frechet_distance(stats, ref_stats)
        result.entries.append({
            "label": row.label,
            "fid": fid,
            "noise_mode": row.noise_mode,
            "n_samples": row.n_samples,
            "gates": row.gates.to_spec(),
        })
    return result


def noise_sensitivity(ckpt: GeneratorCheckpoint, n_latents: int, seed_a: int, seed_b: int,
                      extractor_id: str = DEFAULT_EXTRACTOR, latent_seed: int = 0,
                      psi: float = 1.0, batch_size: int = 16) -> float:
    """FID between constant-noise and per-latent-noise renders of one latent set.

    Set A shares the single noise realization drawn from ``seed_a`` across
    all latents; set B draws fresh noise per latent from ``seed_b``.  The
    latents themselves are identical in both sets.
    """
    if n_latents < 2:
        raise InvalidArgument(f"n_latents must be >= 2, got {n_latents}")
    seeds = _latent_seeds(latent_seed, n_latents)
    const_noise = sample_noise(seed_a, ckpt.arch)
    per_latent = noise_for_latents(seed_b, n_latents, ckpt)
    set_a = generate_batch(seeds, const_noise, psi, ckpt, batch_size=batch_size)
    set_b = generate_batch(seeds, per_latent, psi, ckpt, batch_size=batch_size)
    stats_a = fit_stats(extract_features(set_a, extractor_id))
    stats_b = fit_stats(extract_features(set_b, extractor_id))
    return frechet_distance(stats_a, stats_b)
