"""Architecture and noise-gate configuration.

The synthesis network stacks one 4x4 layer plus two layers per resolution
from 8x8 up to the output, each layer consuming its own style vector, with
a final styled RGB projection.  That makes L = 2*(log2(res)-1) style slots
(16 at 512-res, 14 at 256, 10 at 64) and L-1 noise injection sites.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import InvalidArgument


def _is_pow2(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class NoiseSite:
    """One noise injection point: a named synthesis layer at a resolution."""

    name: str
    resolution: int
    style_index: int


@dataclass(frozen=True)
class ArchConfig:
    output_res: int = 512
    latent_dim: int = 512
    channel_base: int = 16384
    channel_max: int = 512
    mapping_layers: int = 8
    img_channels: int = 3
    # Nonzero so noise pathways are live from initialization; a zero init
    # would leave short training runs insensitive to noise entirely.
    noise_weight_init_std: float = 0.1

    def __post_init__(self) -> None:
        if not _is_pow2(self.output_res) or self.output_res < 8:
            raise InvalidArgument(f"output_res must be a power of two >= 8, got {self.output_res}")
        if self.latent_dim < 1:
            raise InvalidArgument("latent_dim must be positive")
        if self.mapping_layers < 1:
            raise InvalidArgument("mapping_layers must be positive")

    @property
    def resolutions(self) -> list[int]:
        """Synthesis resolutions 4, 8, ..., output_res."""
        return [2**k for k in range(2, int(math.log2(self.output_res)) + 1)]

    @property
    def num_layers(self) -> int:
        """Number of per-layer style inputs L."""
        return 2 * (int(math.log2(self.output_res)) - 1)

    def channels(self, res: int) -> int:
        return max(1, min(self.channel_base // res, self.channel_max))

    @property
    def noise_sites(self) -> list[NoiseSite]:
        """All injection sites in forward order.

        Style slot L-1 belongs to the RGB projection and carries no noise.
        """
        sites = [NoiseSite("b4.conv", 4, 0)]
        idx = 1
        for res in self.resolutions[1:]:
            sites.append(NoiseSite(f"b{res}.conv0", res, idx))
            sites.append(NoiseSite(f"b{res}.conv1", res, idx + 1))
            idx += 2
        return sites

    def to_dict(self) -> dict:
        return {
            "output_res": self.output_res,
            "latent_dim": self.latent_dim,
            "channel_base": self.channel_base,
            "channel_max": self.channel_max,
            "mapping_layers": self.mapping_layers,
            "img_channels": self.img_channels,
            "noise_weight_init_std": self.noise_weight_init_std,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ArchConfig":
        return cls(**d)


@dataclass(frozen=True)
class NoiseGateConfig:
    """Per-resolution on/off switch for noise injection.

    A gated-off resolution multiplies its noise contribution by a constant
    zero in the graph, during both training and inference; buffers are
    still allocated so checkpoints stay layout-compatible across gate
    configurations.
    """

    enabled_by_resolution: dict[int, bool] = field(default_factory=dict)

    def validate_for(self, arch: ArchConfig) -> "NoiseGateConfig":
        expected = set(arch.resolutions)
        got = set(self.enabled_by_resolution)
        if got != expected:
            raise InvalidArgument(
                f"gate config must cover resolutions {sorted(expected)} exactly, got {sorted(got)}"
            )
        return self

    def enabled(self, res: int) -> bool:
        if res not in self.enabled_by_resolution:
            raise InvalidArgument(f"gate config has no entry for resolution {res}")
        return self.enabled_by_resolution[res]

    @classmethod
    def all_on(cls, arch: ArchConfig) -> "NoiseGateConfig":
        return cls({r: True for r in arch.resolutions})

    @classmethod
    def all_off(cls, arch: ArchConfig) -> "NoiseGateConfig":
        return cls({r: False for r in arch.resolutions})

    @classmethod
    def coarse_suppressed(cls, arch: ArchConfig, max_off_res: int = 32) -> "NoiseGateConfig":
        """Gates off at and below ``max_off_res``, on above (the default
        production configuration)."""
        return cls({r: r > max_off_res for r in arch.resolutions})

    @classmethod
    def parse(cls, spec: str, arch: ArchConfig) -> "NoiseGateConfig":
        """Parse a gate spec string.

        Accepted forms: ``all-on``, ``all-off``, ``off:LO-HI`` (noise off for
        resolutions LO..HI inclusive, on elsewhere), ``on:LO-HI``.
        """
        spec = spec.strip().lower()
        if spec in ("all-on", "on"):
            return cls.all_on(arch)
        if spec in ("all-off", "off", "none"):
            return cls.all_off(arch)
        for prefix, off_inside in (("off:", True), ("on:", False)):
            if spec.startswith(prefix):
                body = spec[len(prefix):]
                try:
                    lo_s, hi_s = body.split("-")
                    lo, hi = int(lo_s), int(hi_s)
                except ValueError as exc:
                    raise InvalidArgument(f"bad gate range {body!r} (expected LO-HI)") from exc
                inside = {r: lo <= r <= hi for r in arch.resolutions}
                return cls({r: (not v if off_inside else v) for r, v in inside.items()})
        raise InvalidArgument(f"unrecognized gate spec {spec!r}")

    def to_spec(self) -> str:
        """Compact round-trippable description, e.g. ``off:4-32``."""
        off = sorted(r for r, on in self.enabled_by_resolution.items() if not on)
        if not off:
            return "all-on"
        if len(off) == len(self.enabled_by_resolution):
            return "all-off"
        contiguous = all(b == 2 * a for a, b in zip(off, off[1:]))
        if contiguous:
            return f"off:{off[0]}-{off[-1]}"
        return ",".join(f"{r}={'on' if on else 'off'}" for r, on in sorted(self.enabled_by_resolution.items()))

    def to_dict(self) -> dict:
        return {str(r): bool(v) for r, v in sorted(self.enabled_by_resolution.items())}

    @classmethod
    def from_dict(cls, d: dict) -> "NoiseGateConfig":
        return cls({int(r): bool(v) for r, v in d.items()})
