from .networks import Discriminator, MappingNetwork, SynthesisNetwork
from .checkpoint import GeneratorCheckpoint, new_checkpoint
from .latents import broadcast_w, style_mix, truncate, StyleMixSpec, validate_image
from .noise import NoiseBuffers, sample_noise
from .ops import discriminate, generate, map_latent, map_latents, synthesize, synthesize_batch

__all__ = [
    "Discriminator",
    "GeneratorCheckpoint",
    "MappingNetwork",
    "NoiseBuffers",
    "StyleMixSpec",
    "SynthesisNetwork",
    "broadcast_w",
    "discriminate",
    "generate",
    "map_latent",
    "map_latents",
    "new_checkpoint",
    "sample_noise",
    "style_mix",
    "synthesize",
    "synthesize_batch",
    "truncate",
    "validate_image",
]
