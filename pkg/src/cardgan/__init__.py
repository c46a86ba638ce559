"""Card-art GAN with per-resolution noise gating.

Subpackages:
    models       mapping/synthesis/discriminator networks and latent operations
    training     adversarial training loop (non-saturating loss, R1, ADA, EMA)
    evaluation   FID with pluggable feature extractors, gate ablation and
                 noise-regime experiments
    latent_tools latent PCA, image projection, style-mix grids
    data         dataset fetching, cropping/resampling, pruning, packing
    service      HTTP inference service

Seed semantics are documented in :mod:`cardgan.rng`.
"""

__version__ = "0.1.0"
