"""Adversarial losses: non-saturating logistic loss and R1 penalty."""

from __future__ import annotations

import torch
import torch.nn.functional as F

from ..errors import NumericFailure


def _check_finite(t: torch.Tensor, name: str) -> torch.Tensor:
    if not torch.isfinite(t).all():
        raise NumericFailure(f"{name} contains non-finite values")
    return t


def g_loss(fake_scores: torch.Tensor) -> torch.Tensor:
    """Non-saturating generator loss: mean softplus(-score)."""
    _check_finite(fake_scores, "fake scores")
    return F.softplus(-fake_scores).mean()


def d_loss(real_scores: torch.Tensor, fake_scores: torch.Tensor) -> torch.Tensor:
    """Logistic discriminator loss: mean softplus(-real) + mean softplus(fake)."""
    _check_finite(real_scores, "real scores")
    _check_finite(fake_scores, "fake scores")
    return F.softplus(-real_scores).mean() + F.softplus(fake_scores).mean()


def r1_penalty(discriminator, real_batch: torch.Tensor, gamma: float = 10.0) -> torch.Tensor:
    """(gamma/2) * E[ ||d D(x) / d x||^2 ] over the real batch.

    The returned tensor participates in the discriminator's autodiff graph
    (double backward), so it can be added to the loss directly.
    """
    real = real_batch.detach().requires_grad_(True)
    scores = discriminator(real)
    try:
        (grads,) = torch.autograd.grad(
            outputs=scores.sum(), inputs=real, create_graph=True
        )
    except RuntimeError as exc:
        raise NumericFailure(f"R1 gradient computation failed: {exc}") from exc
    _check_finite(grads, "R1 gradients")
    return 0.5 * gamma * grads.flatten(1).square().sum(dim=1).mean()
