import math

import numpy as np
import pytest
import torch

from cardgan.errors import NumericFailure
from cardgan.training import d_loss, g_loss, r1_penalty


def test_g_loss_closed_form():
    assert g_loss(torch.tensor([0.0])).item() == pytest.approx(math.log(2), abs=1e-6)


def test_g_loss_asymptote():
    assert g_loss(torch.tensor([40.0])).item() == pytest.approx(0.0, abs=1e-6)


def test_g_loss_mean_invariance():
    assert g_loss(torch.tensor([0.0, 0.0])).item() == pytest.approx(
        g_loss(torch.tensor([0.0])).item(), abs=1e-7)


def test_g_loss_rejects_nan():
    with pytest.raises(NumericFailure):
        g_loss(torch.tensor([float("nan")]))


def test_d_loss_closed_form():
    value = d_loss(torch.tensor([0.0]), torch.tensor([0.0])).item()
    assert value == pytest.approx(2 * math.log(2), abs=1e-6)


def test_d_loss_asymptote():
    value = d_loss(torch.tensor([40.0]), torch.tensor([-40.0])).item()
    assert value == pytest.approx(0.0, abs=1e-6)


def test_d_loss_negation_swaps_terms():
    real = torch.tensor([0.3, -1.2])
    fake = torch.tensor([0.8, 0.1])
    assert d_loss(real, fake).item() == pytest.approx(d_loss(-fake, -real).item(), abs=1e-6)


# -- R1 ----------------------------------------------------------------------

def test_r1_zero_for_constant_discriminator():
    const = lambda x: torch.zeros(x.shape[0]) + 3.0 * x.sum() * 0  # noqa: E731
    batch = torch.randn(4, 3, 8, 8)
    assert r1_penalty(const, batch, gamma=10.0).item() == pytest.approx(0.0, abs=1e-9)


def test_r1_linear_discriminator_analytic():
    """D(x) = <a, x> has gradient a everywhere: penalty = (gamma/2) ||a||^2."""
    torch.manual_seed(0)
    a = torch.randn(3, 8, 8)

    def linear_d(x):
        return (x * a).sum(dim=(1, 2, 3))

    batch = torch.randn(5, 3, 8, 8)
    gamma = 10.0
    expected = 0.5 * gamma * float(a.square().sum())
    assert r1_penalty(linear_d, batch, gamma).item() == pytest.approx(expected, abs=1e-6 * expected)


def test_r1_matches_finite_differences():
    """Central finite differences on a tiny random discriminator."""
    torch.manual_seed(1)
    net = torch.nn.Sequential(
        torch.nn.Conv2d(3, 4, 3, padding=1), torch.nn.Tanh(),
        torch.nn.Flatten(), torch.nn.Linear(4 * 4 * 4, 1),
    ).double()

    def d(x):
        return net(x).squeeze(1)

    batch = torch.randn(2, 3, 4, 4, dtype=torch.float64) * 0.5
    gamma = 10.0
    analytic = r1_penalty(d, batch, gamma).item()

    eps = 1e-5
    grad_sq_sum = 0.0
    with torch.no_grad():
        flat = batch.reshape(2, -1)
        for b in range(flat.shape[0]):
            for i in range(flat.shape[1]):
                plus = flat.clone()
                minus = flat.clone()
                plus[b, i] += eps
                minus[b, i] -= eps
                f_plus = d(plus.reshape(batch.shape))[b].item()
                f_minus = d(minus.reshape(batch.shape))[b].item()
                grad_sq_sum += ((f_plus - f_minus) / (2 * eps)) ** 2
    expected = 0.5 * gamma * grad_sq_sum / batch.shape[0]
    assert analytic == pytest.approx(expected, rel=1e-3)


def test_r1_non_negative_property():
    torch.manual_seed(2)
    net = torch.nn.Sequential(torch.nn.Flatten(), torch.nn.Linear(48, 1))

    def d(x):
        return net(x).squeeze(1)

    for seed in range(5):
        torch.manual_seed(seed)
        batch = torch.randn(3, 3, 4, 4)
        assert r1_penalty(d, batch).item() >= 0.0
