import numpy as np
import pytest
import torch

from cardgan.config import ArchConfig, NoiseGateConfig
from cardgan.errors import InvalidArgument
from cardgan.models import (
    broadcast_w,
    discriminate,
    generate,
    map_latent,
    new_checkpoint,
    sample_noise,
    synthesize,
)
from cardgan.models.networks import MappingNetwork, normalize_z
from cardgan.models.ops import sample_z

from conftest import random_w_plus


# -- mapping ---------------------------------------------------------------

def test_map_latent_deterministic(tiny_ckpt):
    z = sample_z(9, tiny_ckpt.latent_dim)[0]
    np.testing.assert_array_equal(map_latent(z, tiny_ckpt), map_latent(z, tiny_ckpt))


def test_map_latent_identity_network():
    """Hand-computed forward pass: identity weights pass the normalized input
    through (positive entries are leaky-ReLU fixed points)."""
    arch = ArchConfig(output_res=16, latent_dim=4, channel_base=64, channel_max=8,
                      mapping_layers=1)
    ckpt = new_checkpoint(arch, NoiseGateConfig.all_on(arch), seed=0)
    with torch.no_grad():
        ckpt.mapping.layers[0].weight.copy_(torch.eye(4))
        ckpt.mapping.layers[0].bias.zero_()
    e1 = np.array([1.0, 0.0, 0.0, 0.0], dtype=np.float32)
    out = map_latent(e1, ckpt)
    # pre-normalization scales e1 to sqrt(D) = 2
    np.testing.assert_allclose(out, 2.0 * e1, rtol=1e-5)


def test_map_latent_dimension_mismatch(tiny_ckpt):
    with pytest.raises(InvalidArgument):
        map_latent(np.zeros(100, dtype=np.float32), tiny_ckpt)


def test_normalize_z_radius():
    z = torch.randn(5, 16)
    n = normalize_z(z)
    np.testing.assert_allclose(n.norm(dim=1).numpy(), np.full(5, 4.0), rtol=1e-4)


def test_mapping_rejects_bad_shape():
    net = MappingNetwork(8, 2)
    with pytest.raises(InvalidArgument):
        net(torch.zeros(3, 9))


# -- synthesis -------------------------------------------------------------

def test_gate_zero_property(tiny_ckpt, tiny_arch, tiny_gates):
    """Noise that differs only at gated-off sites cannot change a pixel."""
    w = random_w_plus(tiny_arch, seed=1)
    a = sample_noise(5, tiny_arch)
    b = a.copy()
    rng = np.random.default_rng(99)
    for site in tiny_arch.noise_sites:
        if not tiny_gates.enabled(site.resolution):
            b.buffers[site.name] = rng.standard_normal(
                (site.resolution, site.resolution)).astype(np.float32)
    img_a = synthesize(w, a, tiny_gates, tiny_ckpt)
    img_b = synthesize(w, b, tiny_gates, tiny_ckpt)
    np.testing.assert_array_equal(img_a, img_b)


def test_all_gates_off_ignores_noise(tiny_ckpt, tiny_arch):
    gates = NoiseGateConfig.all_off(tiny_arch)
    w = random_w_plus(tiny_arch, seed=2)
    img_a = synthesize(w, sample_noise(1, tiny_arch), gates, tiny_ckpt)
    img_b = synthesize(w, sample_noise(2, tiny_arch), gates, tiny_ckpt)
    np.testing.assert_array_equal(img_a, img_b)


def test_all_gates_on_noise_changes_output(tiny_ckpt, tiny_arch):
    gates = NoiseGateConfig.all_on(tiny_arch)
    w = random_w_plus(tiny_arch, seed=3)
    img_a = synthesize(w, sample_noise(1, tiny_arch), gates, tiny_ckpt)
    img_b = synthesize(w, sample_noise(2, tiny_arch), gates, tiny_ckpt)
    assert not np.array_equal(img_a, img_b)


def test_synthesize_output_contract(tiny_ckpt, tiny_arch):
    img = synthesize(random_w_plus(tiny_arch), sample_noise(0, tiny_arch),
                     tiny_ckpt.gates, tiny_ckpt)
    assert img.shape == (16, 16, 3)
    assert img.dtype == np.float32
    assert img.min() >= -1.0 and img.max() <= 1.0


def test_synthesize_shape_mismatch(tiny_ckpt, tiny_arch):
    w = random_w_plus(tiny_arch)[:3]
    with pytest.raises(InvalidArgument):
        synthesize(w, sample_noise(0, tiny_arch), tiny_ckpt.gates, tiny_ckpt)


def test_synthesize_256_res_shape_contract():
    arch = ArchConfig(output_res=256, latent_dim=8, channel_base=1024, channel_max=4,
                      mapping_layers=1)
    assert arch.num_layers == 14
    ckpt = new_checkpoint(arch, NoiseGateConfig.coarse_suppressed(arch), seed=1)
    img = synthesize(random_w_plus(arch), sample_noise(0, arch), ckpt.gates, ckpt)
    assert img.shape == (256, 256, 3)
    assert img.min() >= -1.0 and img.max() <= 1.0


def test_fine_scale_locality(gate_ckpt, gate_arch):
    """Gated noise moves coarse structure far less than all-on noise.

    Both outputs are box-downsampled to 32x32; the gated mean absolute
    difference must sit well under the all-on one."""
    w = random_w_plus(gate_arch, seed=4, scale=0.5)
    gated = NoiseGateConfig.coarse_suppressed(gate_arch)
    all_on = NoiseGateConfig.all_on(gate_arch)

    def coarse_mad(gates):
        a = synthesize(w, sample_noise(11, gate_arch), gates, gate_ckpt)
        b = synthesize(w, sample_noise(12, gate_arch), gates, gate_ckpt)
        down_a = a.reshape(32, 2, 32, 2, 3).mean(axis=(1, 3))
        down_b = b.reshape(32, 2, 32, 2, 3).mean(axis=(1, 3))
        return np.abs(down_a - down_b).mean()

    mad_gated = coarse_mad(gated)
    mad_all_on = coarse_mad(all_on)
    assert mad_gated < 10.0 * mad_all_on
    assert mad_gated < mad_all_on  # directional: gates confine noise to fine detail


# -- generate ---------------------------------------------------------------

def test_generate_deterministic(tiny_ckpt):
    img1, wp1, nb1 = generate(10, 20, 0.7, tiny_ckpt)
    img2, wp2, nb2 = generate(10, 20, 0.7, tiny_ckpt)
    np.testing.assert_array_equal(img1, img2)
    np.testing.assert_array_equal(wp1, wp2)
    for name in nb1.buffers:
        np.testing.assert_array_equal(nb1.buffers[name], nb2.buffers[name])


def test_generate_psi_zero_ignores_latent_seed(tiny_ckpt):
    img_a, _, _ = generate(1, 5, 0.0, tiny_ckpt)
    img_b, _, _ = generate(2, 5, 0.0, tiny_ckpt)
    np.testing.assert_array_equal(img_a, img_b)


def test_generate_gated_noise_seed_prefers_fine_scales(gate_ckpt):
    """With coarse gates off, a noise-seed change leaves the box-averaged
    coarse image nearly untouched relative to the full-res change."""
    img_a, _, _ = generate(3, 100, 1.0, gate_ckpt)
    img_b, _, _ = generate(3, 200, 1.0, gate_ckpt)
    assert not np.array_equal(img_a, img_b)
    full_mad = np.abs(img_a - img_b).mean()
    down_a = img_a.reshape(16, 4, 16, 4, 3).mean(axis=(1, 3))
    down_b = img_b.reshape(16, 4, 16, 4, 3).mean(axis=(1, 3))
    coarse_mad = np.abs(down_a - down_b).mean()
    assert coarse_mad < full_mad


def test_generate_intermediates_reproduce_image(tiny_ckpt):
    img, w_plus, noise = generate(8, 9, 0.5, tiny_ckpt)
    np.testing.assert_array_equal(img, synthesize(w_plus, noise, tiny_ckpt.gates, tiny_ckpt))


# -- discriminator -----------------------------------------------------------

def test_discriminate_deterministic(tiny_ckpt, tiny_arch):
    disc = new_checkpoint(tiny_arch, tiny_ckpt.gates, seed=3, with_discriminator=True).discriminator
    img, _, _ = generate(0, 0, 1.0, tiny_ckpt)
    assert discriminate(img, disc) == discriminate(img, disc)


def test_discriminate_batch_shape(tiny_ckpt, tiny_arch):
    disc = new_checkpoint(tiny_arch, tiny_ckpt.gates, seed=3, with_discriminator=True).discriminator
    batch = np.stack([generate(i, 0, 1.0, tiny_ckpt)[0] for i in range(4)])
    scores = discriminate(batch, disc)
    assert scores.shape == (4,)


def test_discriminate_zero_image_finite(tiny_arch, tiny_gates):
    disc = new_checkpoint(tiny_arch, tiny_gates, seed=3, with_discriminator=True).discriminator
    score = discriminate(np.zeros((16, 16, 3), dtype=np.float32), disc)
    assert np.isfinite(score)


def test_discriminate_shape_mismatch(tiny_arch, tiny_gates):
    disc = new_checkpoint(tiny_arch, tiny_gates, seed=3, with_discriminator=True).discriminator
    with pytest.raises(InvalidArgument):
        discriminate(np.zeros((8, 8, 3), dtype=np.float32), disc)
