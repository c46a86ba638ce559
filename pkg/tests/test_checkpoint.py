import numpy as np
import pytest

from cardgan.config import NoiseGateConfig
from cardgan.errors import InvalidArgument
from cardgan.models import GeneratorCheckpoint, generate, new_checkpoint, sample_noise, synthesize

from conftest import random_w_plus


def test_save_load_round_trip(tmp_path, tiny_ckpt, tiny_arch):
    path = tiny_ckpt.save(tmp_path / "toy.ckpt")
    loaded = GeneratorCheckpoint.load(path)
    assert loaded.arch == tiny_arch
    assert loaded.gates == tiny_ckpt.gates
    np.testing.assert_array_equal(loaded.w_mean, tiny_ckpt.w_mean)
    img_orig, _, _ = generate(1, 2, 0.9, tiny_ckpt)
    img_loaded, _, _ = generate(1, 2, 0.9, loaded)
    np.testing.assert_array_equal(img_orig, img_loaded)


def test_discriminator_round_trip(tmp_path, tiny_arch, tiny_gates):
    ckpt = new_checkpoint(tiny_arch, tiny_gates, seed=11, with_discriminator=True)
    ckpt.estimate_w_mean(200, seed=0)
    loaded = GeneratorCheckpoint.load(ckpt.save(tmp_path / "d.ckpt"))
    assert loaded.discriminator is not None
    loaded_no_d = GeneratorCheckpoint.load(
        ckpt.save(tmp_path / "nod.ckpt", include_discriminator=False))
    assert loaded_no_d.discriminator is None


def test_with_gates_keeps_params(tiny_ckpt, tiny_arch):
    all_off = tiny_ckpt.with_gates(NoiseGateConfig.all_off(tiny_arch))
    w = random_w_plus(tiny_arch, seed=8)
    a = synthesize(w, sample_noise(1, tiny_arch), all_off.gates, all_off)
    b = synthesize(w, sample_noise(2, tiny_arch), all_off.gates, all_off)
    np.testing.assert_array_equal(a, b)


def test_gate_config_mismatch_rejected(tiny_ckpt):
    with pytest.raises(InvalidArgument):
        tiny_ckpt.with_gates(NoiseGateConfig({4: True}))


def test_w_mean_estimation_deterministic(tiny_arch, tiny_gates):
    a = new_checkpoint(tiny_arch, tiny_gates, seed=4).estimate_w_mean(300, seed=1)
    b = new_checkpoint(tiny_arch, tiny_gates, seed=4).estimate_w_mean(300, seed=1)
    np.testing.assert_array_equal(a, b)


def test_checkpoint_bytes_deterministic(tiny_ckpt):
    assert tiny_ckpt.to_bytes() == tiny_ckpt.to_bytes()
