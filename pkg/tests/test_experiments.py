import json

import numpy as np
import pytest

from cardgan.config import NoiseGateConfig
from cardgan.errors import ConfigError, InvalidArgument
from cardgan.evaluation import (
    AblationRow,
    AblationSpec,
    extract_features,
    fit_stats,
    frechet_distance,
    noise_sensitivity,
    run_ablation,
)
from cardgan.evaluation.experiments import _render_set


def test_all_gates_off_sensitivity_exact_zero(tiny_ckpt, tiny_arch):
    ckpt = tiny_ckpt.with_gates(NoiseGateConfig.all_off(tiny_arch))
    fid = noise_sensitivity(ckpt, n_latents=8, seed_a=1, seed_b=2)
    assert fid == 0.0


def test_gated_lower_than_all_on(tiny_ckpt, tiny_arch):
    gated = noise_sensitivity(tiny_ckpt, n_latents=24, seed_a=1, seed_b=2)
    all_on = noise_sensitivity(tiny_ckpt.with_gates(NoiseGateConfig.all_on(tiny_arch)),
                               n_latents=24, seed_a=1, seed_b=2)
    assert gated < all_on


def test_n_latents_contract(tiny_ckpt):
    with pytest.raises(InvalidArgument):
        noise_sensitivity(tiny_ckpt, n_latents=1, seed_a=1, seed_b=2)


def test_duplicate_labels_rejected(tiny_arch):
    gates = NoiseGateConfig.all_on(tiny_arch)
    row = AblationRow("same", gates, "constant-per-run", 4)
    with pytest.raises(ConfigError):
        AblationSpec(rows=(row, AblationRow("same", gates, "random-per-latent", 4)))


def test_bad_noise_mode_rejected(tiny_arch):
    with pytest.raises(InvalidArgument):
        AblationRow("x", NoiseGateConfig.all_on(tiny_arch), "sometimes", 4)


def test_ablation_self_reference_fid_near_zero(tiny_ckpt):
    """Evaluating against stats of the identical sample set scores ~0."""
    images = _render_set(tiny_ckpt, 16, "random-per-latent", seed=0, noise_seed=1,
                         psi=1.0, batch_size=8)
    ref = fit_stats(extract_features(images, "random-projection"))
    spec = AblationSpec(rows=(
        AblationRow("self", tiny_ckpt.gates, "random-per-latent", 16),
    ))
    result = run_ablation({"self": tiny_ckpt}, spec, ref, seed=0)
    assert result.entries[0]["fid"] == pytest.approx(0.0, abs=1e-6)


def test_ablation_missing_checkpoint(tiny_ckpt):
    spec = AblationSpec(rows=(AblationRow("a", tiny_ckpt.gates, "constant-per-run", 4),))
    with pytest.raises(ConfigError):
        run_ablation({}, spec, None)


def test_ablation_gate_mismatch(tiny_ckpt, tiny_arch):
    spec = AblationSpec(rows=(
        AblationRow("a", NoiseGateConfig.all_on(tiny_arch), "constant-per-run", 4),
    ))
    ref = fit_stats(np.random.default_rng(0).standard_normal((8, 4)))
    with pytest.raises(ConfigError, match="gates"):
        run_ablation({"a": tiny_ckpt}, spec, ref)


def test_fid_invariant_to_sample_order(tiny_ckpt):
    images = _render_set(tiny_ckpt, 12, "random-per-latent", seed=3, noise_seed=4,
                         psi=1.0, batch_size=8)
    ref = fit_stats(extract_features(images[::-1].copy(), "random-projection"))
    stats = fit_stats(extract_features(images, "random-projection"))
    assert frechet_distance(stats, ref) == pytest.approx(0.0, abs=1e-8)


def test_ablation_outputs_table_and_json(tiny_ckpt):
    images = _render_set(tiny_ckpt, 8, "constant-per-run", seed=0, noise_seed=1,
                         psi=1.0, batch_size=8)
    ref = fit_stats(extract_features(images, "random-projection"))
    spec = AblationSpec(rows=(
        AblationRow("gated const", tiny_ckpt.gates, "constant-per-run", 8),
        AblationRow("gated random", tiny_ckpt.gates, "random-per-latent", 8),
    ))
    result = run_ablation({"gated const": tiny_ckpt, "gated random": tiny_ckpt}, spec, ref, seed=0)
    parsed = json.loads(result.to_json())
    assert [r["label"] for r in parsed["rows"]] == ["gated const", "gated random"]
    table = result.to_text_table()
    assert "Configuration" in table and "FID" in table
    assert "gated const" in table
