import json
from pathlib import Path

import numpy as np
import pytest
from click.testing import CliRunner
from PIL import Image

from cardgan.cli import main
from cardgan.data.processing import from_unit_range


@pytest.fixture(scope="module")
def workspace(tmp_path_factory, tiny_ckpt):
    root = tmp_path_factory.mktemp("cli")
    ckpt_path = root / "toy.ckpt"
    tiny_ckpt.save(ckpt_path, include_discriminator=False)
    img_dir = root / "images"
    img_dir.mkdir()
    rng = np.random.default_rng(0)
    for i in range(8):
        arr = rng.uniform(-1, 1, size=(16, 16, 3)).astype(np.float32)
        Image.fromarray(from_unit_range(arr)).save(img_dir / f"img{i:02d}.png")
    return root, ckpt_path, img_dir


def test_eval_fid(workspace):
    root, ckpt_path, img_dir = workspace
    result = CliRunner().invoke(main, [
        "eval", "fid", "--ckpt", str(ckpt_path), "--ref", str(img_dir), "--n", "8"])
    assert result.exit_code == 0, result.output
    assert "fid" in result.output


def test_eval_noise_sensitivity(workspace):
    root, ckpt_path, _ = workspace
    result = CliRunner().invoke(main, [
        "eval", "noise-sensitivity", "--ckpt", str(ckpt_path), "--n", "8"])
    assert result.exit_code == 0, result.output
    payload = json.loads(result.output)
    assert payload["noise_sensitivity_fid"] >= 0


def test_eval_ablation(workspace, tmp_path):
    root, ckpt_path, img_dir = workspace
    spec = {
        "ref": str(img_dir),
        "rows": [
            {"label": "gated const", "ckpt": str(ckpt_path), "gates": "off:4-8",
             "noise_mode": "constant-per-run", "n_samples": 8},
            {"label": "gated random", "ckpt": str(ckpt_path), "gates": "off:4-8",
             "noise_mode": "random-per-latent", "n_samples": 8},
        ],
    }
    spec_file = tmp_path / "spec.json"
    spec_file.write_text(json.dumps(spec))
    result = CliRunner().invoke(main, ["eval", "ablation", "--spec", str(spec_file)])
    assert result.exit_code == 0, result.output
    assert "Configuration" in result.output
    assert "gated const" in result.output


def test_latent_pca_and_mix_grid(workspace, tmp_path):
    root, ckpt_path, _ = workspace
    basis_file = tmp_path / "toy.basis"
    result = CliRunner().invoke(main, [
        "latent", "pca", "--ckpt", str(ckpt_path), "--n", "64", "--out", str(basis_file)])
    assert result.exit_code == 0, result.output
    assert basis_file.exists()

    grid_file = tmp_path / "grid.png"
    result = CliRunner().invoke(main, [
        "latent", "mix-grid", "--ckpt", str(ckpt_path), "--coarse", "1,2",
        "--fine", "3,4,5", "--cutoff", "3", "--out", str(grid_file)])
    assert result.exit_code == 0, result.output
    with Image.open(grid_file) as img:
        assert img.size == (3 * 16, 2 * 16)


def test_latent_project(workspace, tmp_path):
    root, ckpt_path, _ = workspace
    from cardgan.models import GeneratorCheckpoint, generate

    ckpt = GeneratorCheckpoint.load(ckpt_path)
    target, _, _ = generate(4, 5, 1.0, ckpt)
    target_file = tmp_path / "target.png"
    Image.fromarray(from_unit_range(target)).save(target_file)
    out = tmp_path / "proj.latent"
    result = CliRunner().invoke(main, [
        "latent", "project", "--ckpt", str(ckpt_path), "--image", str(target_file),
        "--steps", "20", "--out", str(out)])
    assert result.exit_code == 0, result.output
    assert out.exists()


def test_train_smoke(workspace, tmp_path):
    root, _, img_dir = workspace
    out_dir = tmp_path / "run"
    result = CliRunner().invoke(main, [
        "train", "--data", str(img_dir), "--res", "16", "--gates", "off:4-8",
        "--batch", "4", "--total-kimg", "1", "--out", str(out_dir), "--seed", "1",
        "--latent-dim", "16", "--channel-base", "256", "--channel-max", "8",
        "--mapping-layers", "2"])
    assert result.exit_code == 0, result.output
    assert (out_dir / "final.ckpt").exists()
    assert (out_dir / "metrics.jsonl").exists()


def test_data_pipeline_commands(tmp_path):
    mirror = tmp_path / "mirror"
    mirror.mkdir()
    rng = np.random.default_rng(1)
    entries = []
    for i in range(4):
        name = f"c{i}.png"
        arr = rng.integers(0, 255, size=(96, 96, 3), dtype=np.uint8)
        Image.fromarray(arr).save(mirror / name)
        entries.append({"id": f"c{i}", "image": name, "tags": ["monster"]})
    (mirror / "catalog.json").write_text(json.dumps({"entries": entries}))

    workdir = tmp_path / "work"
    runner = CliRunner()
    result = runner.invoke(main, ["data", "fetch", "--api", str(mirror), "--out", str(workdir)])
    assert result.exit_code == 0, result.output

    result = runner.invoke(main, ["data", "crop", "--workdir", str(workdir),
                                  "--box", "16,16,80,80", "--res", "32"])
    assert result.exit_code == 0, result.output

    prune_file = tmp_path / "prune.json"
    prune_file.write_text(json.dumps({"c0": "test"}))
    result = runner.invoke(main, ["data", "prune", "--workdir", str(workdir),
                                  "--prune-file", str(prune_file)])
    assert result.exit_code == 0, result.output

    report = tmp_path / "selection.json"
    result = runner.invoke(main, ["data", "select", "--workdir", str(workdir),
                                  "--keep", "1.0", "--out", str(report)])
    assert result.exit_code == 0, result.output
    assert json.loads(report.read_text())["drop_candidates"] == []

    packed = tmp_path / "packed.dat"
    result = runner.invoke(main, ["data", "pack", "--workdir", str(workdir),
                                  "--out", str(packed), "--seed", "2"])
    assert result.exit_code == 0, result.output
    from cardgan.data import PackedDataset

    assert len(PackedDataset(packed)) == 3  # one pruned


def test_serve_help():
    result = CliRunner().invoke(main, ["serve", "--help"])
    assert result.exit_code == 0
