"""Command-line interface.

Subcommand groups: ``train``, ``eval`` (fid / ablation / noise-sensitivity),
``latent`` (pca / project / mix-grid), ``data`` (fetch / crop / sr / prune /
select / pack), and ``serve``.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click
import numpy as np

from .config import ArchConfig, NoiseGateConfig


def _load_images_arg(data: str, res: int | None = None) -> np.ndarray:
    """A packed dataset file or a directory of PNG/JPEG images."""
    from .data.packing import PackedDataset, load_image

    path = Path(data)
    if path.is_file():
        return PackedDataset(path).images
    files = sorted(p for p in path.iterdir() if p.suffix.lower() in (".png", ".jpg", ".jpeg"))
    if not files:
        raise click.ClickException(f"no images found in {data}")
    images = np.stack([load_image(p) for p in files])
    if res is not None and images.shape[1] != res:
        raise click.ClickException(f"images are {images.shape[1]}-res, expected {res}")
    return images


@click.group()
def main() -> None:
    """Card-art GAN tooling: training, evaluation, latent editing, data prep,
    and the inference service."""


# -- train ---------------------------------------------------------------------


@main.command()
@click.option("--data", required=True, help="packed dataset file or directory of images")
@click.option("--res", type=int, required=True, help="output resolution (power of two)")
@click.option("--gates", "gates_spec", default="off:4-32", show_default=True,
              help="noise gate spec, e.g. off:4-32 | all-on | all-off")
@click.option("--batch", type=int, default=16, show_default=True)
@click.option("--total-kimg", type=int, default=200, show_default=True,
              help="training length in thousands of images")
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--latent-dim", type=int, default=512, show_default=True)
@click.option("--channel-base", type=int, default=16384, show_default=True)
@click.option("--channel-max", type=int, default=512, show_default=True)
@click.option("--mapping-layers", type=int, default=8, show_default=True)
@click.option("--lr", type=float, default=2.5e-3, show_default=True)
@click.option("--r1-gamma", type=float, default=10.0, show_default=True)
@click.option("--ada/--no-ada", default=True, show_default=True)
@click.option("--snapshot-kimg", type=int, default=50, show_default=True)
def train(data, res, gates_spec, batch, total_kimg, out_dir, seed, latent_dim,
          channel_base, channel_max, mapping_layers, lr, r1_gamma, ada, snapshot_kimg):
    """Adversarial training; emits periodic checkpoints and a JSONL metric log."""
    from .training import TrainConfig, Trainer

    arch = ArchConfig(output_res=res, latent_dim=latent_dim, channel_base=channel_base,
                      channel_max=channel_max, mapping_layers=mapping_layers)
    gates = NoiseGateConfig.parse(gates_spec, arch)
    images = _load_images_arg(data, res)
    cfg = TrainConfig(batch_size=batch, lr_initial=lr, lr_final=lr / 10,
                      r1_gamma=r1_gamma, ada_enabled=ada,
                      total_images=total_kimg * 1000,
                      snapshot_interval_images=snapshot_kimg * 1000, seed=seed)
    trainer = Trainer(arch, gates, images, cfg, out_dir=out_dir)
    steps = max(1, cfg.total_images // cfg.batch_size)
    click.echo(f"training {steps} steps ({total_kimg} kimg) with gates {gates.to_spec()}")
    try:
        for i in range(steps):
            metrics = trainer.train_step()
            if i % 50 == 0:
                click.echo(
                    f"step {metrics['step']:6d}  loss_d {metrics['loss_d']:.4f}  "
                    f"loss_g {metrics['loss_g']:.4f}  p {metrics['ada_p']:.3f}  "
                    f"lr {metrics['lr']:.2e}")
            if trainer.images_seen % cfg.snapshot_interval_images < cfg.batch_size:
                trainer.snapshot(Path(out_dir) / f"snapshot-{trainer.images_seen:09d}.ckpt")
        final = trainer.snapshot(Path(out_dir) / "final.ckpt")
        click.echo(f"final checkpoint: {final}")
    finally:
        trainer.close()


# -- eval ---------------------------------------------------------------------


@main.group(name="eval")
def eval_group() -> None:
    """FID evaluation and the gate experiments."""


def _ref_stats(ref: str, extractor: str, n: int | None):
    from .data.packing import load_image
    from .evaluation import extract_features, fit_stats, load_stats

    path = Path(ref)
    if path.is_file() and path.suffix != ".png":
        stats, stats_extractor = load_stats(path)
        if stats_extractor != extractor:
            raise click.ClickException(
                f"reference stats use extractor {stats_extractor!r}, requested {extractor!r}")
        return stats
    files = sorted(p for p in path.iterdir() if p.suffix.lower() in (".png", ".jpg", ".jpeg"))
    if n is not None:
        files = files[:n]
    images = np.stack([load_image(p) for p in files])
    return fit_stats(extract_features(images, extractor))


@eval_group.command()
@click.option("--ckpt", required=True, type=click.Path(exists=True))
@click.option("--ref", required=True, help="image directory or saved stats file")
@click.option("--n", type=int, default=2000, show_default=True)
@click.option("--extractor", default="random-projection", show_default=True)
@click.option("--noise-mode", type=click.Choice(["random-per-latent", "constant-per-run"]),
              default="random-per-latent", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--json-out", type=click.Path(), default=None)
def fid(ckpt, ref, n, extractor, noise_mode, seed, json_out):
    """FID of n generated samples against a reference set."""
    from .evaluation import extract_features, fit_stats, frechet_distance
    from .evaluation.experiments import _render_set
    from .models import GeneratorCheckpoint

    checkpoint = GeneratorCheckpoint.load(ckpt)
    ref_stats = _ref_stats(ref, extractor, None)
    images = _render_set(checkpoint, n, noise_mode, seed=seed, noise_seed=seed + 1,
                         psi=1.0, batch_size=16)
    stats = fit_stats(extract_features(images, extractor))
    value = frechet_distance(stats, ref_stats)
    payload = {"fid": value, "n": n, "extractor": extractor, "noise_mode": noise_mode}
    click.echo(json.dumps(payload, indent=2))
    if json_out:
        Path(json_out).write_text(json.dumps(payload, indent=2))


@eval_group.command()
@click.option("--spec", "spec_file", required=True, type=click.Path(exists=True),
              help="JSON: {rows: [{label, ckpt, gates, noise_mode, n_samples}], "
                   "ref, extractor?, seed?}")
def ablation(spec_file):
    """Run the gate-configuration ablation table."""
    from .evaluation import AblationRow, AblationSpec, run_ablation
    from .models import GeneratorCheckpoint

    payload = json.loads(Path(spec_file).read_text())
    extractor = payload.get("extractor", "random-projection")
    seed = payload.get("seed", 0)
    ckpts, rows = {}, []
    for row in payload["rows"]:
        ckpt = GeneratorCheckpoint.load(row["ckpt"])
        ckpts[row["label"]] = ckpt
        rows.append(AblationRow(
            label=row["label"],
            gates=NoiseGateConfig.parse(row["gates"], ckpt.arch),
            noise_mode=row["noise_mode"],
            n_samples=int(row["n_samples"]),
        ))
    ref = _ref_stats(payload["ref"], extractor, None)
    result = run_ablation(ckpts, AblationSpec(rows=tuple(rows)), ref,
                          extractor_id=extractor, seed=seed)
    click.echo(result.to_text_table())
    click.echo(result.to_json())


@eval_group.command(name="noise-sensitivity")
@click.option("--ckpt", required=True, type=click.Path(exists=True))
@click.option("--n", type=int, default=2000, show_default=True)
@click.option("--seed-a", type=int, default=1, show_default=True)
@click.option("--seed-b", type=int, default=2, show_default=True)
@click.option("--extractor", default="random-projection", show_default=True)
def noise_sensitivity_cmd(ckpt, n, seed_a, seed_b, extractor):
    """FID between constant-noise and per-latent-noise renders of one latent set."""
    from .evaluation import noise_sensitivity
    from .models import GeneratorCheckpoint

    checkpoint = GeneratorCheckpoint.load(ckpt)
    value = noise_sensitivity(checkpoint, n, seed_a, seed_b, extractor_id=extractor)
    click.echo(json.dumps({"noise_sensitivity_fid": value, "n": n,
                           "extractor": extractor}, indent=2))


# -- latent ---------------------------------------------------------------------


@main.group()
def latent() -> None:
    """Latent-space tooling: PCA bases, projection, style-mix grids."""


@latent.command()
@click.option("--ckpt", required=True, type=click.Path(exists=True))
@click.option("--n", type=int, default=4096, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", required=True, type=click.Path())
def pca(ckpt, n, seed, out):
    """Fit the principal-direction basis of the mapped latent space."""
    from .latent_tools import compute_pca_basis
    from .models import GeneratorCheckpoint

    checkpoint = GeneratorCheckpoint.load(ckpt)
    basis = compute_pca_basis(checkpoint, n_samples=n, seed=seed)
    basis.save(out, meta={"n_samples": n, "seed": seed})
    click.echo(f"saved basis with {basis.k} directions to {out}")


@latent.command(name="project")
@click.option("--ckpt", required=True, type=click.Path(exists=True))
@click.option("--image", "image_file", required=True, type=click.Path(exists=True))
@click.option("--steps", type=int, default=400, show_default=True)
@click.option("--out", required=True, type=click.Path(), help="latent archive output")
def project_cmd(ckpt, image_file, steps, out):
    """Invert an image into a latent archive."""
    from .data.packing import load_image
    from .latent_tools import ProjectionOptions, project
    from .models import GeneratorCheckpoint
    from .service.archives import LatentArchive

    checkpoint = GeneratorCheckpoint.load(ckpt)
    target = load_image(image_file)
    result = project(target, checkpoint, ProjectionOptions(steps=steps))
    archive = LatentArchive.from_render(Path(ckpt).stem, checkpoint, result.w_plus,
                                        result.noise,
                                        provenance={"projection": {"image": str(image_file),
                                                                   "steps": steps}})
    Path(out).write_bytes(archive.to_bytes())
    click.echo(f"final loss {result.loss_trace[-1][1]:.6f}; archive at {out}")


@latent.command(name="mix-grid")
@click.option("--ckpt", required=True, type=click.Path(exists=True))
@click.option("--coarse", required=True, help="comma-separated latent seeds (identity)")
@click.option("--fine", required=True, help="comma-separated latent seeds (style)")
@click.option("--cutoff", type=int, required=True)
@click.option("--noise-seed", type=int, default=0, show_default=True)
@click.option("--out", required=True, type=click.Path(), help="output PNG of the tiled grid")
def mix_grid_cmd(ckpt, coarse, fine, cutoff, noise_seed, out):
    """Render a style-mixing grid from two seed lists."""
    from PIL import Image as PILImage

    from .latent_tools import mix_grid
    from .models import GeneratorCheckpoint, broadcast_w, map_latent
    from .models.ops import sample_z
    from .service.app import encode_png

    checkpoint = GeneratorCheckpoint.load(ckpt)

    def stacks(seed_list):
        return [
            broadcast_w(map_latent(sample_z(int(s), checkpoint.latent_dim)[0], checkpoint),
                        checkpoint.num_layers)
            for s in seed_list.split(",")
        ]

    grid = mix_grid(stacks(coarse), stacks(fine), cutoff, checkpoint, noise_seed=noise_seed)
    rows, cols, res = grid.shape[0], grid.shape[1], grid.shape[2]
    tiled = grid.transpose(0, 2, 1, 3, 4).reshape(rows * res, cols * res, 3)
    Path(out).write_bytes(encode_png(tiled))
    click.echo(f"wrote {rows}x{cols} grid to {out}")


# -- data ---------------------------------------------------------------------


@main.group()
def data() -> None:
    """Dataset preparation pipeline."""


@data.command()
@click.option("--api", "api_base_uri", required=True,
              help="catalog API base URL or local mirror directory")
@click.option("--out", "out_dir", required=True, type=click.Path())
def fetch(api_base_uri, out_dir):
    """Fetch the card catalog and images (idempotent, resumable)."""
    from .data import fetch_catalog

    manifest = fetch_catalog(api_base_uri, out_dir)
    ok = sum(e.status == "ok" for e in manifest.entries.values())
    click.echo(f"{ok}/{len(manifest.entries)} entries fetched into {out_dir}")


@data.command()
@click.option("--workdir", required=True, type=click.Path(exists=True),
              help="directory produced by `data fetch`")
@click.option("--box", default="40,40,360,360", show_default=True,
              help="art crop box: left,top,right,bottom")
@click.option("--res", type=int, default=256, show_default=True)
def crop(workdir, box, res):
    """Crop the art region of every fetched image and resample."""
    from PIL import Image as PILImage

    from .data import DatasetManifest, crop_and_resample
    from .data.processing import from_unit_range

    workdir = Path(workdir)
    manifest = DatasetManifest.load(workdir / "manifest.json")
    crop_box = tuple(int(v) for v in box.split(","))
    processed = workdir / "processed"
    processed.mkdir(exist_ok=True)
    done = 0
    for entry in manifest.kept_entries():
        img = np.asarray(PILImage.open(workdir / "raw" / entry.filename).convert("RGB"))
        out = crop_and_resample(img, crop_box, res)
        PILImage.fromarray(from_unit_range(out)).save(processed / f"{entry.id}.png")
        entry.crop_box = crop_box
        done += 1
    manifest.resolution = res
    manifest.save(workdir / "manifest.json")
    click.echo(f"processed {done} images at {res}-res")


@data.command()
@click.option("--workdir", required=True, type=click.Path(exists=True))
@click.option("--backend", default="bicubic", show_default=True)
@click.option("--res", type=int, default=512, show_default=True,
              help="final resolution after 2x SR + downsample")
def sr(workdir, backend, res):
    """2x super-resolve processed images, then downsample to the target."""
    from PIL import Image as PILImage

    from .data import DatasetManifest, resample_bicubic, super_resolve_2x
    from .data.packing import load_image
    from .data.processing import from_unit_range

    workdir = Path(workdir)
    manifest = DatasetManifest.load(workdir / "manifest.json")
    out_dir = workdir / f"processed-{res}"
    out_dir.mkdir(exist_ok=True)
    for entry in manifest.kept_entries():
        img = load_image(workdir / "processed" / f"{entry.id}.png")
        up = super_resolve_2x(img, backend)
        final = np.clip(resample_bicubic(up, res), -1, 1).astype(np.float32)
        PILImage.fromarray(from_unit_range(final)).save(out_dir / f"{entry.id}.png")
    click.echo(f"super-resolved {len(manifest.kept_entries())} images to {res}-res")


@data.command()
@click.option("--workdir", required=True, type=click.Path(exists=True))
@click.option("--prune-file", required=True, type=click.Path(exists=True))
def prune(workdir, prune_file):
    """Mark manifest entries listed in a prune file."""
    from .data import DatasetManifest, apply_prune_list

    workdir = Path(workdir)
    manifest = DatasetManifest.load(workdir / "manifest.json")
    apply_prune_list(manifest, prune_file)
    manifest.save(workdir / "manifest.json")
    click.echo(f"{len(manifest.kept_entries())} entries kept")


@data.command()
@click.option("--workdir", required=True, type=click.Path(exists=True))
@click.option("--keep", type=float, default=0.95, show_default=True)
@click.option("--extractor", default="random-projection", show_default=True)
@click.option("--out", "report_file", required=True, type=click.Path())
@click.option("--apply", "apply_drop", is_flag=True,
              help="also mark dropped entries as pruned (advisory by default)")
def select(workdir, keep, extractor, report_file, apply_drop):
    """Score entries by embedding density; report sparse-region candidates."""
    from .data import DatasetManifest, instance_selection_scores
    from .data.packing import load_image
    from .evaluation import extract_features

    workdir = Path(workdir)
    manifest = DatasetManifest.load(workdir / "manifest.json")
    kept = manifest.kept_entries()
    images = np.stack([load_image(workdir / "processed" / f"{e.id}.png") for e in kept])
    embeddings = extract_features(images, extractor)
    scores, keep_ids, drop_ids = instance_selection_scores(
        embeddings, keep, ids=[e.id for e in kept], embedding_id=extractor)
    report = {
        "embedding": extractor, "keep_fraction": keep,
        "scores": {s.id: s.density_score for s in scores},
        "drop_candidates": drop_ids,
    }
    Path(report_file).write_text(json.dumps(report, indent=2, sort_keys=True))
    if apply_drop:
        for entry_id in drop_ids:
            manifest.entries[entry_id].pruned = True
            manifest.entries[entry_id].prune_reason = f"instance-selection ({extractor})"
        manifest.save(workdir / "manifest.json")
    click.echo(f"{len(drop_ids)} drop candidates ({'applied' if apply_drop else 'advisory'})")


@data.command()
@click.option("--workdir", required=True, type=click.Path(exists=True))
@click.option("--out", "out_file", required=True, type=click.Path())
@click.option("--seed", type=int, default=0, show_default=True)
def pack(workdir, out_file, seed):
    """Pack kept processed images into a single dataset file."""
    from .data import DatasetManifest, pack_dataset

    workdir = Path(workdir)
    manifest = DatasetManifest.load(workdir / "manifest.json")
    path = pack_dataset(manifest, workdir / "processed", out_file, seed=seed)
    click.echo(f"packed {len(manifest.kept_entries())} images into {path}")


# -- serve ---------------------------------------------------------------------


@main.command()
@click.option("--config", "config_file", type=click.Path(exists=True), default=None)
@click.option("--host", default=None)
@click.option("--port", type=int, default=None)
def serve(config_file, host, port):
    """Run the HTTP inference service."""
    import uvicorn

    from .service import ServiceConfig, create_app

    cfg = ServiceConfig.load(config_file)
    if host:
        cfg.host = host
    if port:
        cfg.port = port
    uvicorn.run(create_app(cfg), host=cfg.host, port=cfg.port)


if __name__ == "__main__":
    sys.exit(main())
