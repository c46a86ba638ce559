#!/usr/bin/env python3
"""Train matched toy networks under different noise-gate configurations.

Same dataset, same seeds, three gate layouts: coarse noise suppressed
(off up to 32-res), noise at every layer, and no noise anywhere.  The
resulting checkpoints feed the noise-regime and ablation scripts.
"""

import argparse
import time
from pathlib import Path

from cardgan.config import ArchConfig, NoiseGateConfig
from cardgan.data.packing import PackedDataset
from cardgan.training import TrainConfig, Trainer

CONFIGS = {
    "gated": lambda arch: NoiseGateConfig.coarse_suppressed(arch),
    "allnoise": lambda arch: NoiseGateConfig.all_on(arch),
    "nonoise": lambda arch: NoiseGateConfig.all_off(arch),
}


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--data", type=Path, required=True, help="packed dataset")
    parser.add_argument("--steps", type=int, default=2000)
    parser.add_argument("--batch", type=int, default=8)
    parser.add_argument("--latent-dim", type=int, default=32)
    parser.add_argument("--channel-max", type=int, default=16)
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--out", type=Path, required=True, help="output directory")
    parser.add_argument("--variants", default="gated,allnoise",
                        help=f"comma list from {sorted(CONFIGS)}")
    args = parser.parse_args()

    dataset = PackedDataset(args.data)
    arch = ArchConfig(output_res=dataset.resolution, latent_dim=args.latent_dim,
                      channel_base=1024, channel_max=args.channel_max, mapping_layers=2)
    cfg = TrainConfig(batch_size=args.batch, lr_initial=2.5e-3, lr_final=2.5e-4,
                      total_images=args.steps * args.batch,
                      snapshot_interval_images=10**9, ema_halflife_kimg=2.0,
                      seed=args.seed)
    args.out.mkdir(parents=True, exist_ok=True)
    for name in args.variants.split(","):
        gates = CONFIGS[name](arch)
        trainer = Trainer(arch, gates, dataset.images, cfg, out_dir=args.out / name)
        start = time.time()
        for step in range(args.steps):
            metrics = trainer.train_step()
            if step % 200 == 0:
                print(f"[{name}] step {step:5d} loss_d {metrics['loss_d']:.3f} "
                      f"loss_g {metrics['loss_g']:.3f} p {metrics['ada_p']:.3f}")
        path = trainer.snapshot(args.out / f"{name}.ckpt")
        trainer.close()
        print(f"[{name}] {args.steps} steps in {time.time() - start:.0f}s -> {path}")


if __name__ == "__main__":
    main()
