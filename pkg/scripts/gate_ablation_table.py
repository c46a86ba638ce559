#!/usr/bin/env python3
"""Gate-configuration ablation table.

Five rows against one reference set: no noise anywhere; noise at all
layers scored under constant and under per-latent inference noise; and
the coarse-gated network under the same two regimes.
"""

import argparse
from pathlib import Path

from cardgan.data.packing import PackedDataset
from cardgan.evaluation import (
    AblationRow,
    AblationSpec,
    extract_features,
    fit_stats,
    run_ablation,
)
from cardgan.models import GeneratorCheckpoint


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--gated", type=Path, required=True)
    parser.add_argument("--allnoise", type=Path, required=True)
    parser.add_argument("--nonoise", type=Path, default=None)
    parser.add_argument("--ref", type=Path, required=True, help="packed dataset")
    parser.add_argument("--n", type=int, default=2000)
    parser.add_argument("--extractor", default="random-projection")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    ref = PackedDataset(args.ref)
    ref_stats = fit_stats(extract_features(ref.images, args.extractor))

    ckpts, rows = {}, []

    def add(label: str, path: Path, noise_mode: str) -> None:
        ckpt = GeneratorCheckpoint.load(path)
        ckpts[label] = ckpt
        rows.append(AblationRow(label, ckpt.gates, noise_mode, args.n))

    if args.nonoise is not None:
        add("no noise", args.nonoise, "constant-per-run")
    add("noise all layers, constant noise", args.allnoise, "constant-per-run")
    add("noise all layers, random noise", args.allnoise, "random-per-latent")
    add("gated coarse noise, constant noise", args.gated, "constant-per-run")
    add("gated coarse noise, random noise", args.gated, "random-per-latent")

    result = run_ablation(ckpts, AblationSpec(rows=tuple(rows)), ref_stats,
                          extractor_id=args.extractor, seed=args.seed)
    print(result.to_text_table())
    print(result.to_json())


if __name__ == "__main__":
    main()
