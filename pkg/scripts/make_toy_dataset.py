#!/usr/bin/env python3
"""Build a packed synthetic toy dataset for desk-scale experiments."""

import argparse

from PIL import Image

from cardgan.data import DatasetManifest, pack_dataset
from cardgan.data.manifest import ManifestEntry
from cardgan.data.processing import from_unit_range
from cardgan.data.synthetic import synthetic_blob_images

from pathlib import Path


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=100)
    parser.add_argument("--res", type=int, default=64)
    parser.add_argument("--seed", type=int, default=2024)
    parser.add_argument("--out", type=Path, required=True, help="output .dat file")
    args = parser.parse_args()

    images = synthetic_blob_images(args.n, args.res, seed=args.seed)
    workdir = args.out.parent / f"{args.out.stem}-images"
    workdir.mkdir(parents=True, exist_ok=True)
    manifest = DatasetManifest(resolution=args.res)
    for i, img in enumerate(images):
        entry_id = f"toy{i:04d}"
        Image.fromarray(from_unit_range(img)).save(workdir / f"{entry_id}.png")
        manifest.add(ManifestEntry(id=entry_id, source_uri="synthetic",
                                   filename=f"{entry_id}.png", class_tags=["toy"]))
    path = pack_dataset(manifest, workdir, args.out, seed=args.seed)
    print(f"packed {args.n} images at {args.res}-res into {path}")


if __name__ == "__main__":
    main()
