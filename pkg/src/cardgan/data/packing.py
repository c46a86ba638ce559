"""Packed datasets: processed images + manifest in one container file.

Iteration order is a seeded shuffle of the kept ids, recorded in the
manifest so reruns are byte-identical.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
from PIL import Image

from ..container import read_container, write_container
from ..errors import InvalidArgument
from ..rng import rng_from_seed
from .manifest import DatasetManifest
from .processing import to_unit_range

DATASET_KIND = "packed-dataset"


def load_image(path: str | Path) -> np.ndarray:
    """PNG/JPEG file -> float32 (H, W, 3) in [-1, 1]."""
    with Image.open(path) as img:
        return to_unit_range(np.asarray(img.convert("RGB")))


def pack_dataset(manifest: DatasetManifest, processed_dir: str | Path,
                 out_file: str | Path, seed: int = 0) -> Path:
    """Pack every kept entry's processed image; fail hard on missing files."""
    processed_dir = Path(processed_dir)
    kept = manifest.kept_entries()
    if not kept:
        raise InvalidArgument("manifest has no kept entries to pack")
    missing = [e.id for e in kept if not (processed_dir / f"{e.id}.png").exists()]
    if missing:
        raise InvalidArgument(f"missing processed images for ids: {missing}")

    order = list(range(len(kept)))
    rng_from_seed(seed).shuffle(order)
    ids = [kept[i].id for i in order]
    images = np.stack([load_image(processed_dir / f"{i}.png") for i in ids])
    res = images.shape[1]
    if manifest.resolution is not None and manifest.resolution != res:
        raise InvalidArgument(
            f"manifest resolution {manifest.resolution} != image resolution {res}")
    meta = {
        "ids": ids,
        "seed": seed,
        "resolution": res,
        "counts_per_tag": manifest.counts_per_tag(),
        "manifest": manifest.to_json(),
    }
    return write_container(out_file, DATASET_KIND, meta, {"images": images})


class PackedDataset:
    """Reader for packed dataset files."""

    def __init__(self, path: str | Path):
        c = read_container(path, expect_kind=DATASET_KIND)
        self.ids: list[str] = list(c.meta["ids"])
        self.seed: int = int(c.meta["seed"])
        self.resolution: int = int(c.meta["resolution"])
        self.images: np.ndarray = c.tensor("images")
        if self.images.shape[0] != len(self.ids):
            raise InvalidArgument(
                f"packed dataset lists {len(self.ids)} ids but holds {self.images.shape[0]} images")

    def __len__(self) -> int:
        return len(self.ids)

    def __getitem__(self, index: int) -> tuple[str, np.ndarray]:
        return self.ids[index], self.images[index]
