from .manifest import DatasetManifest, ManifestEntry
from .catalog import fetch_catalog
from .processing import crop_and_resample, resample_bicubic, super_resolve_2x, sr_backends
from .selection import SelectionScore, apply_prune_list, instance_selection_scores
from .packing import PackedDataset, pack_dataset

__all__ = [
    "DatasetManifest",
    "ManifestEntry",
    "PackedDataset",
    "SelectionScore",
    "apply_prune_list",
    "crop_and_resample",
    "fetch_catalog",
    "instance_selection_scores",
    "pack_dataset",
    "resample_bicubic",
    "sr_backends",
    "super_resolve_2x",
]
