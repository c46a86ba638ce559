from .features import available_extractors, extract_features, extract_features_torch
from .fid import FeatureStats, fit_stats, frechet_distance, load_stats, merge_stats, save_stats
from .experiments import AblationRow, AblationSpec, noise_sensitivity, run_ablation

__all__ = [
    "AblationRow",
    "AblationSpec",
    "FeatureStats",
    "available_extractors",
    "extract_features",
    "extract_features_torch",
    "fit_stats",
    "frechet_distance",
    "load_stats",
    "merge_stats",
    "noise_sensitivity",
    "run_ablation",
    "save_stats",
]
