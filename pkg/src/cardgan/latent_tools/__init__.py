from .pca import PcaBasis, PcaEdit, apply_pca_edits, compute_pca_basis, pca_from_samples
from .projection import ProjectionOptions, ProjectionResult, project
from .grids import mix_grid

__all__ = [
    "PcaBasis",
    "PcaEdit",
    "ProjectionOptions",
    "ProjectionResult",
    "apply_pca_edits",
    "compute_pca_basis",
    "mix_grid",
    "pca_from_samples",
    "project",
]
