"""Principal directions of the mapped latent distribution, and edits along
them.

The basis is fit on mapped latents sampled from fresh input latents (not
on network weights).  Components are rows sorted by explained variance
descending, with a deterministic sign convention: each row's
largest-magnitude entry is positive.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..container import read_container, write_container
from ..errors import InvalidArgument
from ..models.checkpoint import GeneratorCheckpoint
from ..models.latents import validate_w_plus
from ..models.ops import map_latents
from ..rng import rng_from_seed

BASIS_KIND = "pca-basis"


@dataclass(frozen=True)
class PcaBasis:
    mean: np.ndarray        # (D,)
    components: np.ndarray  # (K, D) orthonormal rows, variance-ordered
    variances: np.ndarray   # (K,) non-increasing

    def __post_init__(self) -> None:
        mean = np.asarray(self.mean, dtype=np.float32)
        comps = np.asarray(self.components, dtype=np.float32)
        var = np.asarray(self.variances, dtype=np.float32)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "variances", var)
        k, d = comps.shape
        if k > d:
            raise InvalidArgument(f"more components ({k}) than dimensions ({d})")
        if mean.shape != (d,) or var.shape != (k,):
            raise InvalidArgument("basis field shapes are inconsistent")
        gram = comps.astype(np.float64) @ comps.astype(np.float64).T
        if not np.allclose(gram, np.eye(k), atol=1e-5):
            raise InvalidArgument("components are not orthonormal within 1e-5")
        if np.any(np.diff(var) > 1e-6):
            raise InvalidArgument("variances must be non-increasing")

    @property
    def k(self) -> int:
        return self.components.shape[0]

    def save(self, path: str | Path, meta: dict | None = None) -> Path:
        return write_container(path, BASIS_KIND, meta or {}, {
            "mean": self.mean, "components": self.components, "variances": self.variances,
        })

    @classmethod
    def load(cls, path: str | Path) -> "PcaBasis":
        c = read_container(path, expect_kind=BASIS_KIND)
        return cls(mean=c.tensor("mean"), components=c.tensor("components"),
                   variances=c.tensor("variances"))


def pca_from_samples(samples: np.ndarray, k: int | None = None) -> PcaBasis:
    """PCA of an (N, D) sample matrix with the package sign convention.

    Variances are the eigenvalues of the unbiased sample covariance.
    """
    samples = np.asarray(samples, dtype=np.float64)
    if samples.ndim != 2:
        raise InvalidArgument(f"samples must be (N, D), got shape {samples.shape}")
    n, d = samples.shape
    k = d if k is None else k
    if not 1 <= k <= d:
        raise InvalidArgument(f"k must be in [1, {d}], got {k}")
    if n < d + 1:
        raise InvalidArgument(f"need at least D+1 = {d + 1} samples, got {n}")
    mean = samples.mean(axis=0)
    centered = samples - mean
    _, svals, vt = np.linalg.svd(centered, full_matrices=False)
    variances = svals**2 / (n - 1)
    comps = vt[:k]
    # sign convention: the largest-magnitude entry of each row is positive
    flip = np.take_along_axis(comps, np.abs(comps).argmax(axis=1, keepdims=True), axis=1) < 0
    comps = np.where(flip, -comps, comps)
    return PcaBasis(mean=mean, components=comps, variances=variances[:k])


def compute_pca_basis(ckpt: GeneratorCheckpoint, n_samples: int, seed: int,
                      k: int | None = None, batch_size: int = 1024) -> PcaBasis:
    """Fit the basis on ``n_samples`` mapped latents drawn from ``seed``."""
    d = ckpt.latent_dim
    if n_samples < d + 1:
        raise InvalidArgument(f"need at least D+1 = {d + 1} samples, got {n_samples}")
    rng = rng_from_seed(seed)
    chunks = []
    remaining = n_samples
    while remaining > 0:
        take = min(batch_size, remaining)
        z = rng.standard_normal((take, d), dtype=np.float32)
        chunks.append(map_latents(z, ckpt))
        remaining -= take
    return pca_from_samples(np.concatenate(chunks, axis=0), k=k)


@dataclass(frozen=True)
class PcaEdit:
    """Additive move along one principal direction over a layer range.

    ``layer_range`` is a half-open-free inclusive-exclusive pair (lo, hi):
    layers lo..hi-1 receive the shift; None means all layers.
    """

    direction_index: int
    weight: float
    layer_range: tuple[int, int] | None = None

    def validate(self, basis: PcaBasis, num_layers: int) -> "PcaEdit":
        if not 0 <= self.direction_index < basis.k:
            raise InvalidArgument(
                f"direction_index must be in [0, {basis.k - 1}], got {self.direction_index}"
            )
        if not np.isfinite(self.weight):
            raise InvalidArgument(f"edit weight must be finite, got {self.weight}")
        if self.layer_range is not None:
            lo, hi = self.layer_range
            if not 0 <= lo <= hi <= num_layers:
                raise InvalidArgument(
                    f"layer_range must satisfy 0 <= lo <= hi <= {num_layers}, got ({lo}, {hi})"
                )
        return self


def apply_pca_edits(w_plus: np.ndarray, basis: PcaBasis, edits: list[PcaEdit]) -> np.ndarray:
    """Shift layers by weight * direction per edit; edits compose additively
    and therefore commute."""
    w_plus = validate_w_plus(w_plus, dim=basis.components.shape[1])
    num_layers = w_plus.shape[0]
    out = w_plus.copy()
    for edit in edits:
        edit.validate(basis, num_layers)
        lo, hi = edit.layer_range if edit.layer_range is not None else (0, num_layers)
        out[lo:hi] += np.float32(edit.weight) * basis.components[edit.direction_index]
    return out
