"""Gaussian feature statistics and the Fréchet distance between them.

The covariance square root uses an eigendecomposition of the symmetrized
product: with A = sqrt(cov_a) from an eigh of cov_a, the cross term is
trace(sqrt(A cov_b A)), again by eigh.  Eigenvalues in [-1e-6, 0) are
clamped to zero; anything below -1e-6 is treated as a numeric failure and
reported.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..container import read_container, write_container
from ..errors import InvalidArgument, NumericFailure

PSD_TOL = 1e-6
STATS_KIND = "feature-stats"


@dataclass(frozen=True)
class FeatureStats:
    """Sample mean and unbiased covariance of a feature set."""

    mean: np.ndarray
    cov: np.ndarray
    n: int

    def __post_init__(self) -> None:
        mean = np.asarray(self.mean, dtype=np.float64)
        cov = np.asarray(self.cov, dtype=np.float64)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)
        if mean.ndim != 1 or cov.shape != (mean.shape[0], mean.shape[0]):
            raise InvalidArgument(
                f"stats shapes inconsistent: mean {mean.shape}, cov {cov.shape}"
            )
        if self.n < 2:
            raise InvalidArgument(f"feature statistics need n >= 2, got {self.n}")
        if not np.allclose(cov, cov.T, atol=PSD_TOL):
            raise InvalidArgument("covariance is not symmetric within tolerance")
        eigvals = np.linalg.eigvalsh((cov + cov.T) / 2.0)
        if eigvals.min(initial=0.0) < -PSD_TOL:
            raise NumericFailure(
                f"covariance not PSD within tolerance: min eigenvalue {eigvals.min():.3e}"
            )

    @property
    def dim(self) -> int:
        return self.mean.shape[0]


def fit_stats(features: np.ndarray) -> FeatureStats:
    """Sample mean and unbiased covariance of an (N, F) feature matrix."""
    features = np.asarray(features, dtype=np.float64)
    if features.ndim != 2:
        raise InvalidArgument(f"features must be (N, F), got shape {features.shape}")
    n = features.shape[0]
    if n < 2:
        raise InvalidArgument(f"need at least 2 samples to fit statistics, got {n}")
    mean = features.mean(axis=0)
    centered = features - mean
    cov = centered.T @ centered / (n - 1)
    return FeatureStats(mean=mean, cov=cov, n=n)


def merge_stats(a: FeatureStats, b: FeatureStats) -> FeatureStats:
    """Exact merge of two disjoint sample statistics (shard-friendly)."""
    if a.dim != b.dim:
        raise InvalidArgument(f"dimension mismatch: {a.dim} vs {b.dim}")
    n = a.n + b.n
    delta = b.mean - a.mean
    mean = a.mean + delta * (b.n / n)
    m2 = a.cov * (a.n - 1) + b.cov * (b.n - 1) + np.outer(delta, delta) * (a.n * b.n / n)
    return FeatureStats(mean=mean, cov=m2 / (n - 1), n=n)


def _clamped_sqrt_eigvals(sym: np.ndarray, what: str) -> tuple[np.ndarray, np.ndarray]:
    eigvals, eigvecs = np.linalg.eigh((sym + sym.T) / 2.0)
    if eigvals.min(initial=0.0) < -PSD_TOL:
        raise NumericFailure(
            f"{what} not PSD within tolerance: min eigenvalue {eigvals.min():.3e}, "
            f"eigenvalues {np.sort(eigvals)[:5]}"
        )
    return np.sqrt(np.clip(eigvals, 0.0, None)), eigvecs


def frechet_distance(a: FeatureStats, b: FeatureStats) -> float:
    """||mu_a - mu_b||^2 + tr(cov_a + cov_b - 2 (cov_a cov_b)^(1/2)).

    Symmetric and non-negative.  Bitwise-identical statistics return
    exactly 0.0 (identical image sets must score an exact zero, with no
    tolerance involved).
    """
    if a.dim != b.dim:
        raise InvalidArgument(f"dimension mismatch: {a.dim} vs {b.dim}")
    if np.array_equal(a.mean, b.mean) and np.array_equal(a.cov, b.cov):
        return 0.0
    sq, vec = _clamped_sqrt_eigvals(a.cov, "first covariance")
    sqrt_a = (vec * sq) @ vec.T
    inner = sqrt_a @ b.cov @ sqrt_a
    cross_sq, _ = _clamped_sqrt_eigvals(inner, "covariance product")
    mean_term = float(np.sum((a.mean - b.mean) ** 2))
    trace_term = float(np.trace(a.cov) + np.trace(b.cov) - 2.0 * cross_sq.sum())
    return max(mean_term + trace_term, 0.0)


def save_stats(path: str | Path, stats: FeatureStats, extractor_id: str) -> Path:
    return write_container(
        path, STATS_KIND,
        {"extractor_id": extractor_id, "n": stats.n},
        {"mean": stats.mean, "cov": stats.cov},
    )


def load_stats(path: str | Path) -> tuple[FeatureStats, str]:
    c = read_container(path, expect_kind=STATS_KIND)
    stats = FeatureStats(mean=c.tensor("mean").astype(np.float64),
                         cov=c.tensor("cov").astype(np.float64),
                         n=int(c.meta["n"]))
    return stats, str(c.meta["extractor_id"])
