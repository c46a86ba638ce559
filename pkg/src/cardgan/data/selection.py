"""Prune lists and density-based instance selection.

Selection scores each entry by Gaussian log-density in an embedding space
and flags the sparsest fraction.  It is advisory only: density-based
pruning is unreliable on this domain when the embedding is not
perceptually aligned with the data, so scores are reported and never
auto-applied.  Manual prune lists are the supported cleaning path.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import InvalidArgument, NumericFailure
from .manifest import DatasetManifest

COVARIANCE_REGULARIZATION = 1e-3


@dataclass(frozen=True)
class SelectionScore:
    id: str
    density_score: float  # higher = denser region; comparable within one embedding only
    embedding_id: str


def instance_selection_scores(
    embeddings: np.ndarray, keep_fraction: float, ids: list[str] | None = None,
    embedding_id: str = "unspecified",
) -> tuple[list[SelectionScore], list[str], list[str]]:
    """Score entries by fitted Gaussian log-density; flag the sparsest.

    Returns (scores, keep_ids, drop_ids); the bottom (1 - keep_fraction)
    by density lands in ``drop_ids``.  Scores are order-invariant.
    """
    embeddings = np.asarray(embeddings, dtype=np.float64)
    if embeddings.ndim != 2:
        raise InvalidArgument(f"embeddings must be (N, F), got shape {embeddings.shape}")
    if not 0.0 < keep_fraction <= 1.0:
        raise InvalidArgument(f"keep_fraction must be in (0, 1], got {keep_fraction}")
    n, f = embeddings.shape
    if n < 2:
        raise InvalidArgument("need at least two embeddings")
    ids = ids if ids is not None else [str(i) for i in range(n)]
    if len(ids) != n:
        raise InvalidArgument(f"got {len(ids)} ids for {n} embeddings")

    mean = embeddings.mean(axis=0)
    centered = embeddings - mean
    cov = centered.T @ centered / (n - 1) + COVARIANCE_REGULARIZATION * np.eye(f)
    sign, logdet = np.linalg.slogdet(cov)
    if sign <= 0 or not np.isfinite(logdet):
        raise NumericFailure("covariance is degenerate even after regularization")
    try:
        solved = np.linalg.solve(cov, centered.T)
    except np.linalg.LinAlgError as exc:
        raise NumericFailure(f"covariance solve failed: {exc}") from exc
    mahalanobis = np.einsum("nf,fn->n", centered, solved)
    log_density = -0.5 * (mahalanobis + logdet + f * np.log(2.0 * np.pi))
    if not np.all(np.isfinite(log_density)):
        raise NumericFailure("non-finite selection scores")

    scores = [SelectionScore(i, float(s), embedding_id) for i, s in zip(ids, log_density)]
    n_drop = n - int(np.ceil(keep_fraction * n))
    order = sorted(range(n), key=lambda j: (log_density[j], ids[j]))
    drop = {ids[j] for j in order[:n_drop]}
    keep_ids = [i for i in ids if i not in drop]
    drop_ids = [i for i in ids if i in drop]
    return scores, keep_ids, drop_ids


def apply_prune_list(manifest: DatasetManifest, prune_file: str | Path) -> DatasetManifest:
    """Mark listed ids as pruned; unknown ids warn without failing.

    The prune file is JSON: ``{"<id>": "<reason>", ...}`` or a list of ids.
    Source files are never touched; pruning twice is a no-op.
    """
    import logging

    payload = json.loads(Path(prune_file).read_text())
    if isinstance(payload, list):
        payload = {str(i): "pruned" for i in payload}
    for entry_id, reason in payload.items():
        entry = manifest.entries.get(str(entry_id))
        if entry is None:
            logging.getLogger(__name__).warning("prune list names unknown id %r", entry_id)
            continue
        entry.pruned = True
        entry.prune_reason = str(reason)
    return manifest
