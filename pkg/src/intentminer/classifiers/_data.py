"""Input coercion shared by the learners."""
from __future__ import annotations

from typing import Sequence

import numpy as np
import scipy.sparse as sp

from ..corpus import NO, YES
from ..errors import TrainingError


def as_dense(matrix) -> np.ndarray:
    """FeatureMatrix, scipy sparse or array-like -> C-contiguous float64 2-D array."""
    from ..vectorize import FeatureMatrix

    if isinstance(matrix, FeatureMatrix):
        X = matrix.to_dense()
    elif sp.issparse(matrix):
        X = matrix.toarray()
    else:
        X = np.asarray(matrix)
    X = np.ascontiguousarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise TrainingError(f"expected a 2-D feature matrix, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise TrainingError("feature matrix contains NaN or infinite values")
    if X.size and X.min() < 0:
        raise TrainingError("feature matrix contains negative values")
    return X


def encode_labels(labels, n: int | None = None) -> np.ndarray:
    """Map labels to 1 (Yes) / 0 (No).  Accepts strings, bools or 0/1 ints."""
    if labels is None:
        raise TrainingError("labels are required")
    out = np.empty(len(labels), dtype=np.int64)
    for i, lab in enumerate(labels):
        if lab == YES or (not isinstance(lab, str) and lab is not None and lab == 1):
            out[i] = 1
        elif lab == NO or (not isinstance(lab, str) and lab is not None and lab == 0):
            out[i] = 0
        else:
            raise TrainingError(f"row {i} is unlabeled or has an invalid label {lab!r}")
    if n is not None and len(out) != n:
        raise TrainingError(f"got {len(out)} labels for {n} rows")
    return out


def decode_labels(codes: np.ndarray) -> list[str]:
    return [YES if c else NO for c in codes]


def resolve_labels(matrix, labels) -> Sequence:
    if labels is None:
        labels = getattr(matrix, "row_labels", None)
        if labels is None:
            raise TrainingError("labels not given and matrix carries no row labels")
    return labels


def require_two_classes(y: np.ndarray, w: np.ndarray | None = None) -> None:
    if w is None:
        present = set(np.unique(y).tolist())
    else:
        present = set(np.unique(y[w > 0]).tolist())
    if present != {0, 1}:
        raise TrainingError("training data must contain both classes (Yes and No)")


def aggregate(X: np.ndarray, y: np.ndarray):
    """Collapse identical (row, label) pairs into weighted unique rows.

    Output is sorted lexicographically by row then label, so it depends only
    on the multiset of training pairs and not on their order.
    """
    joint = np.concatenate([X, y[:, None].astype(np.float64)], axis=1)
    uniq, counts = np.unique(joint, axis=0, return_counts=True)
    Xu = np.ascontiguousarray(uniq[:, :-1])
    yu = uniq[:, -1].astype(np.int64)
    return Xu, yu, counts.astype(np.float64)
