"""Unpruned binary CART tree grown with the Gini index."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import kernels
from ..errors import TrainingError
from .spec import DtParams


def gini_impurity(class_counts) -> float:
    """``1 - sum(p_c^2)`` for nonnegative per-class counts."""
    counts = np.asarray(class_counts, dtype=np.float64)
    if counts.ndim != 1 or counts.size == 0 or np.any(counts < 0):
        raise ValueError("class counts must be a nonempty vector of nonnegative numbers")
    total = counts.sum()
    if total <= 0:
        raise ValueError("gini impurity undefined for an empty node")
    p = counts / total
    return float(1.0 - np.dot(p, p))


@dataclass(frozen=True)
class DecisionTreeModel:
    """Flat node arrays; ``feature[k] == -1`` marks a leaf.

    ``counts[k]`` holds the (No, Yes) training weight reaching node ``k``;
    rows with ``x[feature] <= threshold`` go left.
    """

    n_features: int
    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    counts: np.ndarray
    gain: np.ndarray
    params: DtParams
    kind: str = "dt"

    @property
    def n_nodes(self) -> int:
        return int(self.feature.shape[0])

    def leaf_value(self) -> np.ndarray:
        # ties go to Yes
        return (self.counts[:, 1] >= self.counts[:, 0]).astype(np.int64)

    def apply(self, X: np.ndarray) -> np.ndarray:
        """Leaf index reached by each row."""
        node = np.zeros(X.shape[0], dtype=np.int64)
        active = self.feature[node] >= 0
        rows = np.arange(X.shape[0])
        while active.any():
            r = rows[active]
            nd = node[r]
            go_left = X[r, self.feature[nd]] <= self.threshold[nd]
            node[r] = np.where(go_left, self.left[nd], self.right[nd])
            active = self.feature[node] >= 0
        return node

    def predict_codes(self, X: np.ndarray) -> np.ndarray:
        return self.leaf_value()[self.apply(X)]

    def depth(self) -> int:
        best = 0
        stack = [(0, 0)]
        while stack:
            k, d = stack.pop()
            best = max(best, d)
            if self.feature[k] >= 0:
                stack.append((int(self.left[k]), d + 1))
                stack.append((int(self.right[k]), d + 1))
        return best

    def to_dict(self) -> dict:
        def node(k: int) -> dict:
            out = {"counts": [float(c) for c in self.counts[k]]}
            if self.feature[k] >= 0:
                out.update(feature=int(self.feature[k]), threshold=float(self.threshold[k]),
                           gain=float(self.gain[k]), left=node(int(self.left[k])),
                           right=node(int(self.right[k])))
            return out

        return {"n_features": self.n_features, "root": node(0)}

    @classmethod
    def from_dict(cls, data: dict, params: DtParams) -> "DecisionTreeModel":
        feature, threshold, left, right, counts, gain = [], [], [], [], [], []

        def add(nd: dict) -> int:
            k = len(feature)
            feature.append(nd.get("feature", -1))
            threshold.append(nd.get("threshold", 0.0))
            gain.append(nd.get("gain", 0.0))
            counts.append(nd["counts"])
            left.append(-1)
            right.append(-1)
            if "feature" in nd:
                left[k] = add(nd["left"])
                right[k] = add(nd["right"])
            return k

        add(data["root"])
        return cls(int(data["n_features"]), np.array(feature, dtype=np.int64),
                   np.array(threshold, dtype=np.float64), np.array(left, dtype=np.int64),
                   np.array(right, dtype=np.int64), np.array(counts, dtype=np.float64),
                   np.array(gain, dtype=np.float64), params)


def fit_tree(X: np.ndarray, y: np.ndarray, w: np.ndarray, params: DtParams) -> DecisionTreeModel:
    """Grow a tree on weighted rows (weights are document multiplicities)."""
    if X.shape[0] == 0:
        raise TrainingError("cannot grow a tree on zero rows")
    feature, threshold, left, right, counts, gain = [], [], [], [], [], []

    def new_node(rows: np.ndarray) -> int:
        wy = w[rows]
        c1 = float(wy[y[rows] == 1].sum())
        counts.append((float(wy.sum()) - c1, c1))
        feature.append(-1)
        threshold.append(0.0)
        gain.append(0.0)
        left.append(-1)
        right.append(-1)
        return len(feature) - 1

    root_rows = np.arange(X.shape[0], dtype=np.int64)
    stack = [(new_node(root_rows), root_rows)]
    while stack:
        k, rows = stack.pop()
        c0, c1 = counts[k]
        if c0 == 0 or c1 == 0 or c0 + c1 < params.min_node_size:
            continue
        f, t, g = kernels.best_split(X, y, w, rows)
        if f < 0:
            continue
        mask = X[rows, f] <= t
        lrows, rrows = rows[mask], rows[~mask]
        feature[k], threshold[k], gain[k] = int(f), float(t), float(g)
        lk = new_node(lrows)
        rk = new_node(rrows)
        left[k], right[k] = lk, rk
        # right pushed first so the left subtree is expanded first
        stack.append((rk, rrows))
        stack.append((lk, lrows))
    return DecisionTreeModel(
        n_features=X.shape[1],
        feature=np.array(feature, dtype=np.int64),
        threshold=np.array(threshold, dtype=np.float64),
        left=np.array(left, dtype=np.int64),
        right=np.array(right, dtype=np.int64),
        counts=np.array(counts, dtype=np.float64),
        gain=np.array(gain, dtype=np.float64),
        params=params,
    )
