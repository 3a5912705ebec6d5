"""Naive Bayes with multinomial or Bernoulli event model and additive smoothing.

Multinomial likelihood per class c::

    P(w_k | c) = (N_ck + alpha) / (N_c + alpha * |V|)
    log P(d | c) = sum_k n_k * log P(w_k | c)

The multinomial coefficient is the same for every class and is dropped.
The decision is ``argmax_c log P(c) + log P(d | c)``.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .spec import NbParams


@dataclass(frozen=True)
class NaiveBayesModel:
    n_features: int
    class_counts: np.ndarray  # (2,) weights of No, Yes
    feature_counts: np.ndarray  # (2, d) summed term values (multinomial) or doc freq (bernoulli)
    params: NbParams
    kind: str = "nb"

    @property
    def log_prior(self) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return np.log(self.class_counts / self.class_counts.sum())

    @property
    def likelihood(self) -> np.ndarray:
        """``P(w_k | c)`` (multinomial) or ``P(w_k present | c)`` (bernoulli), shape (2, d)."""
        a = self.params.smoothing_alpha
        d = self.n_features
        with np.errstate(divide="ignore", invalid="ignore"):
            if self.params.event_model == "multinomial":
                denom = self.feature_counts.sum(axis=1, keepdims=True) + a * d
                return (self.feature_counts + a) / denom
            return (self.feature_counts + a) / (self.class_counts[:, None] + 2.0 * a)

    def joint_log_likelihood(self, X: np.ndarray) -> np.ndarray:
        """``log P(c) + log P(d | c)`` for each row, shape (n, 2); column 1 is Yes."""
        p = self.likelihood
        with np.errstate(divide="ignore", invalid="ignore"):
            logp = np.log(p)
            if self.params.event_model == "multinomial":
                ll = _masked_dot(X, logp)
            else:
                present = (X > 0).astype(np.float64)
                ll = _masked_dot(present, logp) + _masked_dot(1.0 - present, np.log1p(-p))
        return ll + self.log_prior[None, :]

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        """Posterior over (No, Yes) per row."""
        jll = self.joint_log_likelihood(X)
        top = jll.max(axis=1, keepdims=True)
        # both classes impossible: fall back to the prior
        dead = ~np.isfinite(top[:, 0])
        if dead.any():
            jll[dead] = self.log_prior
            top[dead] = jll[dead].max(axis=1, keepdims=True)
        e = np.exp(jll - top)
        return e / e.sum(axis=1, keepdims=True)

    def predict_codes(self, X: np.ndarray) -> np.ndarray:
        jll = self.joint_log_likelihood(X)
        dead = ~np.isfinite(jll.max(axis=1))
        if dead.any():
            jll[dead] = self.log_prior
        # ties go to Yes
        return (jll[:, 1] >= jll[:, 0]).astype(np.int64)

    def to_dict(self) -> dict:
        # counts are authoritative; prior and likelihood tables are derived
        # from them and written for readers of the file
        prior = self.class_counts / self.class_counts.sum()
        return {
            "n_features": self.n_features,
            "classes": ["No", "Yes"],
            "class_counts": [float(v) for v in self.class_counts],
            "feature_counts": [[float(v) for v in row] for row in self.feature_counts],
            "prior": [float(v) for v in prior],
            "likelihood": [[float(v) for v in row] for row in self.likelihood],
        }

    @classmethod
    def from_dict(cls, data: dict, params: NbParams) -> "NaiveBayesModel":
        return cls(int(data["n_features"]), np.array(data["class_counts"], dtype=np.float64),
                   np.array(data["feature_counts"], dtype=np.float64).reshape(2, -1), params)


def _masked_dot(M: np.ndarray, L: np.ndarray) -> np.ndarray:
    """``M @ L.T`` with the convention ``0 * -inf = 0``."""
    finite = np.isfinite(L)
    out = M @ np.where(finite, L, 0.0).T
    if not finite.all():
        hit = (M > 0).astype(np.float64) @ (~finite).astype(np.float64).T
        out[hit > 0] = -np.inf
    return out


def fit_naive_bayes(X: np.ndarray, y: np.ndarray, w: np.ndarray, params: NbParams) -> NaiveBayesModel:
    onehot = np.zeros((X.shape[0], 2))
    onehot[np.arange(X.shape[0]), y] = w
    class_counts = onehot.sum(axis=0)
    values = X if params.event_model == "multinomial" else (X > 0).astype(np.float64)
    feature_counts = onehot.T @ values
    model = NaiveBayesModel(X.shape[1], class_counts, feature_counts, params)
    if params.smoothing_alpha == 0 and np.any(model.likelihood == 0):
        warnings.warn("naive Bayes without smoothing has zero-probability terms; "
                      "documents containing them get probability 0 for that class",
                      RuntimeWarning, stacklevel=3)
    return model
