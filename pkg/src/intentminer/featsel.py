"""Information-gain filter and forward wrapper selection scored by leave-one-out CV."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from ._accel import parallel_map
from .classifiers import WEIGHTED_KINDS, ClassifierSpec, aggregate, fit_arrays, fit_weighted
from .classifiers._data import as_dense, encode_labels, resolve_labels
from .errors import SelectionError
from .vectorize import FeatureMatrix, FeatureSubset

__all__ = [
    "IgScore", "FeatureSubset", "SelectionTrace", "ig_scores", "mdl_filter", "select_by_ig",
    "loocv_accuracy", "forward_select", "write_ig_report", "write_selection_trace",
]


@dataclass(frozen=True, order=True)
class IgScore:
    term_index: int
    gain: float


@dataclass(frozen=True)
class TraceStep:
    added_index: int
    subset_size: int
    loocv_accuracy: float
    n_correct: int


@dataclass(frozen=True)
class SelectionTrace:
    steps: tuple[TraceStep, ...]
    chosen_size: int

    @property
    def order(self) -> tuple[int, ...]:
        return tuple(s.added_index for s in self.steps)


def _presence_counts(matrix, labels):
    """Per-column counts of documents containing the term, split by class."""
    if isinstance(matrix, FeatureMatrix):
        presence = matrix.csr.copy()
        presence.data = np.ones_like(presence.data)
    else:
        presence = (as_dense(matrix) > 0).astype(np.int64)
    n = presence.shape[0]
    if n < 1:
        raise SelectionError("information gain needs at least one row")
    try:
        y = encode_labels(resolve_labels(matrix, labels), n)
    except ValueError as exc:
        raise SelectionError(str(exc)) from None
    t_yes = np.asarray(presence.T @ y).ravel().astype(np.int64)
    t_all = np.asarray(presence.sum(axis=0)).ravel().astype(np.int64)
    return t_yes, t_all - t_yes, int(y.sum()), int(n - y.sum())


def _plogp(p: np.ndarray) -> np.ndarray:
    out = np.zeros_like(p, dtype=np.float64)
    nz = p > 0
    out[nz] = p[nz] * np.log2(p[nz])
    return out


def _ig_from_counts(t_yes, t_no, n_yes, n_no) -> np.ndarray:
    n = n_yes + n_no
    t = (t_yes + t_no).astype(np.float64)
    f = n - t
    prior = -(_plogp(np.array([n_yes / n])) + _plogp(np.array([n_no / n])))[0]
    with np.errstate(divide="ignore", invalid="ignore"):
        safe_t = np.where(t > 0, t, 1.0)
        safe_f = np.where(f > 0, f, 1.0)
        with_t = _plogp(t_yes / safe_t) + _plogp(t_no / safe_t)
        f_yes = n_yes - t_yes
        f_no = n_no - t_no
        without_t = _plogp(f_yes / safe_f) + _plogp(f_no / safe_f)
    gain = prior + (t / n) * np.where(t > 0, with_t, 0.0) + (f / n) * np.where(f > 0, without_t, 0.0)
    return np.maximum(gain, 0.0)


def ig_scores(matrix, labels=None) -> list[IgScore]:
    """Information gain in bits of term presence about the class, one per column.

    TF counts are collapsed to presence.  Probabilities are empirical
    frequencies with ``0 log 0 = 0``.
    """
    t_yes, t_no, n_yes, n_no = _presence_counts(matrix, labels)
    gains = _ig_from_counts(t_yes, t_no, n_yes, n_no)
    return [IgScore(i, float(g)) for i, g in enumerate(gains)]


def _entropy2(a, b) -> np.ndarray:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    s = a + b
    with np.errstate(divide="ignore", invalid="ignore"):
        s1 = np.where(s > 0, s, 1.0)
        return -(_plogp(a / s1) + _plogp(b / s1))


def mdl_filter(scores: Sequence[IgScore], matrix, labels=None) -> list[IgScore]:
    """Zero the gain of every term whose presence split fails the MDL test.

    A binary split of N documents is accepted when

        gain > (log2(N - 1) + log2(3^k - 2) - k*H(S) + k1*H(S1) + k2*H(S2)) / N

    with k, k1, k2 the number of classes present in the whole set and in
    each side.  Rejected terms carry no information beyond sampling noise.
    """
    t_yes, t_no, n_yes, n_no = _presence_counts(matrix, labels)
    n = n_yes + n_no
    f_yes, f_no = n_yes - t_yes, n_no - t_no
    k = int(n_yes > 0) + int(n_no > 0)
    k1 = (t_yes > 0).astype(int) + (t_no > 0).astype(int)
    k2 = (f_yes > 0).astype(int) + (f_no > 0).astype(int)
    delta = (np.log2(3.0 ** k - 2) - (k * _entropy2(n_yes, n_no)
                                       - k1 * _entropy2(t_yes, t_no) - k2 * _entropy2(f_yes, f_no)))
    bound = (math.log2(n - 1) + delta) / n if n > 1 else np.inf
    if len(scores) != len(t_yes):
        raise SelectionError("scores and matrix disagree on the number of columns")
    return [IgScore(s.term_index, s.gain if s.gain > bound[s.term_index] else 0.0) for s in scores]


def select_by_ig(scores: Sequence[IgScore], threshold: float = 0.0) -> FeatureSubset:
    """Terms with gain strictly above ``threshold``, best first (ties by index)."""
    if not scores:
        raise SelectionError("no information gain scores given")
    kept = sorted((s for s in scores if s.gain > threshold), key=lambda s: (-s.gain, s.term_index))
    if not kept:
        raise SelectionError("no feature exceeds threshold")
    return FeatureSubset(tuple(s.term_index for s in kept), "ig_filter")


# --------------------------------------------------------------------------
# leave-one-out
# --------------------------------------------------------------------------

def _check_loocv(y: np.ndarray) -> None:
    if y.shape[0] < 2:
        raise SelectionError("leave-one-out needs at least two rows")
    if len(np.unique(y)) < 2:
        raise SelectionError("leave-one-out needs both classes present")


def _loocv_correct(X: np.ndarray, y: np.ndarray, spec: ClassifierSpec) -> int:
    """Number of rows predicted correctly when held out one at a time."""
    if spec.kind in WEIGHTED_KINDS:
        # identical rows yield identical held-out models, so fit once per group
        Xu, yu, wu = aggregate(X, y)
        correct = 0
        for g in range(Xu.shape[0]):
            w = wu.copy()
            w[g] -= 1.0
            keep = w > 0
            model = fit_weighted(spec, Xu[keep], yu[keep], w[keep])
            if model.predict_codes(Xu[g:g + 1])[0] == yu[g]:
                correct += int(wu[g])
        return correct
    correct = 0
    for i in range(X.shape[0]):
        keep = np.ones(X.shape[0], dtype=bool)
        keep[i] = False
        model = fit_arrays(spec, X[keep], y[keep])
        if model.predict_codes(X[i:i + 1])[0] == y[i]:
            correct += 1
    return correct


def loocv_accuracy(matrix, labels, spec: ClassifierSpec) -> float:
    """Fraction of rows classified correctly by a model trained on all other rows."""
    X = as_dense(matrix)
    y = encode_labels(resolve_labels(matrix, labels), X.shape[0])
    _check_loocv(y)
    return _loocv_correct(X, y, spec) / X.shape[0]


def forward_select(matrix, labels, spec: ClassifierSpec, candidate_pool: FeatureSubset | Sequence[int],
                   budget: int = 20) -> tuple[FeatureSubset, SelectionTrace]:
    """Greedy forward selection from the empty set.

    Each step adds the candidate whose inclusion maximises leave-one-out
    accuracy (ties to the lowest column index) until ``budget`` features or
    the pool is exhausted.  Returns the shortest prefix that reaches the best
    accuracy seen, plus the full trace.
    """
    pool = tuple(candidate_pool.indices if isinstance(candidate_pool, FeatureSubset) else candidate_pool)
    if not pool:
        raise SelectionError("candidate pool is empty")
    if budget < 1:
        raise SelectionError("budget must be >= 1")
    n_cols = matrix.n_cols if isinstance(matrix, FeatureMatrix) else np.shape(matrix)[1]
    if any(not 0 <= i < n_cols for i in pool):
        raise SelectionError("candidate pool index out of range")
    if isinstance(matrix, FeatureMatrix):
        Xpool = np.ascontiguousarray(matrix.csr[:, list(pool)].toarray(), dtype=np.float64)
    else:
        Xpool = as_dense(matrix)[:, list(pool)]
    y = encode_labels(resolve_labels(matrix, labels), Xpool.shape[0])
    _check_loocv(y)
    n = Xpool.shape[0]
    col_of = {f: k for k, f in enumerate(pool)}

    chosen: list[int] = []
    remaining = sorted(pool)
    steps: list[TraceStep] = []
    while remaining and len(chosen) < budget:
        def score(f: int) -> int:
            cols = [col_of[c] for c in chosen + [f]]
            return _loocv_correct(np.ascontiguousarray(Xpool[:, cols]), y, spec)

        results = parallel_map(score, remaining)
        # remaining is ascending, so the first maximum is the lowest index
        best = int(np.argmax(results))
        f = remaining.pop(best)
        chosen.append(f)
        steps.append(TraceStep(f, len(chosen), results[best] / n, results[best]))

    top = max(s.n_correct for s in steps)
    chosen_size = next(s.subset_size for s in steps if s.n_correct == top)
    trace = SelectionTrace(tuple(steps), chosen_size)
    return FeatureSubset(tuple(chosen[:chosen_size]), "forward_wrapper"), trace


# --------------------------------------------------------------------------
# report files
# --------------------------------------------------------------------------

def write_ig_report(path: str | Path, scores: Sequence[IgScore], terms: Sequence[str]) -> None:
    """CSV ``term,term_index,gain`` sorted by descending gain (ties by index)."""
    rows = sorted(scores, key=lambda s: (-s.gain, s.term_index))
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["term", "term_index", "gain"])
        for s in rows:
            w.writerow([terms[s.term_index], s.term_index, repr(s.gain)])


def write_selection_trace(path: str | Path, trace: SelectionTrace, terms: Sequence[str]) -> None:
    """CSV ``step,added_term,subset_size,loocv_accuracy``."""
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["step", "added_term", "subset_size", "loocv_accuracy"])
        for k, s in enumerate(trace.steps, start=1):
            w.writerow([k, terms[s.added_index], s.subset_size, repr(s.loocv_accuracy)])
