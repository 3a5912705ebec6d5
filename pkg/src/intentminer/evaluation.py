"""Stratified k-fold plans, confusion-matrix metrics and cross-validation reports."""
from __future__ import annotations

import csv
import json
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from ._accel import parallel_map
from .classifiers import ClassifierSpec, fit_arrays
from .classifiers._data import as_dense, encode_labels, resolve_labels
from .corpus import NO, YES
from .errors import EvaluationError, TrainingError
from .vectorize import FeatureSubset


@dataclass(frozen=True)
class FoldPlan:
    k: int
    assignments: tuple[int, ...]
    seed: int

    def test_rows(self, fold: int) -> np.ndarray:
        return np.flatnonzero(np.asarray(self.assignments) == fold)

    def train_rows(self, fold: int) -> np.ndarray:
        return np.flatnonzero(np.asarray(self.assignments) != fold)

    def sizes(self) -> list[int]:
        return np.bincount(np.asarray(self.assignments), minlength=self.k).tolist()


def kfold_split(n: int, k: int, seed: int = 0, labels: Sequence | None = None) -> FoldPlan:
    """Seeded shuffle then round-robin fold assignment.

    With ``labels`` the shuffle happens inside each class (Yes block first)
    before the round-robin, so every fold gets a near-equal share of both
    classes.  Fold sizes always differ by at most one.
    """
    if k < 2:
        raise EvaluationError(f"need at least 2 folds, got k={k}")
    if k > n:
        raise EvaluationError(f"cannot split {n} rows into {k} folds")
    rng = np.random.default_rng(seed)
    if labels is None:
        order = rng.permutation(n)
    else:
        y = encode_labels(labels, n)
        order = np.concatenate([rng.permutation(np.flatnonzero(y == c)) for c in (1, 0)])
    assignments = np.empty(n, dtype=np.int64)
    assignments[order] = np.arange(n) % k
    return FoldPlan(k, tuple(int(a) for a in assignments), seed)


@dataclass(frozen=True)
class Metrics:
    tp: int
    fp: int
    fn: int
    tn: int
    recall: float | None
    precision: float | None
    f_measure: float | None
    accuracy: float | None
    undefined: dict[str, str] = field(default_factory=dict)

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn

    @classmethod
    def from_counts(cls, tp: int, fp: int, fn: int, tn: int) -> "Metrics":
        why: dict[str, str] = {}
        recall = tp / (tp + fn) if tp + fn else None
        if recall is None:
            why["recall"] = "no positive rows in the truth (tp + fn = 0)"
        precision = tp / (tp + fp) if tp + fp else None
        if precision is None:
            why["precision"] = "no positive predictions (tp + fp = 0)"
        if recall is None or precision is None:
            f = None
            why["f_measure"] = "precision or recall undefined"
        elif precision + recall == 0:
            f = None
            why["f_measure"] = "precision + recall = 0"
        else:
            f = 2 * precision * recall / (precision + recall)
        total = tp + fp + fn + tn
        accuracy = (tp + tn) / total if total else None
        if accuracy is None:
            why["accuracy"] = "no rows evaluated"
        return cls(tp, fp, fn, tn, recall, precision, f, accuracy, why)

    def to_dict(self) -> dict:
        out = {"tp": self.tp, "fp": self.fp, "fn": self.fn, "tn": self.tn,
               "recall": self.recall, "precision": self.precision, "f": self.f_measure,
               "accuracy": self.accuracy}
        if self.undefined:
            out["undefined"] = dict(self.undefined)
        return out


def confusion_and_metrics(predicted: Sequence, truth: Sequence, positive: str = YES) -> Metrics:
    """Confusion counts and the four metrics with ``positive`` as the positive class."""
    if len(predicted) != len(truth):
        raise EvaluationError(f"length mismatch: {len(predicted)} predictions, {len(truth)} labels")
    if len(truth) < 1:
        raise EvaluationError("nothing to evaluate")
    if positive not in (YES, NO):
        raise EvaluationError(f"positive class must be Yes or No, got {positive!r}")
    p = encode_labels(predicted)
    t = encode_labels(truth)
    if positive == NO:
        p, t = 1 - p, 1 - t
    tp = int(np.sum((p == 1) & (t == 1)))
    fp = int(np.sum((p == 1) & (t == 0)))
    fn = int(np.sum((p == 0) & (t == 1)))
    tn = int(np.sum((p == 0) & (t == 0)))
    return Metrics.from_counts(tp, fp, fn, tn)


@dataclass(frozen=True)
class EvalReport:
    per_fold: tuple[Metrics, ...]
    aggregate: Metrics
    spec: ClassifierSpec
    feature_subset: FeatureSubset | None
    wall_time: float

    def to_dict(self, features: Sequence[str] | None = None, wall_time: bool = True) -> dict:
        if features is None and self.feature_subset is not None:
            features = list(self.feature_subset.indices)
        return {
            "spec": self.spec.to_dict(),
            "features": list(features) if features is not None else None,
            "folds": [m.to_dict() for m in self.per_fold],
            "aggregate": self.aggregate.to_dict(),
            "wall_time_s": self.wall_time if wall_time else None,
        }


def cross_validate(spec: ClassifierSpec, matrix, labels, plan: FoldPlan,
                   feature_subset: FeatureSubset | None = None) -> EvalReport:
    """Train on each fold's complement, predict the fold, pool the confusion counts."""
    start = time.perf_counter()
    X = as_dense(matrix)
    y = encode_labels(resolve_labels(matrix, labels), X.shape[0])
    if len(plan.assignments) != X.shape[0]:
        raise EvaluationError("fold plan does not match the number of rows")
    if len(np.unique(y)) < 2:
        raise EvaluationError("cross-validation needs both classes present")
    assign = np.asarray(plan.assignments)

    def run_fold(fold: int) -> Metrics:
        test = assign == fold
        ytr = y[~test]
        if len(np.unique(ytr)) < 2:
            raise EvaluationError(f"fold {fold}: training complement is single-class")
        try:
            model = fit_arrays(spec, np.ascontiguousarray(X[~test]), ytr)
        except TrainingError as exc:
            raise EvaluationError(f"fold {fold}: {exc}") from exc
        pred = model.predict_codes(np.ascontiguousarray(X[test]))
        truth = y[test]
        return Metrics.from_counts(int(np.sum((pred == 1) & (truth == 1))),
                                   int(np.sum((pred == 1) & (truth == 0))),
                                   int(np.sum((pred == 0) & (truth == 1))),
                                   int(np.sum((pred == 0) & (truth == 0))))

    per_fold = tuple(parallel_map(run_fold, range(plan.k)))
    agg = Metrics.from_counts(sum(m.tp for m in per_fold), sum(m.fp for m in per_fold),
                              sum(m.fn for m in per_fold), sum(m.tn for m in per_fold))
    return EvalReport(per_fold, agg, spec, feature_subset, time.perf_counter() - start)


CSV_HEADER = ["classifier", "feature_selection", "recall", "precision", "f_measure", "accuracy"]


def fmt_metric(v: float | None) -> str:
    return "" if v is None else f"{v:.6f}"


def write_report_json(path: str | Path, report: EvalReport, features: Sequence[str] | None = None,
                      wall_time: bool = True) -> None:
    Path(path).write_text(json.dumps(report.to_dict(features, wall_time), indent=2) + "\n",
                          encoding="utf-8")


def write_report_csv(path: str | Path, rows: Sequence[tuple[str, str, Metrics]]) -> None:
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for classifier, selection, m in rows:
            w.writerow([classifier, selection, fmt_metric(m.recall), fmt_metric(m.precision),
                        fmt_metric(m.f_measure), fmt_metric(m.accuracy)])
