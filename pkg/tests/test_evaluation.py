import csv
import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from intentminer import ClassifierSpec, EvaluationError, confusion_and_metrics, cross_validate, kfold_split
from intentminer.evaluation import FoldPlan, Metrics, write_report_csv, write_report_json
from intentminer.featsel import loocv_accuracy


class TestKfoldSplit:
    def test_loocv_limit(self):
        plan = kfold_split(10, 10)
        assert plan.sizes() == [1] * 10
        assert sorted(plan.assignments) == list(range(10))

    def test_full_scale_partition(self):
        sizes = kfold_split(5896, 10, seed=3).sizes()
        assert sorted(sizes) == [589] * 4 + [590] * 6

    @pytest.mark.parametrize("n,k", [(3, 5), (10, 1), (10, 0)])
    def test_infeasible(self, n, k):
        with pytest.raises(EvaluationError):
            kfold_split(n, k)

    def test_deterministic_per_seed(self):
        assert kfold_split(50, 5, seed=1) == kfold_split(50, 5, seed=1)
        assert kfold_split(50, 5, seed=1).assignments != kfold_split(50, 5, seed=2).assignments

    @given(st.integers(2, 200), st.integers(2, 12), st.integers(0, 1000))
    def test_balanced_partition(self, n, k, seed):
        if k > n:
            return
        plan = kfold_split(n, k, seed)
        sizes = plan.sizes()
        assert sum(sizes) == n
        assert max(sizes) - min(sizes) <= 1
        for f in range(k):
            both = np.concatenate([plan.test_rows(f), plan.train_rows(f)])
            assert sorted(both.tolist()) == list(range(n))

    @given(st.integers(0, 60), st.integers(0, 60), st.integers(2, 10), st.integers(0, 100))
    def test_stratified_class_shares(self, n_yes, n_no, k, seed):
        if n_yes + n_no < k:
            return
        labels = ["Yes"] * n_yes + ["No"] * n_no
        plan = kfold_split(len(labels), k, seed, labels=labels)
        assign = np.asarray(plan.assignments)
        yes_per_fold = np.bincount(assign[:n_yes], minlength=k)
        assert max(plan.sizes()) - min(plan.sizes()) <= 1
        assert yes_per_fold.max() - yes_per_fold.min() <= 1


class TestMetrics:
    def test_worked_example(self):
        m = Metrics.from_counts(tp=8, fp=2, fn=1, tn=9)
        assert m.precision == 0.8
        assert m.accuracy == 0.85
        assert m.recall == pytest.approx(0.8889, abs=1e-4)
        assert m.f_measure == pytest.approx(0.8421, abs=1e-4)
        assert m.recall == pytest.approx(8 / 9, abs=1e-15)
        assert m.f_measure == pytest.approx(16 / 19, abs=1e-15)

    def test_from_label_lists(self):
        truth = ["Yes"] * 9 + ["No"] * 11
        pred = ["Yes"] * 8 + ["No"] + ["Yes"] * 2 + ["No"] * 9
        m = confusion_and_metrics(pred, truth)
        assert (m.tp, m.fp, m.fn, m.tn) == (8, 2, 1, 9)

    def test_perfect(self):
        m = confusion_and_metrics(["Yes", "No"], ["Yes", "No"])
        assert (m.recall, m.precision, m.f_measure, m.accuracy) == (1.0, 1.0, 1.0, 1.0)

    def test_degenerate_denominators_reported(self):
        m = confusion_and_metrics(["No", "No"], ["No", "No"])
        assert m.recall is None and m.precision is None and m.f_measure is None
        assert m.accuracy == 1.0
        assert set(m.undefined) == {"recall", "precision", "f_measure"}
        assert m.to_dict()["undefined"]["recall"].startswith("no positive")

    def test_zero_precision_and_recall(self):
        m = confusion_and_metrics(["Yes", "No"], ["No", "Yes"])
        assert (m.precision, m.recall, m.f_measure) == (0.0, 0.0, None)
        assert "f_measure" in m.undefined

    def test_positive_no(self):
        m = confusion_and_metrics(["Yes", "No", "No"], ["Yes", "No", "Yes"], positive="No")
        assert (m.tp, m.fp, m.fn, m.tn) == (1, 1, 0, 1)

    @pytest.mark.parametrize("pred,truth", [(["Yes"], ["Yes", "No"]), ([], [])])
    def test_errors(self, pred, truth):
        with pytest.raises(EvaluationError):
            confusion_and_metrics(pred, truth)

    def test_invalid_positive(self):
        with pytest.raises(EvaluationError):
            confusion_and_metrics(["Yes"], ["Yes"], positive="Maybe")

    @given(st.lists(st.tuples(st.booleans(), st.booleans()), min_size=1, max_size=60))
    def test_counts_partition_rows(self, pairs):
        pred = ["Yes" if p else "No" for p, _ in pairs]
        truth = ["Yes" if t else "No" for _, t in pairs]
        m = confusion_and_metrics(pred, truth)
        assert m.total == len(pairs)
        assert m.accuracy == sum(p == t for p, t in pairs) / len(pairs)
        for v in (m.recall, m.precision, m.f_measure):
            assert v is None or 0.0 <= v <= 1.0


def separable_single_feature():
    X = np.array([[0.0]] * 6 + [[1.0]] * 6)
    y = ["No"] * 6 + ["Yes"] * 6
    return X, y


def pooled_matches_folds(report):
    for name in ("tp", "fp", "fn", "tn"):
        assert getattr(report.aggregate, name) == sum(getattr(m, name) for m in report.per_fold)


class TestCrossValidate:
    def test_separable_dt_two_folds(self):
        X, y = separable_single_feature()
        plan = kfold_split(len(y), 2, seed=0, labels=y)
        report = cross_validate(ClassifierSpec("dt"), X, y, plan)
        assert report.aggregate.accuracy == 1.0
        assert len(report.per_fold) == 2
        pooled_matches_folds(report)

    @pytest.mark.parametrize("kind", ["dt", "nb", "svm"])
    def test_k_equal_n_is_loocv(self, kind, rng):
        X = (rng.random((24, 3)) < 0.5).astype(float)
        y = ["Yes" if r[0] or (r[1] and r[2]) else "No" for r in X]
        y[0] = "No" if y[0] == "Yes" else "Yes"
        spec = ClassifierSpec(kind)
        report = cross_validate(spec, X, y, kfold_split(24, 24))
        assert report.aggregate.accuracy == pytest.approx(loocv_accuracy(X, y, spec), abs=1e-15)

    def test_pooled_aggregate_random(self, rng):
        for kind in ("dt", "nb", "svm", "ann"):
            X = (rng.random((40, 4)) < 0.4).astype(float)
            y = ["Yes" if r[0] + r[1] >= 1 else "No" for r in X]
            params = {"hidden_layers": [4, 4]} if kind == "ann" else None
            report = cross_validate(ClassifierSpec(kind, params), X, y,
                                    kfold_split(40, 5, seed=2, labels=y))
            pooled_matches_folds(report)
            assert report.aggregate.total == 40

    def test_single_class_complement_names_fold(self):
        X = np.arange(4, dtype=float)[:, None]
        y = ["Yes", "Yes", "No", "No"]
        # fold 0 holds both No rows, leaving a Yes-only complement
        plan = FoldPlan(2, (1, 1, 0, 0), 0)
        with pytest.raises(EvaluationError, match="fold 0"):
            cross_validate(ClassifierSpec("dt"), X, y, plan)

    def test_single_class_overall(self):
        with pytest.raises(EvaluationError):
            cross_validate(ClassifierSpec("dt"), np.eye(4), ["Yes"] * 4, kfold_split(4, 2))

    def test_plan_size_mismatch(self):
        X, y = separable_single_feature()
        with pytest.raises(EvaluationError):
            cross_validate(ClassifierSpec("dt"), X, y, kfold_split(5, 2))

    def test_deterministic(self, rng):
        X = (rng.random((30, 4)) < 0.5).astype(float)
        y = ["Yes" if r[0] else "No" for r in X]
        plan = kfold_split(30, 3, seed=1, labels=y)
        spec = ClassifierSpec("ann", {"hidden_layers": [4, 4], "epochs": 2}, seed=4)
        a = cross_validate(spec, X, y, plan).to_dict(wall_time=False)
        b = cross_validate(spec, X, y, plan).to_dict(wall_time=False)
        assert a == b

    def test_threaded_equals_serial(self, rng, monkeypatch):
        X = (rng.random((30, 4)) < 0.5).astype(float)
        y = ["Yes" if r[0] else "No" for r in X]
        plan = kfold_split(30, 5, seed=1, labels=y)
        serial = cross_validate(ClassifierSpec("dt"), X, y, plan).to_dict(wall_time=False)
        monkeypatch.setenv("INTENTMINER_THREADS", "4")
        threaded = cross_validate(ClassifierSpec("dt"), X, y, plan).to_dict(wall_time=False)
        assert serial == threaded


class TestReportWriters:
    def test_json_and_csv(self, tmp_path):
        X, y = separable_single_feature()
        report = cross_validate(ClassifierSpec("dt"), X, y, kfold_split(12, 3, labels=y))
        write_report_json(tmp_path / "eval.json", report, features=["want"], wall_time=False)
        data = json.loads((tmp_path / "eval.json").read_text())
        assert data["features"] == ["want"]
        assert data["wall_time_s"] is None
        assert data["aggregate"]["accuracy"] == 1.0
        assert len(data["folds"]) == 3
        write_report_csv(tmp_path / "eval.csv", [("dt", "ig-only", report.aggregate)])
        rows = list(csv.reader((tmp_path / "eval.csv").open()))
        assert rows[0] == ["classifier", "feature_selection", "recall", "precision", "f_measure",
                           "accuracy"]
        assert rows[1] == ["dt", "ig-only", "1.000000", "1.000000", "1.000000", "1.000000"]

    def test_csv_leaves_undefined_blank(self, tmp_path):
        m = Metrics.from_counts(0, 0, 0, 3)
        write_report_csv(tmp_path / "r.csv", [("nb", "all-features", m)])
        assert (tmp_path / "r.csv").read_text().splitlines()[1] == "nb,all-features,,,,1.000000"
