"""The four learners behind one train/predict contract."""
from __future__ import annotations

import json
from pathlib import Path
from typing import Union

import numpy as np

from ..errors import TrainingError
from ._data import aggregate, as_dense, decode_labels, encode_labels, require_two_classes, resolve_labels
from .ann import AnnModel, ann_forward, ann_gradient, fit_ann, init_network, xavier_bound
from .bayes import NaiveBayesModel, fit_naive_bayes
from .spec import KINDS, AnnParams, ClassifierSpec, DtParams, NbParams, SvmParams
from .svm import SmoResult, SvmModel, fit_svm, rbf_kernel, smo
from .tree import DecisionTreeModel, fit_tree, gini_impurity

TrainedModel = Union[DecisionTreeModel, NaiveBayesModel, SvmModel, AnnModel]

MODEL_FORMAT_VERSION = 1

# learners whose fit depends only on the multiset of training rows
WEIGHTED_KINDS = frozenset({"dt", "nb", "svm"})

_MODEL_CLASSES = {"dt": DecisionTreeModel, "nb": NaiveBayesModel, "svm": SvmModel, "ann": AnnModel}


def fit_weighted(spec: ClassifierSpec, Xu: np.ndarray, yu: np.ndarray, wu: np.ndarray) -> TrainedModel:
    """Fit dt/nb/svm on aggregated rows as returned by :func:`aggregate`."""
    require_two_classes(yu, wu)
    if spec.kind == "dt":
        return fit_tree(Xu, yu, wu, spec.params)
    if spec.kind == "nb":
        return fit_naive_bayes(Xu, yu, wu, spec.params)
    if spec.kind == "svm":
        return fit_svm(Xu, yu, wu, spec.params)
    raise TrainingError(f"{spec.kind} cannot be fit on weighted rows")


def fit_arrays(spec: ClassifierSpec, X: np.ndarray, y: np.ndarray) -> TrainedModel:
    """Fit on a dense matrix and 0/1 labels (already validated)."""
    require_two_classes(y)
    if spec.kind in WEIGHTED_KINDS:
        return fit_weighted(spec, *aggregate(X, y))
    return fit_ann(X, y, spec.params, spec.seed)


def train(spec: ClassifierSpec, matrix, labels=None) -> TrainedModel:
    """Fit ``spec`` on every row of ``matrix``.

    ``labels`` defaults to the matrix's row labels.  Deterministic for a
    given spec seed and data.
    """
    X = as_dense(matrix)
    y = encode_labels(resolve_labels(matrix, labels), X.shape[0])
    return fit_arrays(spec, X, y)


def predict_codes(model: TrainedModel, matrix) -> np.ndarray:
    X = as_dense(matrix)
    if X.shape[1] != model.n_features:
        raise TrainingError(f"model expects {model.n_features} features, got {X.shape[1]}")
    return model.predict_codes(X)


def predict(model: TrainedModel, matrix) -> list[str]:
    """Yes/No prediction for every row."""
    return decode_labels(predict_codes(model, matrix))


def spec_of(model: TrainedModel, seed: int = 0) -> ClassifierSpec:
    return ClassifierSpec(model.kind, model.params, seed)


def model_to_dict(model: TrainedModel, spec: ClassifierSpec | None = None,
                  terms: list[str] | None = None) -> dict:
    spec = spec or spec_of(model)
    out = {
        "format": "intentminer-model",
        "version": MODEL_FORMAT_VERSION,
        "kind": model.kind,
        "spec": spec.to_dict(),
        "model": model.to_dict(),
    }
    if terms is not None:
        out["terms"] = list(terms)
    return out


def model_from_dict(data: dict) -> TrainedModel:
    if data.get("format") != "intentminer-model":
        raise TrainingError("not an intentminer model document")
    if data.get("version") != MODEL_FORMAT_VERSION:
        raise TrainingError(f"unsupported model format version {data.get('version')!r}")
    spec = ClassifierSpec.from_dict(data["spec"])
    return _MODEL_CLASSES[spec.kind].from_dict(data["model"], spec.params)


def save_model(model: TrainedModel, path: str | Path, spec: ClassifierSpec | None = None,
               terms: list[str] | None = None) -> None:
    Path(path).write_text(json.dumps(model_to_dict(model, spec, terms)), encoding="utf-8")


def load_model(path: str | Path) -> tuple[TrainedModel, dict]:
    """Return the model and the raw document (for ``terms`` and ``spec``)."""
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    return model_from_dict(data), data


__all__ = [
    "KINDS", "AnnModel", "AnnParams", "ClassifierSpec", "DecisionTreeModel", "DtParams",
    "NaiveBayesModel", "NbParams", "SmoResult", "SvmModel", "SvmParams", "TrainedModel",
    "aggregate", "ann_forward", "ann_gradient", "as_dense", "encode_labels", "decode_labels",
    "fit_arrays", "fit_weighted", "gini_impurity", "init_network", "load_model",
    "model_from_dict", "model_to_dict", "predict", "predict_codes", "rbf_kernel", "save_model",
    "smo", "train", "xavier_bound",
]
