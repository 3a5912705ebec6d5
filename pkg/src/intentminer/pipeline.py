"""End-to-end runs: ingest, label, preprocess, select features, cross-validate.

A run is described by a :class:`PipelineConfig` (one JSON document) and
writes its reports into ``output_dir`` only after every stage succeeded.
:func:`run_matrix` runs a directory of configs and collects one summary
row per run.
"""
from __future__ import annotations

import csv
import json
import os
import shutil
import tempfile
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Callable, Sequence

import numpy as np
import scipy

from . import __version__, kernels
from .classifiers import KINDS, ClassifierSpec
from .corpus import Corpus, PreprocessConfig, filter_language, ingest, label_by_seeds, preprocess
from .errors import ConfigError, IntentMinerError, PipelineError
from .evaluation import (CSV_HEADER, EvalReport, fmt_metric, kfold_split, cross_validate,
                         write_report_csv, write_report_json)
from .featsel import (SelectionTrace, forward_select, ig_scores, mdl_filter, select_by_ig,
                      write_ig_report, write_selection_trace)
from .vectorize import MODES, FeatureSubset, build_vocabulary, project, vectorize

SCHEMES = ("none", "one", "two")
IG_ESTIMATORS = ("mdl", "exact")
REPORT_FILES = ("ig_report.csv", "selection_trace.csv", "eval.json", "eval.csv", "manifest.json")
MANIFEST_FORMAT = "intentminer-run"


@dataclass(frozen=True)
class PipelineConfig:
    corpus_path: str
    output_dir: str
    preprocess: PreprocessConfig = PreprocessConfig()
    language: str | None = None
    relabel: bool = False
    min_df: int = 1
    vector_mode: str = "binary"
    ig_threshold: float = 0.0
    # "mdl" zeroes gains that fail the minimum-description-length test
    # before thresholding; "exact" thresholds the raw empirical gain
    ig_estimator: str = "mdl"
    scheme: str = "one"
    wrapper_spec: dict | None = None
    final_spec: dict = field(default_factory=lambda: {"kind": "dt"})
    ffs_budget: int = 20
    ffs_pool_limit: int | None = None
    cv_k: int = 10
    seed: int = 0
    record_wall_time: bool = False

    def __post_init__(self):
        for name in ("corpus_path", "output_dir"):
            value = getattr(self, name)
            if not isinstance(value, str) or not value:
                raise ConfigError(f"{name} must be a nonempty path")
        if self.scheme not in SCHEMES:
            raise ConfigError(f"scheme must be one of {SCHEMES}, got {self.scheme!r}")
        if self.scheme == "two" and self.wrapper_spec is None:
            raise ConfigError("scheme two requires wrapper_spec")
        if self.ig_estimator not in IG_ESTIMATORS:
            raise ConfigError(f"ig_estimator must be one of {IG_ESTIMATORS}")
        if self.vector_mode not in MODES:
            raise ConfigError(f"vector_mode must be one of {MODES}")
        if int(self.cv_k) < 2:
            raise ConfigError("cv_k must be >= 2")
        if int(self.min_df) < 1:
            raise ConfigError("min_df must be >= 1")
        if int(self.ffs_budget) < 1:
            raise ConfigError("ffs_budget must be >= 1")
        if self.ffs_pool_limit is not None and int(self.ffs_pool_limit) < 1:
            raise ConfigError("ffs_pool_limit must be >= 1")
        if isinstance(self.preprocess, dict):
            object.__setattr__(self, "preprocess", PreprocessConfig.from_dict(self.preprocess))
        # parse eagerly so bad specs fail at load time
        self.final()
        if self.wrapper_spec is not None:
            self.wrapper()

    def final(self) -> ClassifierSpec:
        return _spec(self.final_spec, self.seed, "final_spec")

    def wrapper(self) -> ClassifierSpec | None:
        if self.wrapper_spec is None:
            return None
        return _spec(self.wrapper_spec, self.seed, "wrapper_spec")

    @property
    def selection_label(self) -> str:
        if self.scheme == "none":
            return "all-features"
        if self.scheme == "one":
            return "ig-only"
        return f"ig+{self.wrapper().kind}"

    def to_dict(self) -> dict[str, Any]:
        out = {f.name: getattr(self, f.name) for f in fields(self)}
        out["preprocess"] = self.preprocess.to_dict()
        return out

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "PipelineConfig":
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        for name in ("corpus_path", "output_dir"):
            if name not in data:
                raise ConfigError(f"{name} is required")
        return cls(**data)

    def with_overrides(self, **values) -> "PipelineConfig":
        """Copy with every non-None value replaced (command-line flags)."""
        return replace(self, **{k: v for k, v in values.items() if v is not None})


def _spec(data: Any, seed: int, name: str) -> ClassifierSpec:
    if not isinstance(data, dict):
        raise ConfigError(f"{name} must be an object with a 'kind'")
    try:
        return ClassifierSpec.from_dict(data, default_seed=int(seed))
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"{name}: {exc}") from None


def load_config(path: str | Path) -> PipelineConfig:
    """Read a JSON config; relative paths resolve against the config's directory."""
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path.name}: malformed JSON ({exc.msg})") from None
    if isinstance(data, dict) and data.get("format") == MANIFEST_FORMAT:
        data = data["config"]
    if isinstance(data, dict):
        base = path.resolve().parent
        for name in ("corpus_path", "output_dir"):
            value = data.get(name)
            if isinstance(value, str) and value and not Path(value).is_absolute():
                data[name] = str(base / value)
    return PipelineConfig.from_dict(data)


@dataclass(frozen=True)
class PipelineResult:
    config: PipelineConfig
    corpus_stats: dict
    vocabulary_size: int
    ig_subset: FeatureSubset | None
    trace: SelectionTrace | None
    features: tuple[str, ...]
    report: EvalReport
    output_dir: Path


def _stage(name: str, fn: Callable, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except PipelineError:
        raise
    except (IntentMinerError, OSError) as exc:
        raise PipelineError(name, str(exc)) from exc


def _load_corpus(config: PipelineConfig) -> tuple[Corpus, str]:
    if not Path(config.corpus_path).is_file():
        raise PipelineError("ingest", f"corpus_path does not exist: {config.corpus_path}")
    corpus = _stage("ingest", ingest, config.corpus_path)
    if config.language:
        corpus = _stage("ingest", filter_language, corpus, config.language)
    if corpus.n == 0:
        raise PipelineError("ingest", "corpus is empty")
    return _stage("label", apply_labels, corpus, config.relabel)


def apply_labels(corpus: Corpus, relabel: bool = False) -> tuple[Corpus, str]:
    """Seed-label the documents that need it.

    Labelled documents keep their label unless ``relabel`` is set.  Returns
    the corpus and where its labels came from: ``file``, ``seeds`` or
    ``mixed``.
    """
    if not relabel and corpus.is_labeled:
        return corpus, "file"
    seeded = label_by_seeds(corpus)
    if relabel or all(d.label is None for d in corpus):
        return seeded, "seeds"
    docs = tuple(d if d.label is not None else s for d, s in zip(corpus, seeded))
    return replace(corpus, docs=docs), "mixed"


def run_pipeline(config: PipelineConfig) -> PipelineResult:
    """Run every stage and write the report set into ``config.output_dir``.

    Raises :class:`PipelineError` naming the failing stage; in that case
    nothing in ``output_dir`` is touched.
    """
    corpus, label_source = _load_corpus(config)
    corpus = _stage("preprocess", preprocess, corpus, config.preprocess)
    vocab = _stage("vectorize", build_vocabulary, corpus, config.min_df)
    matrix = _stage("vectorize", vectorize, corpus, vocab, config.vector_mode)

    scores = ig_subset = trace = None
    if config.scheme == "none":
        subset = FeatureSubset(tuple(range(vocab.size)), "manual")
    else:
        scores = _stage("ig", ig_scores, matrix)
        ranked = scores
        if config.ig_estimator == "mdl":
            ranked = _stage("ig", mdl_filter, scores, matrix)
        ig_subset = _stage("ig", select_by_ig, ranked, config.ig_threshold)
        subset = ig_subset
        if config.scheme == "two":
            pool = ig_subset.indices
            if config.ffs_pool_limit is not None:
                pool = pool[:int(config.ffs_pool_limit)]
            subset, trace = _stage("select", forward_select, matrix, None, config.wrapper(),
                                   pool, int(config.ffs_budget))

    projected = project(matrix, subset)
    plan = _stage("evaluate", kfold_split, projected.n_rows, int(config.cv_k), int(config.seed),
                  projected.row_labels)
    final = config.final()
    report = _stage("evaluate", cross_validate, final, projected, None, plan, subset)
    terms = tuple(vocab.terms[i] for i in subset.indices)

    stats = {
        "n_docs": corpus.n,
        "class_counts": corpus.class_counts(),
        "label_source": label_source,
        "n_empty_docs": sum(1 for d in corpus if not d.tokens),
    }
    selection = {
        "label": config.selection_label,
        "vocabulary_size": vocab.size,
        "ig_selected": len(ig_subset) if ig_subset is not None else None,
        "ig_cut_fraction": (1 - len(ig_subset) / vocab.size) if ig_subset is not None else None,
        "ffs_chosen": trace.chosen_size if trace is not None else None,
        "n_features": len(subset),
        "features": list(terms),
    }
    manifest = {
        "format": MANIFEST_FORMAT,
        "version": 1,
        "config": config.to_dict(),
        "corpus": stats,
        "selection": selection,
        "fold_sizes": plan.sizes(),
        "versions": {"intentminer": __version__, "numpy": np.__version__,
                     "scipy": scipy.__version__, "kernel_backend": kernels.BACKEND},
    }
    out = Path(config.output_dir)
    _stage("write", _write_reports, out, vocab.terms, scores, trace, report, terms, manifest,
           config)
    return PipelineResult(config, stats, vocab.size, ig_subset, trace, terms, report, out)


def _write_reports(out: Path, vocab_terms, scores, trace, report, terms, manifest, config):
    out.parent.mkdir(parents=True, exist_ok=True)
    tmp = Path(tempfile.mkdtemp(prefix=f".{out.name}-", dir=out.parent))
    try:
        written = []
        if scores is not None:
            write_ig_report(tmp / "ig_report.csv", scores, vocab_terms)
            written.append("ig_report.csv")
        if trace is not None:
            write_selection_trace(tmp / "selection_trace.csv", trace, vocab_terms)
            written.append("selection_trace.csv")
        write_report_json(tmp / "eval.json", report, list(terms), config.record_wall_time)
        write_report_csv(tmp / "eval.csv", [(report.spec.kind, config.selection_label,
                                             report.aggregate)])
        (tmp / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
        written += ["eval.json", "eval.csv", "manifest.json"]
        out.mkdir(parents=True, exist_ok=True)
        for name in REPORT_FILES:
            if name in written:
                os.replace(tmp / name, out / name)
            elif (out / name).exists():
                (out / name).unlink()
    finally:
        shutil.rmtree(tmp, ignore_errors=True)


# --------------------------------------------------------------------------
# configuration matrix
# --------------------------------------------------------------------------

SELECTION_ORDER = ("all-features", "ig-only", "ig+nb", "ig+svm", "ig+ann", "ig+dt")
CLASSIFIER_ORDER = ("dt", "nb", "svm", "ann")
SUMMARY_HEADER = CSV_HEADER + ["n_features", "error"]


def make_grid(base: PipelineConfig, config_dir: str | Path,
              wrappers: Sequence[str] = ("nb", "svm", "ann", "dt"),
              classifiers: Sequence[str] = CLASSIFIER_ORDER) -> list[Path]:
    """Write one config per (selection setting, classifier) derived from ``base``.

    The corpus path is written absolute so the configs work from any
    directory; run outputs stay relative to the config directory.
    """
    config_dir = Path(config_dir)
    corpus_path = str(Path(base.corpus_path).resolve())
    config_dir.mkdir(parents=True, exist_ok=True)
    settings = [("all-features", "none", None), ("ig-only", "one", None)]
    settings += [(f"ig+{w}", "two", {"kind": w}) for w in wrappers]
    paths = []
    for label, scheme, wrapper in settings:
        for kind in classifiers:
            if kind not in KINDS:
                raise ConfigError(f"unknown classifier kind {kind!r}")
            cfg = replace(base, corpus_path=corpus_path, scheme=scheme, wrapper_spec=wrapper, final_spec={"kind": kind},
                          output_dir=f"runs/{label}__{kind}")
            path = config_dir / f"{label}__{kind}.json"
            path.write_text(json.dumps(cfg.to_dict(), indent=2) + "\n", encoding="utf-8")
            paths.append(path)
    return paths


def _row_key(label: str, kind: str, stem: str):
    sel = SELECTION_ORDER.index(label) if label in SELECTION_ORDER else len(SELECTION_ORDER)
    clf = CLASSIFIER_ORDER.index(kind) if kind in CLASSIFIER_ORDER else len(CLASSIFIER_ORDER)
    return sel, label, clf, kind, stem


def run_matrix(config_dir: str | Path, output_dir: str | Path) -> Path:
    """Run every ``*.json`` config in ``config_dir``; write ``summary.csv``.

    Each run writes into ``output_dir/<config name>``.  A failing run
    becomes a row with empty metrics and the error message.
    """
    config_dir = Path(config_dir)
    paths = sorted(config_dir.glob("*.json")) if config_dir.is_dir() else []
    if not paths:
        raise ConfigError(f"no *.json configs in {config_dir}")
    output_dir = Path(output_dir)
    rows = []
    for path in paths:
        label, kind = path.stem, ""
        try:
            cfg = load_config(path)
            label, kind = cfg.selection_label, cfg.final().kind
            cfg = replace(cfg, output_dir=str(output_dir / path.stem))
            res = run_pipeline(cfg)
            m = res.report.aggregate
            row = [kind, label, fmt_metric(m.recall), fmt_metric(m.precision),
                   fmt_metric(m.f_measure), fmt_metric(m.accuracy), str(len(res.features)), ""]
        except IntentMinerError as exc:
            row = [kind, label, "", "", "", "", "", str(exc)]
        rows.append((_row_key(label, kind, path.stem), row))
    rows.sort(key=lambda r: r[0])
    output_dir.mkdir(parents=True, exist_ok=True)
    summary = output_dir / "summary.csv"
    tmp = output_dir / ".summary.csv.tmp"
    with tmp.open("w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SUMMARY_HEADER)
        for _, row in rows:
            w.writerow(row)
    os.replace(tmp, summary)
    return summary
