"""Intention mining for short texts.

Seed-phrase labelling, preprocessing, bag-of-words vectors, information-gain
and forward-wrapper feature selection, four native classifiers and k-fold
evaluation.
"""
__version__ = "0.1.0"

from .classifiers import (AnnParams, ClassifierSpec, DtParams, NbParams, SvmParams, load_model,
                          predict, save_model, train)
from .corpus import (Corpus, Document, PreprocessConfig, SeedVector, filter_language, ingest,
                     label_by_seeds, preprocess, write_jsonl)
from .errors import (ConfigError, CorpusError, EvaluationError, IntentMinerError, PipelineError,
                     SelectionError, TrainingError, VocabularyError)
from .evaluation import EvalReport, FoldPlan, Metrics, confusion_and_metrics, cross_validate, kfold_split
from .featsel import (IgScore, SelectionTrace, forward_select, ig_scores, loocv_accuracy, mdl_filter,
                      select_by_ig)
from .pipeline import PipelineConfig, load_config, make_grid, run_matrix, run_pipeline
from .synth import SynthConfig, synth_corpus
from .vectorize import FeatureMatrix, FeatureSubset, Vocabulary, build_vocabulary, project, vectorize

__all__ = [
    "AnnParams", "ClassifierSpec", "ConfigError", "Corpus", "CorpusError", "Document", "DtParams",
    "EvalReport", "EvaluationError", "FeatureMatrix", "FeatureSubset", "FoldPlan", "IgScore",
    "IntentMinerError", "Metrics", "NbParams", "PipelineConfig", "PipelineError",
    "PreprocessConfig", "SeedVector", "SelectionError", "SelectionTrace", "SvmParams",
    "SynthConfig", "TrainingError", "Vocabulary", "VocabularyError", "build_vocabulary",
    "confusion_and_metrics", "cross_validate", "filter_language", "forward_select", "ig_scores",
    "ingest", "kfold_split", "label_by_seeds", "load_config", "load_model", "loocv_accuracy",
    "make_grid", "mdl_filter", "predict", "preprocess", "project", "run_matrix", "run_pipeline",
    "save_model", "select_by_ig", "synth_corpus", "train", "vectorize", "write_jsonl",
]
