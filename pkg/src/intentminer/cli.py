"""Command-line entry point: ``intentminer <subcommand> ...``."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from . import __version__
from .classifiers import KINDS, ClassifierSpec, load_model, predict, save_model, train
from .corpus import PreprocessConfig, filter_language, ingest, preprocess, write_jsonl
from .errors import ConfigError, IntentMinerError, PipelineError
from .evaluation import (confusion_and_metrics, cross_validate, kfold_split, write_report_csv,
                         write_report_json)
from .featsel import (forward_select, ig_scores, mdl_filter, select_by_ig, write_ig_report,
                      write_selection_trace)
from .pipeline import IG_ESTIMATORS, apply_labels, load_config, make_grid, run_matrix, run_pipeline
from .synth import SynthConfig, write_synth
from .vectorize import MODES, FeatureSubset, Vocabulary, build_vocabulary, project, vectorize


def _spec_from_args(args, kind: str | None = None) -> ClassifierSpec:
    data = {"kind": kind or args.kind}
    if getattr(args, "params", None):
        try:
            data["params"] = json.loads(args.params)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"--params is not valid JSON ({exc.msg})") from None
    return ClassifierSpec.from_dict(data, default_seed=args.seed)


def _load_labelled(path: str, relabel: bool, lang: str | None = None):
    corpus = ingest(path)
    if lang:
        corpus = filter_language(corpus, lang)
    return apply_labels(corpus, relabel)[0]


def _tokens_ready(corpus, config: PreprocessConfig):
    """Use stored tokens when any document has them, else preprocess with defaults."""
    if any(d.tokens for d in corpus):
        return corpus
    return preprocess(corpus, config)


def _read_features(path: str | None) -> list[str] | None:
    if path is None:
        return None
    terms = [t for t in Path(path).read_text(encoding="utf-8").split("\n") if t]
    if not terms:
        raise ConfigError(f"{path}: no features listed")
    return terms


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------

def cmd_synth(args) -> int:
    cfg = SynthConfig(n_yes=args.n_yes, n_no=args.n_no, noise=args.noise, seed=args.seed,
                      non_english=args.non_english)
    corpus = write_synth(args.output, cfg)
    counts = corpus.class_counts()
    print(f"wrote {corpus.n} documents ({counts['Yes']} Yes / {counts['No']} No) to {args.output}")
    return 0


def cmd_ingest(args) -> int:
    corpus = _load_labelled(args.input, args.relabel, args.lang)
    write_jsonl(corpus, args.output, with_tokens=False)
    counts = corpus.class_counts()
    print(f"wrote {corpus.n} documents ({counts['Yes']} Yes / {counts['No']} No) to {args.output}")
    return 0


def _preprocess_config(args) -> PreprocessConfig:
    return PreprocessConfig(strip_urls=not args.keep_urls, lowercase=not args.no_lowercase,
                            remove_punct=not args.keep_punct,
                            remove_stopwords=not args.keep_stopwords, pos_filter=args.pos_filter,
                            stopword_list_id=args.stopword_list)


def cmd_preprocess(args) -> int:
    corpus = preprocess(ingest(args.input), _preprocess_config(args))
    write_jsonl(corpus, args.output)
    print(f"wrote {corpus.n} preprocessed documents to {args.output}")
    return 0


def cmd_select(args) -> int:
    corpus = _tokens_ready(_load_labelled(args.input, args.relabel), PreprocessConfig())
    vocab = build_vocabulary(corpus, args.min_df)
    matrix = vectorize(corpus, vocab, args.mode)
    scores = ig_scores(matrix)
    ranked = mdl_filter(scores, matrix) if args.ig_estimator == "mdl" else scores
    subset = select_by_ig(ranked, args.threshold)
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    vocab.save(out / "vocabulary.txt")
    matrix.save(out / "matrix.txt")
    write_ig_report(out / "ig_report.csv", scores, vocab.terms)
    if args.scheme == "two":
        spec = _spec_from_args(args, args.wrapper)
        pool = subset.indices[:args.pool_limit] if args.pool_limit else subset.indices
        subset, trace = forward_select(matrix, None, spec, pool, args.budget)
        write_selection_trace(out / "selection_trace.csv", trace, vocab.terms)
    terms = [vocab.terms[i] for i in subset.indices]
    (out / "features.txt").write_text("".join(t + "\n" for t in terms), encoding="utf-8")
    print(f"selected {len(terms)} of {vocab.size} terms; wrote reports to {out}")
    return 0


def _matrix_for(corpus, features: list[str] | None, mode: str):
    if features is None:
        vocab = build_vocabulary(corpus)
        return vectorize(corpus, vocab, mode), list(vocab.terms)
    vocab = Vocabulary(tuple(sorted(set(features))))
    matrix = vectorize(corpus, vocab, mode)
    return project(matrix, [vocab.index[t] for t in features]), list(features)


def cmd_train(args) -> int:
    corpus = _tokens_ready(_load_labelled(args.input, args.relabel), PreprocessConfig())
    matrix, terms = _matrix_for(corpus, _read_features(args.features), args.mode)
    spec = _spec_from_args(args)
    model = train(spec, matrix)
    save_model(model, args.output, spec, terms)
    print(f"trained {spec.kind} on {matrix.n_rows} rows x {matrix.n_cols} features; "
          f"saved to {args.output}")
    return 0


def cmd_evaluate(args) -> int:
    corpus = _tokens_ready(_load_labelled(args.input, args.relabel), PreprocessConfig())
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    if args.model:
        model, doc = load_model(args.model)
        terms = doc.get("terms")
        if terms is None:
            raise ConfigError(f"{args.model}: model document carries no terms")
        matrix, _ = _matrix_for(corpus, terms, args.mode)
        metrics = confusion_and_metrics(predict(model, matrix), corpus.labels)
        (out / "eval.json").write_text(
            json.dumps({"spec": doc["spec"], "features": terms, "folds": [],
                        "aggregate": metrics.to_dict(), "wall_time_s": None}, indent=2) + "\n",
            encoding="utf-8")
        write_report_csv(out / "eval.csv", [(doc["kind"], "holdout", metrics)])
    else:
        matrix, terms = _matrix_for(corpus, _read_features(args.features), args.mode)
        spec = _spec_from_args(args)
        plan = kfold_split(matrix.n_rows, args.k, args.seed, matrix.row_labels)
        report = cross_validate(spec, matrix, None, plan,
                                FeatureSubset(tuple(range(matrix.n_cols)), "manual"))
        write_report_json(out / "eval.json", report, terms, wall_time=False)
        label = "all-features" if args.features is None else "manual"
        write_report_csv(out / "eval.csv", [(spec.kind, label, report.aggregate)])
        metrics = report.aggregate
    print(f"accuracy {metrics.accuracy:.4f}; wrote eval.json and eval.csv to {out}")
    return 0


def cmd_pipeline(args) -> int:
    config = load_config(args.config).with_overrides(
        output_dir=args.output_dir, seed=args.seed, relabel=True if args.relabel else None)
    res = run_pipeline(config)
    m = res.report.aggregate
    print(f"{config.selection_label} / {config.final().kind}: {len(res.features)} features, "
          f"accuracy {m.accuracy:.4f}; reports in {res.output_dir}")
    return 0


def cmd_matrix(args) -> int:
    if args.init:
        paths = make_grid(load_config(args.init), args.config_dir)
        print(f"wrote {len(paths)} configs to {args.config_dir}")
        if args.no_run:
            return 0
    summary = run_matrix(args.config_dir, args.output_dir)
    print(f"wrote {summary}")
    return 0


# --------------------------------------------------------------------------
# argument parsing
# --------------------------------------------------------------------------

def _add_spec_args(p, kind_default: str = "dt") -> None:
    p.add_argument("--kind", choices=KINDS, default=kind_default, help="classifier kind")
    p.add_argument("--params", help="classifier parameters as a JSON object")
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="intentminer", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a synthetic labelled corpus")
    p.add_argument("--output", required=True)
    p.add_argument("--n-yes", type=int, default=3452)
    p.add_argument("--n-no", type=int, default=2444)
    p.add_argument("--noise", type=float, default=0.10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--non-english", type=int, default=0)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("ingest", help="read JSONL/CSV, filter language, label unlabelled docs")
    p.add_argument("input")
    p.add_argument("--output", required=True)
    p.add_argument("--lang")
    p.add_argument("--relabel", action="store_true", help="relabel every document from seeds")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("preprocess", help="tokenize and filter text")
    p.add_argument("input")
    p.add_argument("--output", required=True)
    p.add_argument("--keep-urls", action="store_true")
    p.add_argument("--no-lowercase", action="store_true")
    p.add_argument("--keep-punct", action="store_true")
    p.add_argument("--keep-stopwords", action="store_true")
    p.add_argument("--pos-filter", action="store_true")
    p.add_argument("--stopword-list", default=PreprocessConfig().stopword_list_id)
    p.set_defaults(func=cmd_preprocess)

    p = sub.add_parser("select", help="information gain filter, optionally followed by the wrapper")
    p.add_argument("input")
    p.add_argument("--output-dir", required=True)
    p.add_argument("--scheme", choices=("one", "two"), default="one")
    p.add_argument("--wrapper", choices=KINDS, default="dt")
    p.add_argument("--params", help="wrapper classifier parameters as a JSON object")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=20)
    p.add_argument("--pool-limit", type=int)
    p.add_argument("--min-df", type=int, default=1)
    p.add_argument("--mode", choices=MODES, default="binary")
    p.add_argument("--threshold", type=float, default=0.0)
    p.add_argument("--ig-estimator", choices=IG_ESTIMATORS, default="mdl")
    p.add_argument("--relabel", action="store_true")
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("train", help="fit one classifier and save it as JSON")
    p.add_argument("input")
    p.add_argument("--output", required=True)
    p.add_argument("--features", help="file with one selected term per line")
    p.add_argument("--mode", choices=MODES, default="binary")
    p.add_argument("--relabel", action="store_true")
    _add_spec_args(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("evaluate", help="k-fold cross-validation, or score a saved model")
    p.add_argument("input")
    p.add_argument("--output-dir", required=True)
    p.add_argument("--model", help="saved model to score instead of cross-validating")
    p.add_argument("--features", help="file with one selected term per line")
    p.add_argument("--mode", choices=MODES, default="binary")
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--relabel", action="store_true")
    _add_spec_args(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("pipeline", help="run Scheme 1 or 2 end to end from a JSON config")
    p.add_argument("--config", required=True)
    p.add_argument("--output-dir")
    p.add_argument("--seed", type=int)
    p.add_argument("--relabel", action="store_true")
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("matrix", help="run a directory of configs and write summary.csv")
    p.add_argument("config_dir")
    p.add_argument("--output-dir", required=True)
    p.add_argument("--init", metavar="BASE_CONFIG",
                   help="first write the 24-config grid derived from BASE_CONFIG")
    p.add_argument("--no-run", action="store_true", help="with --init, only write the configs")
    p.set_defaults(func=cmd_matrix)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except PipelineError as exc:
        print(f"intentminer {args.command}: {exc}", file=sys.stderr)
    except ConfigError as exc:
        print(f"intentminer {args.command}: config: {exc}", file=sys.stderr)
    except (IntentMinerError, OSError) as exc:
        print(f"intentminer {args.command}: {args.command}: {exc}", file=sys.stderr)
    return 1


if __name__ == "__main__":
    sys.exit(main())
