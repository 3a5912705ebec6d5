import csv
import json
import subprocess
import sys

import pytest

from intentminer import __version__, ingest
from intentminer.cli import main

from conftest import write_jsonl


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def config(fixture_path, tmp_path):
    path = tmp_path / "run.json"
    path.write_text(json.dumps({"corpus_path": str(fixture_path), "output_dir": "out", "seed": 1}))
    return path


class TestSynth:
    def test_deterministic(self, tmp_path, capsys):
        args = ["synth", "--n-yes", 30, "--n-no", 20, "--seed", 5]
        assert run(args + ["--output", tmp_path / "a.jsonl"], capsys)[0] == 0
        assert run(args + ["--output", tmp_path / "b.jsonl"], capsys)[0] == 0
        assert (tmp_path / "a.jsonl").read_bytes() == (tmp_path / "b.jsonl").read_bytes()
        corpus = ingest(tmp_path / "a.jsonl")
        assert corpus.class_counts() == {"Yes": 30, "No": 20}

    def test_seed_matters(self, tmp_path, capsys):
        run(["synth", "--n-yes", 30, "--n-no", 20, "--output", tmp_path / "a.jsonl"], capsys)
        run(["synth", "--n-yes", 30, "--n-no", 20, "--seed", 1, "--output", tmp_path / "b.jsonl"],
            capsys)
        assert (tmp_path / "a.jsonl").read_bytes() != (tmp_path / "b.jsonl").read_bytes()

    def test_non_english(self, tmp_path, capsys):
        run(["synth", "--n-yes", 10, "--n-no", 10, "--non-english", 5, "--output",
             tmp_path / "a.jsonl"], capsys)
        code, out, _ = run(["ingest", tmp_path / "a.jsonl", "--lang", "en", "--output",
                            tmp_path / "en.jsonl"], capsys)
        assert code == 0
        assert ingest(tmp_path / "en.jsonl").n == 20


class TestStages:
    def test_ingest_labels_from_seeds(self, tmp_path, capsys):
        src = write_jsonl(tmp_path / "raw.jsonl", [{"id": "1", "text": "I want tea"},
                                                   {"id": "2", "text": "tea is hot"}])
        code, out, _ = run(["ingest", src, "--output", tmp_path / "lab.jsonl"], capsys)
        assert code == 0 and "1 Yes / 1 No" in out
        assert ingest(tmp_path / "lab.jsonl").labels == ["Yes", "No"]

    def test_preprocess_then_select(self, fixture_path, tmp_path, capsys):
        assert run(["preprocess", fixture_path, "--output", tmp_path / "p.jsonl"], capsys)[0] == 0
        assert all(d.tokens is not None for d in ingest(tmp_path / "p.jsonl"))
        code, out, _ = run(["select", tmp_path / "p.jsonl", "--output-dir", tmp_path / "sel"], capsys)
        assert code == 0
        names = sorted(p.name for p in (tmp_path / "sel").iterdir())
        assert names == ["features.txt", "ig_report.csv", "matrix.txt", "vocabulary.txt"]
        features = (tmp_path / "sel" / "features.txt").read_text().split()
        assert "want" in features

    def test_select_scheme_two(self, fixture_path, tmp_path, capsys):
        code, _, _ = run(["select", fixture_path, "--output-dir", tmp_path / "sel", "--scheme",
                          "two", "--wrapper", "nb", "--budget", 2], capsys)
        assert code == 0
        assert (tmp_path / "sel" / "selection_trace.csv").exists()
        assert len((tmp_path / "sel" / "features.txt").read_text().split()) <= 2

    def test_train_and_score(self, fixture_path, tmp_path, capsys):
        (tmp_path / "f.txt").write_text("want\nneed\nlike\n")
        code, out, _ = run(["train", fixture_path, "--output", tmp_path / "m.json", "--features",
                            tmp_path / "f.txt", "--kind", "nb"], capsys)
        assert code == 0 and "3 features" in out
        model = json.loads((tmp_path / "m.json").read_text())
        assert model["terms"] == ["want", "need", "like"]
        code, out, _ = run(["evaluate", fixture_path, "--model", tmp_path / "m.json",
                            "--output-dir", tmp_path / "ev"], capsys)
        assert code == 0
        rows = list(csv.reader((tmp_path / "ev" / "eval.csv").open()))
        assert rows[1][:2] == ["nb", "holdout"]

    def test_evaluate_cross_validation(self, fixture_path, tmp_path, capsys):
        (tmp_path / "f.txt").write_text("want\nneed\n")
        code, out, _ = run(["evaluate", fixture_path, "--features", tmp_path / "f.txt", "--kind",
                            "svm", "--k", 5, "--output-dir", tmp_path / "ev"], capsys)
        assert code == 0 and out.startswith("accuracy")
        report = json.loads((tmp_path / "ev" / "eval.json").read_text())
        assert len(report["folds"]) == 5
        assert report["features"] == ["want", "need"]

    def test_bad_params_json(self, fixture_path, tmp_path, capsys):
        code, _, err = run(["train", fixture_path, "--output", tmp_path / "m.json", "--params",
                            "{oops"], capsys)
        assert code == 1 and "--params" in err

    def test_empty_feature_file(self, fixture_path, tmp_path, capsys):
        (tmp_path / "f.txt").write_text("")
        code, _, err = run(["train", fixture_path, "--output", tmp_path / "m.json", "--features",
                            tmp_path / "f.txt"], capsys)
        assert code == 1 and "no features" in err


class TestPipelineCommand:
    def test_runs_and_reports(self, config, capsys):
        code, out, _ = run(["pipeline", "--config", config], capsys)
        assert code == 0 and "ig-only / dt" in out
        assert (config.parent / "out" / "manifest.json").exists()

    def test_missing_corpus(self, tmp_path, capsys):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({"corpus_path": "nowhere.jsonl", "output_dir": "out"}))
        code, _, err = run(["pipeline", "--config", cfg], capsys)
        assert code != 0
        assert "corpus_path" in err and "ingest" in err

    def test_flags_override_config(self, config, tmp_path, capsys):
        code, _, _ = run(["pipeline", "--config", config, "--output-dir", tmp_path / "elsewhere",
                          "--seed", 8], capsys)
        assert code == 0
        manifest = json.loads((tmp_path / "elsewhere" / "manifest.json").read_text())
        assert manifest["config"]["seed"] == 8
        assert not (config.parent / "out").exists()

    def test_config_seed_used_without_flag(self, config, capsys):
        run(["pipeline", "--config", config], capsys)
        manifest = json.loads((config.parent / "out" / "manifest.json").read_text())
        assert manifest["config"]["seed"] == 1

    def test_relabel_flag(self, config, capsys):
        run(["pipeline", "--config", config, "--relabel"], capsys)
        manifest = json.loads((config.parent / "out" / "manifest.json").read_text())
        assert manifest["corpus"]["label_source"] == "seeds"

    def test_bad_config(self, tmp_path, capsys):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({"corpus_path": "x", "output_dir": "y", "scheme": "two"}))
        code, _, err = run(["pipeline", "--config", cfg], capsys)
        assert code == 1 and "wrapper_spec" in err

    def test_replay_manifest(self, config, capsys):
        run(["pipeline", "--config", config], capsys)
        out = config.parent / "out"
        before = {p.name: p.read_bytes() for p in out.iterdir()}
        assert run(["pipeline", "--config", out / "manifest.json"], capsys)[0] == 0
        assert {p.name: p.read_bytes() for p in out.iterdir()} == before


class TestMatrixCommand:
    def test_init_no_run(self, config, tmp_path, capsys):
        code, out, _ = run(["matrix", tmp_path / "grid", "--output-dir", tmp_path / "out", "--init",
                            config, "--no-run"], capsys)
        assert code == 0 and "24 configs" in out
        assert len(list((tmp_path / "grid").glob("*.json"))) == 24
        assert not (tmp_path / "out").exists()

    def test_empty_dir(self, tmp_path, capsys):
        (tmp_path / "grid").mkdir()
        code, _, err = run(["matrix", tmp_path / "grid", "--output-dir", tmp_path / "out"], capsys)
        assert code == 1 and "no *.json" in err


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "intentminer", "--version"], capture_output=True,
                         text=True, check=True)
    assert out.stdout.strip() == f"intentminer {__version__}"


def test_console_script_declared():
    from importlib.metadata import entry_points

    scripts = {ep.name: ep.value for ep in entry_points(group="console_scripts")}
    assert scripts["intentminer"] == "intentminer.cli:main"
