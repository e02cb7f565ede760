import subprocess
import sys

import pytest

from conftest import TOY_ROWS, write_csv
from toxdetect.cli import main, percent
from toxdetect.data import load_dataset
from toxdetect.embeddings import random_matrix
from toxdetect.labels import LABELS
from toxdetect.models import CnnClassifier
from toxdetect.persistence import save_model
from toxdetect.pipeline import ToxicityModel, encode_corpus, encoder_for

# Small corpus the trained NB model classifies perfectly: each label family
# has its own vocabulary, so every column separates at threshold 0.5.
PERFECT_ROWS = [
    ("p01", "idiot stupid idiot stupid", 1, 0, 0, 0, 1, 0),
    ("p02", "stupid idiot moron", 1, 0, 0, 0, 1, 0),
    ("p03", "i will kill you kill", 1, 0, 0, 1, 0, 0),
    ("p04", "kill you dead tomorrow", 1, 0, 0, 1, 0, 0),
    ("p05", "damn crap damn crap", 1, 0, 1, 0, 0, 0),
    ("p06", "crap damn filth", 1, 0, 1, 0, 0, 0),
    ("p07", "hate your tribe hate", 1, 0, 0, 0, 0, 1),
    ("p08", "tribe hate scum", 1, 0, 0, 0, 0, 1),
    ("p09", "vile disgusting vile severe", 1, 1, 0, 0, 0, 0),
    ("p10", "severe vile disgusting", 1, 1, 0, 0, 0, 0),
    ("p11", "have a nice day", 0, 0, 0, 0, 0, 0),
    ("p12", "thank you for the help", 0, 0, 0, 0, 0, 0),
    ("p13", "nice work everyone", 0, 0, 0, 0, 0, 0),
    ("p14", "good day to you", 0, 0, 0, 0, 0, 0),
]


def test_percent_rounds_half_up():
    assert percent(0.0) == 0
    assert percent(1.0) == 100
    assert percent(0.494) == 49
    assert percent(0.495) == 50
    assert percent(0.505) == 51


class TestUsageErrors:
    @pytest.mark.parametrize(
        "argv",
        [
            [],
            ["frobnicate"],
            ["preprocess", "--in", "x.csv"],  # --out missing
            ["train", "--model", "svm", "--data", "c", "--out", "m"],
            ["predict", "--model", "m"],  # neither --text nor --file
            ["predict", "--model", "m", "--text", "a", "--file", "b"],
        ],
    )
    def test_exit_1_and_error_prefix(self, argv, capsys):
        assert main(argv) == 1
        err = capsys.readouterr().err
        assert "error:" in err

    def test_help_exits_0(self, capsys):
        assert main(["--help"]) == 0
        assert "preprocess" in capsys.readouterr().out


class TestDataErrors:
    def test_missing_input_file(self, tmp_path, capsys):
        rc = main(
            ["preprocess", "--in", str(tmp_path / "nope.csv"), "--out", str(tmp_path / "c.bin")]
        )
        assert rc == 2
        assert capsys.readouterr().err.startswith("error:")

    def test_train_on_unlabeled_corpus(self, tmp_path, capsys):
        csv_path = write_csv(
            tmp_path / "plain.csv",
            [row[:2] for row in TOY_ROWS],
            header=["id", "comment_text"],
        )
        corpus = tmp_path / "c.bin"
        assert main(["preprocess", "--in", str(csv_path), "--out", str(corpus), "--no-labels"]) == 0
        capsys.readouterr()
        rc = main(["train", "--model", "nb", "--data", str(corpus), "--out", str(tmp_path / "m")])
        assert rc == 2
        assert "no labels" in capsys.readouterr().err

    def test_predict_on_garbage_model(self, tmp_path, capsys):
        junk = tmp_path / "junk.bin"
        junk.write_bytes(b"this is not a container")
        rc = main(["predict", "--model", str(junk), "--text", "hello"])
        assert rc == 2
        assert capsys.readouterr().err.startswith("error:")

    def test_evaluate_model_path_is_corpus(self, toy_csv, tmp_path, capsys):
        corpus = tmp_path / "c.bin"
        assert main(["preprocess", "--in", str(toy_csv), "--out", str(corpus)]) == 0
        capsys.readouterr()
        rc = main(["evaluate", "--model", str(corpus), "--data", str(corpus)])
        assert rc == 2
        assert "not a model" in capsys.readouterr().err

    def test_gridsearch_invalid_json(self, toy_csv, tmp_path, capsys):
        corpus = tmp_path / "c.bin"
        assert main(["preprocess", "--in", str(toy_csv), "--out", str(corpus)]) == 0
        grid = tmp_path / "grid.json"
        grid.write_text("{not json")
        capsys.readouterr()
        rc = main(
            ["gridsearch", "--model", "nb", "--grid", str(grid), "--data", str(corpus),
             "--out", str(tmp_path / "g.csv")]
        )
        assert rc == 2
        assert "invalid JSON" in capsys.readouterr().err

    def test_gridsearch_unknown_parameter(self, toy_csv, tmp_path, capsys):
        corpus = tmp_path / "c.bin"
        assert main(["preprocess", "--in", str(toy_csv), "--out", str(corpus)]) == 0
        grid = tmp_path / "grid.json"
        grid.write_text('{"bogus": [1, 2]}')
        capsys.readouterr()
        rc = main(
            ["gridsearch", "--model", "nb", "--grid", str(grid), "--data", str(corpus),
             "--out", str(tmp_path / "g.csv")]
        )
        assert rc == 2
        assert "bogus" in capsys.readouterr().err


class TestPipeline:
    def test_preprocess_train_evaluate_predict(self, toy_csv, tmp_path, capsys):
        corpus, model = tmp_path / "c.bin", tmp_path / "m.bin"

        assert main(["preprocess", "--in", str(toy_csv), "--out", str(corpus), "--maxlen", "30"]) == 0
        out = capsys.readouterr().out
        assert "encoded 10 comments" in out
        assert corpus.exists()

        assert main(["train", "--model", "nb", "--data", str(corpus), "--out", str(model)]) == 0
        assert f"saved nb model to {model}" in capsys.readouterr().out

        assert main(["evaluate", "--model", str(model), "--data", str(corpus)]) == 0
        out = capsys.readouterr().out
        assert "examples: 10" in out
        for name in LABELS:
            assert name in out
        assert "mean accuracy" in out and "AUC" in out

        assert main(["predict", "--model", str(model), "--text", "you are an idiot",
                     "--text", "have a nice day"]) == 0
        out = capsys.readouterr().out
        lines = [line for line in out.splitlines() if line.strip()]
        label_lines = [line for line in lines if line.split()[0] in LABELS]
        assert len(label_lines) == 6
        for line in label_lines:
            cells = line.split()[1:]
            assert len(cells) == 2
            assert all(cell.endswith("%") for cell in cells)

    def test_predict_from_file(self, toy_csv, tmp_path, capsys):
        corpus, model = tmp_path / "c.bin", tmp_path / "m.bin"
        assert main(["preprocess", "--in", str(toy_csv), "--out", str(corpus)]) == 0
        assert main(["train", "--model", "nb", "--data", str(corpus), "--out", str(model)]) == 0
        comments = tmp_path / "comments.txt"
        comments.write_text("you fool\n\nthanks for the edit\n")
        capsys.readouterr()
        assert main(["predict", "--model", str(model), "--file", str(comments)]) == 0
        out = capsys.readouterr().out
        label_lines = [line for line in out.splitlines() if line.split() and line.split()[0] in LABELS]
        assert len(label_lines) == 6
        assert all(len(line.split()) == 3 for line in label_lines)  # name + 2 cells

    def test_train_cnn_prints_epochs(self, toy_csv, tmp_path, capsys):
        corpus, model = tmp_path / "c.bin", tmp_path / "cnn.bin"
        assert main(["preprocess", "--in", str(toy_csv), "--out", str(corpus), "--maxlen", "12"]) == 0
        rc = main(["train", "--model", "cnn", "--data", str(corpus), "--out", str(model),
                   "--dim", "8", "--epochs", "2", "--batch", "4"])
        assert rc == 0
        out = capsys.readouterr().out
        assert "epoch 1: train loss" in out
        assert "epoch 2: train loss" in out
        assert "val accuracy" in out
        assert f"saved cnn model to {model}" in out

    def test_gridsearch_writes_ranked_csv(self, toy_csv, tmp_path, capsys):
        corpus = tmp_path / "c.bin"
        grid = tmp_path / "grid.json"
        out_csv = tmp_path / "grid.csv"
        assert main(["preprocess", "--in", str(toy_csv), "--out", str(corpus)]) == 0
        grid.write_text('{"alpha": [0.5, 1.0]}')
        capsys.readouterr()
        rc = main(["gridsearch", "--model", "nb", "--grid", str(grid), "--data", str(corpus),
                   "--out", str(out_csv), "--folds", "2"])
        assert rc == 0
        out = capsys.readouterr().out
        assert f"wrote 2 configurations to {out_csv}" in out
        assert "best (rank 1)" in out
        lines = out_csv.read_text().splitlines()
        assert lines[0] == "config_id,alpha,metric,rank"
        assert len(lines) == 3
        assert {line.split(",")[-1] for line in lines[1:]} == {"1", "2"}


class TestOutputContracts:
    def test_untrained_zero_head_predicts_50_percent(self, toy_csv, tmp_path, capsys):
        corpus = encode_corpus(load_dataset(toy_csv), maxlen=10)
        clf = CnnClassifier(
            embedding=random_matrix(corpus.vocabulary, dim=8, seed=0),
            filters=4, kernel_size=3, dense_units=4,
        )
        clf.initialize()
        head = dict(clf._named)["out"]
        head.params["W"][:] = 0.0
        head.params["b"][:] = 0.0
        model = ToxicityModel(
            kind="cnn", classifier=clf, encoder=encoder_for(corpus.vocabulary, 10)
        )
        path = tmp_path / "zero.bin"
        save_model(model, path)
        assert main(["predict", "--model", str(path), "--text", "have a nice day"]) == 0
        out = capsys.readouterr().out
        label_lines = [line for line in out.splitlines() if line.split() and line.split()[0] in LABELS]
        assert len(label_lines) == 6
        for line in label_lines:
            assert line.split()[1] == "50%"

    def test_evaluate_perfect_fixture(self, tmp_path, capsys):
        csv_path = write_csv(tmp_path / "perfect.csv", PERFECT_ROWS)
        corpus, model = tmp_path / "c.bin", tmp_path / "m.bin"
        assert main(["preprocess", "--in", str(csv_path), "--out", str(corpus)]) == 0
        assert main(["train", "--model", "nb", "--data", str(corpus), "--out", str(model),
                     "--alpha", "0.5"]) == 0
        capsys.readouterr()
        assert main(["evaluate", "--model", str(model), "--data", str(corpus)]) == 0
        out = capsys.readouterr().out
        assert "mean accuracy 100.0%" in out
        assert "AUC 1.0000" in out


def test_module_entry_point():
    ok = subprocess.run(
        [sys.executable, "-m", "toxdetect", "--help"], capture_output=True, text=True
    )
    assert ok.returncode == 0
    assert "preprocess" in ok.stdout
    bad = subprocess.run(
        [sys.executable, "-m", "toxdetect", "frobnicate"], capture_output=True, text=True
    )
    assert bad.returncode == 1
    assert "error:" in bad.stderr
