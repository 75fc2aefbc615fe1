import json
import os

import numpy as np
import pytest

from metlit import cli
from metlit.cooccur import load_table
from metlit.corpus import load_vocabulary
from metlit.embeddings import load_embeddings

from helpers import verb_object_corpus, write_corpus, write_lines


@pytest.fixture
def workspace(tmp_path):
    rng = np.random.default_rng(0)
    corpus_sents, labeled = verb_object_corpus(rng, n_sentences=60, n_labeled=12)
    corpus_path = tmp_path / "corpus.txt"
    labeled_path = tmp_path / "labeled.tsv"
    write_corpus(corpus_path, corpus_sents)
    write_lines(labeled_path, labeled)
    out = tmp_path / "out"
    return {
        "corpus": str(corpus_path),
        "labeled": str(labeled_path),
        "out": str(out),
    }


def run_cli(capsys, argv):
    code = cli.main(argv)
    captured = capsys.readouterr()
    summary = json.loads(captured.out) if captured.out.strip() else None
    return code, summary, captured.err


class TestVocabCommand:
    def test_three_word_corpus_yields_three_entries(self, tmp_path, capsys):
        corpus_path = tmp_path / "tiny.txt"
        corpus_path.write_text("alpha beta gamma\n", encoding="utf-8")
        out = tmp_path / "out"
        code, summary, _ = run_cli(
            capsys,
            ["vocab", "--corpus", str(corpus_path), "--min-count", "1",
             "--out", str(out)],
        )
        assert code == 0
        assert summary["vocab_size"] == 3
        vocab = load_vocabulary(str(out / cli.VOCAB_FILE))
        assert len(vocab) == 3

    def test_min_count_filters(self, tmp_path, capsys):
        corpus_path = tmp_path / "tiny.txt"
        corpus_path.write_text("a a b\n", encoding="utf-8")
        out = tmp_path / "out"
        code, summary, _ = run_cli(
            capsys,
            ["vocab", "--corpus", str(corpus_path), "--min-count", "2",
             "--out", str(out)],
        )
        assert code == 0 and summary["vocab_size"] == 1

    def test_missing_corpus_fails_before_writing(self, tmp_path, capsys):
        out = tmp_path / "out"
        code, summary, err = run_cli(
            capsys,
            ["vocab", "--corpus", str(tmp_path / "nope.txt"), "--out", str(out)],
        )
        assert code == 1
        assert summary is None
        assert "nope.txt" in err
        assert not out.exists()  # nothing written on failure

    def test_empty_corpus_is_an_error(self, tmp_path, capsys):
        corpus_path = tmp_path / "empty.txt"
        corpus_path.write_text("\n\n", encoding="utf-8")
        code, _, err = run_cli(
            capsys,
            ["vocab", "--corpus", str(corpus_path), "--out", str(tmp_path / "o")],
        )
        assert code == 1 and "empty" in err


class TestArgumentErrors:
    def test_unknown_flag_exits_nonzero(self):
        with pytest.raises(SystemExit) as exc:
            cli.main(["vocab", "--corpus", "x", "--out", "y", "--bogus"])
        assert exc.value.code != 0

    def test_missing_subcommand_exits_nonzero(self):
        with pytest.raises(SystemExit) as exc:
            cli.main([])
        assert exc.value.code != 0

    def test_bad_choice_exits_nonzero(self):
        with pytest.raises(SystemExit) as exc:
            cli.main(["pipeline", "--corpus", "x", "--labeled", "y",
                      "--model", "elmo", "--out", "z"])
        assert exc.value.code != 0


class TestStageChaining:
    def test_cooccur_requires_vocabulary_artifact(self, workspace, capsys):
        os.makedirs(workspace["out"], exist_ok=True)
        code, _, err = run_cli(
            capsys,
            ["cooccur", "--corpus", workspace["corpus"], "--out", workspace["out"]],
        )
        assert code == 1 and "vocabulary" in err

    def test_embed_requires_embeddings_artifact(self, workspace, capsys):
        os.makedirs(workspace["out"], exist_ok=True)
        code, _, err = run_cli(
            capsys,
            ["embed", "--labeled", workspace["labeled"], "--out", workspace["out"]],
        )
        assert code == 1 and "embeddings" in err

    def test_full_cbow_chain(self, workspace, capsys):
        out = workspace["out"]
        code, summary, _ = run_cli(
            capsys,
            ["vocab", "--corpus", workspace["corpus"], "--min-count", "1",
             "--out", out],
        )
        assert code == 0
        vocab_size = summary["vocab_size"]

        code, summary, _ = run_cli(
            capsys,
            ["train-cbow", "--corpus", workspace["corpus"], "--dim", "8",
             "--epochs", "2", "--out", out],
        )
        assert code == 0
        assert len(summary["epoch_losses"]) == 2
        emb = load_embeddings(os.path.join(out, cli.EMBEDDINGS_FILE))
        assert len(emb) == vocab_size and emb.dim == 8

        code, summary, _ = run_cli(
            capsys,
            ["embed", "--labeled", workspace["labeled"], "--out", out],
        )
        assert code == 0
        assert summary["class_counts"] == {"literal": 6, "metaphor": 6}

        code, summary, _ = run_cli(capsys, ["ttest", "--out", out])
        assert code == 0
        assert summary["dimensions"] == 8
        assert os.path.isfile(os.path.join(out, cli.TTEST_FILE))

        code, summary, _ = run_cli(
            capsys,
            ["cv", "--folds", "2", "--svm-epochs", "30", "--out", out],
        )
        assert code == 0
        assert 0.0 <= summary["mean_accuracy"] <= 1.0
        assert os.path.isfile(os.path.join(out, cli.CV_FILE))
        assert os.path.isfile(os.path.join(out, cli.MODEL_FILE))

    def test_glove_chain_through_cooccur(self, workspace, capsys):
        out = workspace["out"]
        assert run_cli(
            capsys,
            ["vocab", "--corpus", workspace["corpus"], "--min-count", "1",
             "--out", out],
        )[0] == 0
        code, summary, _ = run_cli(
            capsys,
            ["cooccur", "--corpus", workspace["corpus"], "--window", "4",
             "--out", out],
        )
        assert code == 0 and summary["entries"] > 0
        table = load_table(os.path.join(out, cli.COOCCUR_FILE), window=4)
        assert len(table) == summary["entries"]
        code, summary, _ = run_cli(
            capsys,
            ["train-glove", "--dim", "8", "--epochs", "3", "--out", out],
        )
        assert code == 0 and len(summary["epoch_losses"]) == 3


class TestPipeline:
    def test_one_shot_cbow_pipeline(self, workspace, capsys):
        code, summary, _ = run_cli(
            capsys,
            ["pipeline", "--corpus", workspace["corpus"],
             "--labeled", workspace["labeled"], "--model", "cbow",
             "--dim", "8", "--epochs", "2", "--folds", "2",
             "--min-count", "1", "--svm-epochs", "30",
             "--out", workspace["out"]],
        )
        assert code == 0
        assert summary["model"] == "cbow"
        assert summary["train"]["command"] == "train-cbow"
        for name in (cli.VOCAB_FILE, cli.EMBEDDINGS_FILE, cli.SENTVEC_FILE,
                     cli.TTEST_FILE, cli.CV_FILE, cli.MODEL_FILE):
            assert os.path.isfile(os.path.join(workspace["out"], name))
        assert not os.path.isfile(
            os.path.join(workspace["out"], cli.COOCCUR_FILE)
        )  # cbow path skips counting

    def test_one_shot_glove_pipeline(self, workspace, capsys):
        code, summary, _ = run_cli(
            capsys,
            ["pipeline", "--corpus", workspace["corpus"],
             "--labeled", workspace["labeled"], "--model", "glove",
             "--dim", "8", "--epochs", "3", "--folds", "2",
             "--min-count", "1", "--svm-epochs", "30",
             "--out", workspace["out"]],
        )
        assert code == 0
        assert summary["train"]["command"] == "train-glove"
        assert os.path.isfile(os.path.join(workspace["out"], cli.COOCCUR_FILE))

    def test_pipeline_defaults_differ_by_model(self):
        parser = cli.build_parser()
        args = parser.parse_args(
            ["pipeline", "--corpus", "c", "--labeled", "l", "--out", "o"]
        )
        cli._apply_pipeline_defaults(args)
        assert args.window == 5 and args.epochs == 5
        args = parser.parse_args(
            ["pipeline", "--corpus", "c", "--labeled", "l", "--model", "glove",
             "--out", "o"]
        )
        cli._apply_pipeline_defaults(args)
        assert args.window == 10 and args.epochs == 15

    def test_malformed_labeled_file_fails_with_line_number(
        self, workspace, capsys, tmp_path
    ):
        bad = tmp_path / "bad.tsv"
        bad.write_text("literal\topen\topen door\nfigurative\tx\tx y\n")
        code, _, err = run_cli(
            capsys,
            ["pipeline", "--corpus", workspace["corpus"], "--labeled", str(bad),
             "--dim", "4", "--epochs", "1", "--min-count", "1",
             "--folds", "2", "--out", workspace["out"]],
        )
        assert code == 1
        assert "line 2" in err
