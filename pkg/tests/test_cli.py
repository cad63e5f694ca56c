import json

import pytest

from emocomp.cli import main, read_config_file
from emocomp.errors import ConfigError


def run(args):
    return main([str(a) for a in args])


@pytest.fixture
def tec_path(data_dir):
    return data_dir / "synthetic_tec.jsonl"


@pytest.fixture
def overfit_path(data_dir):
    return data_dir / "overfit_tec.jsonl"


class TestConfigFile:
    def test_parses_known_keys(self, tmp_path):
        f = tmp_path / "cfg.txt"
        f.write_text("epochs = 5  # comment\nbilstm_units = 8/6\n"
                     "kernel_sizes = 2, 3, 5\ndropout_rate = 0.25\nseed = 7\n")
        cfg = read_config_file(f)
        assert cfg == {"epochs": 5, "bilstm_units": (8, 6),
                       "kernel_sizes": (2, 3, 5), "dropout_rate": 0.25, "seed": 7}

    def test_unknown_key_rejected(self, tmp_path):
        f = tmp_path / "cfg.txt"
        f.write_text("mystery = 1\n")
        with pytest.raises(ConfigError, match="mystery"):
            read_config_file(f)

    def test_malformed_line_rejected(self, tmp_path):
        f = tmp_path / "cfg.txt"
        f.write_text("epochs 5\n")
        with pytest.raises(ConfigError):
            read_config_file(f)

    def test_flag_beats_env_beats_file(self, tmp_path, tec_path, monkeypatch, capsys):
        f = tmp_path / "cfg.txt"
        f.write_text("epochs = 50\n")
        monkeypatch.setenv("EMOCOMP_EPOCHS", "2")
        # env (2) should beat the file (50); a flag (1) should beat both
        assert run(["train", "--model", "emo-nn-base", "--corpus", tec_path,
                    "--config", f, "--epochs", "1",
                    "--out", tmp_path / "o1"]) == 0
        log = (tmp_path / "o1" / "training_log.txt").read_text()
        assert "epoch    1" in log and "epoch    2" not in log
        assert run(["train", "--model", "emo-nn-base", "--corpus", tec_path,
                    "--config", f, "--out", tmp_path / "o2"]) == 0
        log = (tmp_path / "o2" / "training_log.txt").read_text()
        assert "epoch    2" in log and "epoch    3" not in log


class TestExitCodes:
    def test_success(self, tmp_path, tec_path, capsys):
        assert run(["stats", tec_path, "--out", tmp_path]) == 0

    def test_missing_corpus_is_data_error(self, tmp_path, capsys):
        assert run(["stats", tmp_path / "nope.jsonl", "--out", tmp_path]) == 2

    def test_missing_config_is_config_error(self, tmp_path, tec_path, capsys):
        assert run(["train", "--model", "emo-me-base", "--corpus", tec_path,
                    "--config", tmp_path / "nope.txt", "--out", tmp_path]) == 1

    def test_bad_corpus_content_is_data_error(self, tmp_path, capsys):
        bad = tmp_path / "bad.jsonl"
        bad.write_text('{"id": "x", "text": "t", "emotions": ["joy"], "cpm": [9], "domain": "tec"}\n')
        assert run(["stats", bad, "--out", tmp_path]) == 2

    def test_unknown_verb_is_usage_error(self, capsys):
        assert run(["transmogrify"]) == 1


class TestStats:
    def test_matches_precomputed_table(self, tmp_path, tec_path, data_dir, capsys):
        assert run(["stats", tec_path, "--out", tmp_path]) == 0
        expected = json.loads((data_dir / "synthetic_tec_stats.json").read_text())
        rows = (tmp_path / "stats.tsv").read_text().strip().splitlines()
        total = rows[-1].split("\t")
        assert total[0] == "total"
        assert [int(v) for v in total[1:-1:2]] == expected["component_totals"]
        assert [int(v) for v in total[2:-1:2]] == expected["total_percentages"]
        assert int(total[-1]) == expected["corpus_size"]


class TestAgreement:
    def test_self_agreement_is_one(self, tmp_path, tec_path, capsys):
        assert run(["agreement", tec_path, tec_path, "--out", tmp_path]) == 0
        out = (tmp_path / "agreement.tsv").read_text()
        assert out.count("1.000") == 5

    def test_degenerate_rendered_as_dashes(self, tmp_path, capsys):
        recs = [{"id": f"i{j}", "text": "t", "emotions": ["joy"],
                 "cpm": [1, 0, 0, 0, 0], "domain": "tec"} for j in range(4)]
        f = tmp_path / "c.jsonl"
        f.write_text("\n".join(json.dumps(r) for r in recs) + "\n")
        assert run(["agreement", f, f, "--out", tmp_path]) == 0
        out = (tmp_path / "agreement.tsv").read_text()
        # every component column is constant here, so kappa is uninformative
        assert out.count("--") == 5


class TestTrainEvalPredict:
    def test_me_round_trip(self, tmp_path, tec_path, capsys):
        out = tmp_path / "run"
        assert run(["train", "--model", "emo-me-base", "--corpus", tec_path,
                    "--out", out, "--seed", "1"]) == 0
        assert (out / "model.json").exists()
        assert (out / "metrics_test.tsv").exists()
        assert run(["eval", "--model-path", out / "model.json",
                    "--corpus", tec_path, "--out", tmp_path / "ev"]) == 0
        assert run(["predict", "--model-path", out / "model.json",
                    "--corpus", tec_path, "--out", tmp_path / "pr"]) == 0
        lines = (tmp_path / "pr" / "predictions.tsv").read_text().strip().splitlines()
        assert len(lines) == 121  # header + 120 instances

    def test_nn_checkpoint_round_trip(self, tmp_path, overfit_path, capsys):
        out = tmp_path / "run"
        assert run(["train", "--model", "cpm-nn-base", "--corpus", overfit_path,
                    "--out", out, "--seed", "1", "--epochs", "2"]) == 0
        assert run(["eval", "--model-path", out / "checkpoint.json",
                    "--corpus", overfit_path, "--out", tmp_path / "ev"]) == 0
        assert (tmp_path / "ev" / "metrics.json").exists()

    def test_metrics_reports_byte_identical_across_reruns(self, tmp_path, overfit_path, capsys):
        for name in ("a", "b"):
            assert run(["train", "--model", "emo-nn-base", "--corpus", overfit_path,
                        "--out", tmp_path / name, "--seed", "5", "--epochs", "2"]) == 0
        a = (tmp_path / "a" / "metrics_test.tsv").read_bytes()
        b = (tmp_path / "b" / "metrics_test.tsv").read_bytes()
        assert a == b
        aj = (tmp_path / "a" / "metrics_test.json").read_bytes()
        bj = (tmp_path / "b" / "metrics_test.json").read_bytes()
        assert aj == bj


class TestCrossval:
    def test_three_folds(self, tmp_path, tec_path, capsys):
        assert run(["crossval", "--model", "cpm-me-base", "--corpus", tec_path,
                    "--k", "3", "--out", tmp_path]) == 0
        rows = (tmp_path / "crossval.tsv").read_text().strip().splitlines()
        assert len(rows) == 5  # header + 3 folds + mean
        assert rows[-1].startswith("mean")


class TestAblate:
    def test_selects_informative_block(self, tmp_path, data_dir, capsys):
        assert run(["ablate", "--corpus", data_dir / "ablation_corpus.jsonl",
                    "--pos-sidecar", data_dir / "ablation_pos.tsv",
                    "--out", tmp_path]) == 0
        best = (tmp_path / "ablation_best.tsv").read_text()
        for line in best.strip().splitlines()[1:]:
            assert "pos_tags" in line.split("\t")[1]
        single = (tmp_path / "ablation_single_feature.tsv").read_text()
        assert single.splitlines()[0].startswith("component\tbase")
