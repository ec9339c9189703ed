"""Subcommand behaviour, config precedence, exit codes, and determinism."""

import io
import json
import subprocess
import sys

import pytest

from segprobe.cli import build_parser, effective_config, load_config, main
from segprobe.errors import ParseError

from conftest import DATA

MAP_ARGS = [
    "--set", "tokenizer.format=external-segmentation-map",
    "--set", f"tokenizer.vocab={DATA / 'taxonomy_map.tsv'}",
]
WP_ARGS = [
    "--set", "tokenizer.format=wordpiece-text",
    "--set", f"tokenizer.vocab={DATA / 'wp_vocab.txt'}",
]
DECAY_ARGS = [
    "--set", "tokenizer.format=external-segmentation-map",
    "--set", f"tokenizer.vocab={DATA / 'decay_map.tsv'}",
    "--set", "provider.kind=table",
    "--set", f"provider.table={DATA / 'decay_vectors.txt'}",
]


class TestConfigFile:
    def test_parse_comments_and_blanks(self, tmp_path):
        path = tmp_path / "run.conf"
        path.write_text(
            "# build settings\n"
            "seed = 7\n"
            "\n"
            "noise.models = swap  # typos only\n"
        )
        assert load_config(path) == {"seed": "7", "noise.models": "swap"}

    def test_unknown_key(self, tmp_path):
        path = tmp_path / "run.conf"
        path.write_text("sed = 7\n")
        with pytest.raises(ParseError) as info:
            load_config(path)
        assert "sed" in str(info.value)

    def test_duplicate_key(self, tmp_path):
        path = tmp_path / "run.conf"
        path.write_text("seed = 1\nseed = 2\n")
        with pytest.raises(ParseError):
            load_config(path)

    def test_missing_equals(self, tmp_path):
        path = tmp_path / "run.conf"
        path.write_text("seed 7\n")
        with pytest.raises(ParseError) as info:
            load_config(path)
        assert ":1:" in str(info.value)

    def test_precedence_file_then_set_then_flag(self, tmp_path):
        path = tmp_path / "run.conf"
        path.write_text("seed = 1\njobs = 1\n")
        parser = build_parser()
        args = parser.parse_args(
            ["classify", "--config", str(path), "--set", "seed=2", "--set", "jobs=2", "--seed", "3"]
        )
        config = effective_config(args)
        assert config["seed"] == "3"   # dedicated flag wins
        assert config["jobs"] == "2"   # --set beats the file

    def test_set_rejects_unknown_key(self):
        parser = build_parser()
        args = parser.parse_args(["classify", "--set", "nope=1"])
        with pytest.raises(ValueError):
            effective_config(args)


class TestTokenize:
    def test_words_from_argv(self, capsys):
        # "xyz9" dead-ends at the digit, collapsing the whole word to unk
        assert main(["tokenize", *WP_ARGS, "unaffable", "xyz9"]) == 0
        out = capsys.readouterr().out
        assert out == "unaffable\tun ##aff ##able\nxyz9\t[UNK]\n"

    def test_words_from_file_and_out(self, tmp_path, capsys):
        words = tmp_path / "words.txt"
        words.write_text("breaking\n\ncrazy\n")
        out_path = tmp_path / "seg.tsv"
        code = main(
            ["tokenize", *WP_ARGS, "--words-file", str(words), "--out", str(out_path)]
        )
        assert code == 0
        assert capsys.readouterr().out == ""
        assert out_path.read_text() == "breaking\tbreak ##ing\ncrazy\tcrazy\n"

    def test_words_from_stdin(self, capsys, monkeypatch):
        monkeypatch.setattr(sys, "stdin", io.StringIO("tasty\n"))
        assert main(["tokenize", *MAP_ARGS]) == 0
        assert capsys.readouterr().out == "tasty\ttasty\n"


class TestClassify:
    def test_taxonomy_pairs(self, capsys):
        code = main(
            ["classify", *MAP_ARGS, "--dataset", str(DATA / "taxonomy_pairs.jsonl")]
        )
        assert code == 0
        captured = capsys.readouterr()
        lines = captured.out.strip().split("\n")
        assert len(lines) == 6
        records = [json.loads(line) for line in lines]
        by_pair = {(r["canonical"], r["noisy"]): r for r in records}
        assert by_pair[("tasty", "taaasty")]["type"] == "intact"
        assert by_pair[("insubstantial", "insuubstantial")]["type"] == "additive_infix"
        assert by_pair[("insubstantial", "insstantial")]["type"] == "missing"
        assert by_pair[("hilarious", "hilariousss")]["additive"] == {"s": 2}
        assert "classified 6 pairs" in captured.err

    def test_dataset_required(self, capsys):
        assert main(["classify", *MAP_ARGS]) == 1
        err = json.loads(capsys.readouterr().err.strip().split("\n")[-1])
        assert err["kind"] == "ValueError"


class TestBuildDataset:
    def base_args(self, tmp_path, jobs="1", seed="3"):
        return [
            "build-dataset",
            "--set", f"paths.lexicon={DATA / 'lexicon.tsv'}",
            "--set", f"paths.corpus={DATA / 'tweets.txt'}",
            "--seed", seed,
            "--jobs", jobs,
            "--out", str(tmp_path / f"pairs-{jobs}-{seed}.jsonl"),
        ]

    def test_missing_seed_is_an_error(self, capsys):
        code = main(["build-dataset", "--set", f"paths.lexicon={DATA / 'lexicon.tsv'}",
                     "--set", "noise.models=swap"])
        assert code == 1
        err = json.loads(capsys.readouterr().err.strip().split("\n")[-1])
        assert "stochastic" in err["error"]

    def test_summary_echoes_seed(self, tmp_path, capsys):
        assert main(self.base_args(tmp_path)) == 0
        summary = json.loads(capsys.readouterr().out.strip())
        assert summary["command"] == "build-dataset"
        assert summary["seed"] == 3
        assert summary["pairs"] > 0

    def test_byte_identical_across_runs_and_jobs(self, tmp_path, capsys):
        assert main(self.base_args(tmp_path, jobs="1")) == 0
        first = (tmp_path / "pairs-1-3.jsonl").read_bytes()
        assert main(self.base_args(tmp_path, jobs="8")) == 0
        eight = (tmp_path / "pairs-8-3.jsonl").read_bytes()
        assert first == eight
        (tmp_path / "pairs-1-3.jsonl").unlink()
        assert main(self.base_args(tmp_path, jobs="1")) == 0
        assert (tmp_path / "pairs-1-3.jsonl").read_bytes() == first
        capsys.readouterr()

    def test_stdout_mode_logs_summary_to_stderr(self, capsys):
        code = main([
            "build-dataset",
            "--set", f"paths.lexicon={DATA / 'lexicon.tsv'}",
            "--set", "noise.models=swap",
            "--seed", "3",
        ])
        assert code == 0
        captured = capsys.readouterr()
        for line in captured.out.strip().split("\n"):
            record = json.loads(line)
            assert record["noise_type"] == "swap"
        assert json.loads(captured.err.strip())["seed"] == 3


class TestMine:
    def test_tsv_output(self, capsys):
        code = main([
            "mine",
            "--lexicon", str(DATA / "lexicon.tsv"),
            "--corpus", str(DATA / "tweets.txt"),
        ])
        assert code == 0
        captured = capsys.readouterr()
        rows = [line.split("\t") for line in captured.out.strip().split("\n")]
        assert ["bad", "badddddddd"] in rows
        assert all(len(row) == 2 for row in rows)
        assert "mined" in captured.err


class TestScanMissing:
    def test_extra_pairs_and_document_shape(self, tmp_path, capsys):
        lexicon = tmp_path / "lex.tsv"
        lexicon.write_text("enthral\tpositive\n")
        code = main([
            "scan-missing", *WP_ARGS,
            "--lexicon", str(lexicon),
            "--extra-pairs", str(DATA / "abbrev_pairs.tsv"),
        ])
        assert code == 0
        document = json.loads(capsys.readouterr().out)
        assert document["candidate_total"] == 32
        assert ["enthral", "enth", "missing"] in document["extra"]
        assert ["enthral", "enth"] in document["missing"]
        assert 0.0 <= document["proportion"] <= 1.0


class TestEvaluate:
    def evaluate_args(self, extra=()):
        return [
            "evaluate", *DECAY_ARGS,
            "--dataset", str(DATA / "decay_pairs.jsonl"),
            "--seed", "3",
            *extra,
        ]

    def test_report_document(self, capsys):
        assert main(self.evaluate_args()) == 0
        document = json.loads(capsys.readouterr().out)
        assert document["seed"] == 3
        assert document["counts"]["classified"] == 3
        curve = document["multiplicity"]["curve"]
        assert curve["1"] == pytest.approx(0.70711, abs=1e-5)
        assert curve["2"] == pytest.approx(0.44721, abs=1e-5)
        assert curve["3"] == pytest.approx(0.31623, abs=1e-5)
        assert document["multiplicity"]["correlation"] < 0

    def test_out_and_curve_csv(self, tmp_path, capsys):
        report_path = tmp_path / "report.json"
        csv_path = tmp_path / "curve.csv"
        code = main(
            self.evaluate_args(["--out", str(report_path), "--curve-csv", str(csv_path)])
        )
        assert code == 0
        assert capsys.readouterr().out == ""
        assert json.loads(report_path.read_text())["provider"].startswith("table(")
        assert csv_path.read_text().startswith("additive_count,mean_similarity\n")

    def test_determinism_across_jobs(self, tmp_path, capsys):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        assert main(self.evaluate_args(["--out", str(a), "--jobs", "1"])) == 0
        assert main(self.evaluate_args(["--out", str(b), "--jobs", "8"])) == 0
        capsys.readouterr()
        assert a.read_bytes() == b.read_bytes()


class TestReport:
    def test_render_from_file(self, tmp_path, capsys):
        report_path = tmp_path / "report.json"
        assert main(
            ["evaluate", *DECAY_ARGS, "--dataset", str(DATA / "decay_pairs.jsonl"),
             "--out", str(report_path)]
        ) == 0
        capsys.readouterr()
        assert main(["report", str(report_path)]) == 0
        text = capsys.readouterr().out
        assert "similarity by corruption type" in text
        assert "pearson correlation:" in text

    def test_render_from_stdin(self, capsys, monkeypatch):
        assert main(["evaluate", *DECAY_ARGS, "--dataset", str(DATA / "decay_pairs.jsonl")]) == 0
        document = capsys.readouterr().out
        monkeypatch.setattr(sys, "stdin", io.StringIO(document))
        assert main(["report"]) == 0
        assert "provider: table(" in capsys.readouterr().out


class TestExitCodes:
    def test_data_error_is_one_with_json_line(self, capsys):
        code = main(["tokenize", "--set", "tokenizer.format=nope", "word"])
        assert code == 1
        err_lines = capsys.readouterr().err.strip().split("\n")
        record = json.loads(err_lines[-1])
        assert record["kind"] == "ValueError"
        assert "nope" in record["error"]

    def test_missing_config_file_is_one(self, capsys):
        code = main(["tokenize", "--config", "/nonexistent/run.conf", "word"])
        assert code == 1
        record = json.loads(capsys.readouterr().err.strip().split("\n")[-1])
        assert record["kind"] in ("FileNotFoundError", "OSError")

    def test_usage_error_is_two(self, capsys):
        with pytest.raises(SystemExit) as info:
            main(["no-such-command"])
        assert info.value.code == 2

    def test_module_invocation_smoke(self):
        result = subprocess.run(
            [sys.executable, "-m", "segprobe", "--version"],
            capture_output=True, text=True,
        )
        assert result.returncode == 0
        assert "segprobe" in result.stdout
