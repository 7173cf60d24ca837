import json
import subprocess
import sys

import pytest

from plainterm.cli import main
from plainterm.ngram_lm import load_arpa
from plainterm.wordfreq import build_table


def run(argv):
    return main(argv)


class TestBuildTable:
    def test_writes_merged_groups(self, data_dir, capsys):
        assert run(["build-table", str(data_dir / "otalgia_ontology.tsv"), "--no-plural-variants"]) == 0
        out = capsys.readouterr().out
        assert out == ("0\tear pain\n0\tearache\n0\totalgia\n0\tpain in ear\n")

    def test_plural_variants_added_by_default(self, data_dir, capsys):
        assert run(["build-table", str(data_dir / "otalgia_ontology.tsv")]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert len(lines) == 8
        assert "0\totalgias" in lines
        assert "0\tear pains" in lines

    def test_output_file(self, data_dir, tmp_path):
        target = tmp_path / "table.tsv"
        assert run(["build-table", str(data_dir / "otalgia_ontology.tsv"), "-o", str(target)]) == 0
        assert target.read_text().startswith("0\t")

    def test_missing_input_exits_1(self, tmp_path, capsys):
        assert run(["build-table", str(tmp_path / "nope.tsv")]) == 1
        assert "error:" in capsys.readouterr().err


class TestTrainLm:
    def test_writes_loadable_arpa(self, data_dir, tmp_path):
        target = tmp_path / "model.arpa"
        assert run(["train-lm", str(data_dir / "pipeline_corpus.txt"), "-o", str(target)]) == 0
        with open(target) as fh:
            model = load_arpa(fh)
        assert model.order == 3
        assert "<unk>" in model.vocab

    def test_bad_discount_exits_1(self, data_dir, capsys):
        code = run(["train-lm", str(data_dir / "pipeline_corpus.txt"), "--discount", "2.0"])
        assert code == 1
        assert "discount" in capsys.readouterr().err


class TestSimplify:
    def simplify_args(self, data_dir, extra=()):
        return [
            "simplify",
            "--input", str(data_dir / "ranking_input.txt"),
            "--table", str(data_dir / "ranking_table.tsv"),
            "--lm", str(data_dir / "ranking_lm.tsv"),
            "--freq", str(data_dir / "ranking_freq.tsv"),
            *extra,
        ]

    def test_writes_result_rows(self, data_dir, capsys):
        assert run(self.simplify_args(data_dir)) == 0
        captured = capsys.readouterr()
        assert captured.out == (
            "Patient had multiple myocardial infarctions .\t"
            "Patient had multiple heart attacks .\t1\n"
        )
        assert "simplified 1 sentences: 1 changed" in captured.err

    def test_trace_json(self, data_dir, tmp_path, capsys):
        trace = tmp_path / "trace.json"
        assert run(self.simplify_args(data_dir, ["--trace", str(trace)])) == 0
        capsys.readouterr()
        data = json.loads(trace.read_text())
        sent = data["sentences"][0]
        assert sent["iterations"] == 1
        assert sent["changed"] is True
        first_pass = sent["trace"][0]
        assert len(first_pass) == 1
        assert len(first_pass[0]["candidates"]) == 5
        assert first_pass[0]["chosen"] == "heart attacks"

    def test_empty_input(self, data_dir, tmp_path, capsys):
        empty = tmp_path / "empty.txt"
        empty.write_text("")
        args = self.simplify_args(data_dir)
        args[args.index("--input") + 1] = str(empty)
        assert run(args) == 0
        captured = capsys.readouterr()
        assert captured.out == ""
        assert "simplified 0 sentences" in captured.err

    def test_full_pipeline_matches_golden(self, data_dir, tmp_path, capsys):
        table = tmp_path / "table.tsv"
        arpa = tmp_path / "model.arpa"
        freq = tmp_path / "freq.tsv"
        out = tmp_path / "out.tsv"
        assert run(["build-table", str(data_dir / "pipeline_ontology.tsv"), "-o", str(table)]) == 0
        assert run(["train-lm", str(data_dir / "pipeline_corpus.txt"), "-o", str(arpa)]) == 0
        with open(data_dir / "pipeline_corpus.txt") as fh:
            freq_table = build_table(fh)
        freq.write_text("".join(f"{w}\t{p!r}\n" for w, p in sorted(freq_table.probs.items())))
        code = run(
            [
                "simplify",
                "--input", str(data_dir / "pipeline_input.txt"),
                "--table", str(table),
                "--lm", str(arpa),
                "--freq", str(freq),
                "-o", str(out),
            ]
        )
        capsys.readouterr()
        assert code == 0
        assert out.read_text() == (data_dir / "pipeline_golden.tsv").read_text()


class TestEvaluate:
    def write_sentences(self, tmp_path):
        sources = tmp_path / "sources.txt"
        outputs = tmp_path / "outputs.txt"
        references = tmp_path / "references.txt"
        sources.write_text("foo .\nthe cat sat .\n")
        outputs.write_text("bar .\nthe cat sat .\n")
        references.write_text("bar .\nthe cat sat .\n")
        return sources, outputs, references

    def write_judgments(self, tmp_path):
        judgments = tmp_path / "judgments.csv"
        judgments.write_text(
            "sentence_id,system_id,category\n"
            "s1,a,S\ns2,a,S\ns3,a,F\ns4,a,E\n"
            "s1,b,F\ns2,b,F\ns3,b,S\ns4,b,N\n"
        )
        unchanged = tmp_path / "unchanged.csv"
        unchanged.write_text("s5,a\n")
        return judgments, unchanged

    def test_bleu_and_sari(self, tmp_path, capsys):
        sources, outputs, references = self.write_sentences(tmp_path)
        code = run(
            [
                "evaluate",
                "--sources", str(sources),
                "--outputs", str(outputs),
                "--references", str(references),
            ]
        )
        assert code == 0
        out = capsys.readouterr().out
        # outputs equal the references, so BLEU is exact; mean SARI covers one
        # perfect rewrite and one identity pair
        assert "BLEU\t100.00" in out
        sari_line = [l for l in out.splitlines() if l.startswith("SARI")][0]
        mean_sari = (125.0 / 3 + 100.0 / 3) / 2
        assert sari_line == f"SARI\t{mean_sari:.2f}"

    def test_judgment_report_with_compare(self, tmp_path, capsys):
        judgments, unchanged = self.write_judgments(tmp_path)
        code = run(
            [
                "evaluate",
                "--judgments", str(judgments),
                "--unchanged", str(unchanged),
                "--replications", "7",
                "--format", "tsv",
                "--compare", "a", "b",
            ]
        )
        assert code == 0
        out = capsys.readouterr().out
        assert "a\t2\t1\t1\t0\t7\t0.09" in out
        assert "b\t1\t2\t0\t1\t0\t-0.25" in out
        assert "p-value(a vs b)\t" in out

    def test_compare_unknown_system(self, tmp_path, capsys):
        judgments, _ = self.write_judgments(tmp_path)
        code = run(["evaluate", "--judgments", str(judgments), "--compare", "a", "zz"])
        assert code == 1
        assert "not present" in capsys.readouterr().err

    def test_selector_without_inputs_is_usage_error(self, capsys):
        assert run(["evaluate", "--bleu"]) == 2
        assert "usage error" in capsys.readouterr().err

    def test_no_inputs_at_all(self, capsys):
        assert run(["evaluate"]) == 2
        assert "nothing to evaluate" in capsys.readouterr().err


class TestTune:
    def tune_args(self, data_dir, extra=()):
        return [
            "tune",
            "--dev", str(data_dir / "tune_dev.tsv"),
            "--table", str(data_dir / "tune_table.tsv"),
            "--lm", str(data_dir / "tune_lm.tsv"),
            "--freq", str(data_dir / "tune_freq.tsv"),
            *extra,
        ]

    def test_default_grid_curve(self, data_dir, capsys):
        assert run(self.tune_args(data_dir)) == 0
        captured = capsys.readouterr()
        lines = captured.out.splitlines()
        assert lines[0] == "alpha\tsari"
        assert len(lines) == 30
        assert "0.45\t5.555556" in lines
        assert "0.50\t41.666667" in lines
        assert "best alpha: 0.50 (sari 41.6667)" in captured.err

    def test_explicit_grid(self, data_dir, capsys):
        assert run(self.tune_args(data_dir, ["--grid", "0:1:0.5"])) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[1:] == ["0.00\t5.555556", "0.50\t41.666667", "1.00\t41.666667"]

    def test_comma_grid(self, data_dir, capsys):
        assert run(self.tune_args(data_dir, ["--grid", "0.2,0.8"])) == 0
        captured = capsys.readouterr()
        assert "best alpha: 0.80" in captured.err

    def test_bad_grid_is_usage_error(self, data_dir, capsys):
        assert run(self.tune_args(data_dir, ["--grid", "zero:one:half"])) == 2
        assert "bad grid spec" in capsys.readouterr().err


class TestEntryPoints:
    def test_unknown_command_exits_2(self, capsys):
        with pytest.raises(SystemExit) as exc:
            run(["not-a-command"])
        assert exc.value.code == 2
        capsys.readouterr()

    def test_module_help(self):
        proc = subprocess.run(
            [sys.executable, "-m", "plainterm.cli", "--help"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert "build-table" in proc.stdout
        assert "simplify" in proc.stdout
