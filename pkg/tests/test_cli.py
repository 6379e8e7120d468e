"""CLI tests: exit codes, output formats, subcommands."""

import io
import json
import subprocess
import sys

import pytest

from dietcheck.cli import EXIT_NO_TEXT, EXIT_OK, EXIT_USAGE, EXIT_VIOLATIONS, main


def run_cli(argv, stdin_text="", monkeypatch=None, capsys=None):
    assert monkeypatch is not None and capsys is not None
    monkeypatch.setattr(sys, "stdin", io.StringIO(stdin_text))
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestCheck:
    def test_violation_exit_3_with_marker(self, monkeypatch, capsys):
        code, out, _ = run_cli(["check", "--diet", "gluten-free"],
                               stdin_text="wheat flour, salt",
                               monkeypatch=monkeypatch, capsys=capsys)
        assert code == EXIT_VIOLATIONS
        assert "[wheat] flour" in out
        assert "violated diets: gluten-free" in out

    def test_compliant_exit_0(self, monkeypatch, capsys):
        code, out, _ = run_cli(["check"], stdin_text="anything at all",
                               monkeypatch=monkeypatch, capsys=capsys)
        assert code == EXIT_OK
        assert "verdict: compliant" in out

    def test_empty_stdin_exit_2(self, monkeypatch, capsys):
        code, _, err = run_cli(["check"], stdin_text="",
                               monkeypatch=monkeypatch, capsys=capsys)
        assert code == EXIT_NO_TEXT
        assert "retake" in err

    def test_comma_only_stdin_exit_2(self, monkeypatch, capsys):
        code, _, _ = run_cli(["check"], stdin_text=" , ,, ",
                             monkeypatch=monkeypatch, capsys=capsys)
        assert code == EXIT_NO_TEXT

    def test_label_file_source(self, tmp_path, monkeypatch, capsys):
        label = tmp_path / "label.txt"
        label.write_text("Milk, Water", encoding="utf-8")
        code, out, _ = run_cli(["check", str(label), "--diet", "milk-free"],
                               monkeypatch=monkeypatch, capsys=capsys)
        assert code == EXIT_VIOLATIONS
        assert "[milk]" in out

    def test_fragments_file_source(self, tmp_path, monkeypatch, capsys):
        fragments = tmp_path / "fragments.txt"
        fragments.write_text("Ingredients: Wheat\nFlour, Salt\n", encoding="utf-8")
        code, out, _ = run_cli(["check", "--fragments", str(fragments),
                                "--diet", "gluten-free", "--format", "structured"],
                               monkeypatch=monkeypatch, capsys=capsys)
        assert code == EXIT_VIOLATIONS
        body = json.loads(out)
        assert body["verdict"] == "violations-found"
        assert [t["text"] for t in body["tokens"]] == ["ingredients: wheat", "flour", "salt"]

    def test_missing_label_file_exit_1(self, tmp_path, monkeypatch, capsys):
        code, _, err = run_cli(["check", str(tmp_path / "nope.txt")],
                               monkeypatch=monkeypatch, capsys=capsys)
        assert code == EXIT_USAGE
        assert "cannot read" in err

    def test_custom_flag(self, monkeypatch, capsys):
        code, out, _ = run_cli(["check", "--custom", "Aspartame ", "--format", "structured"],
                               stdin_text="water, aspartame",
                               monkeypatch=monkeypatch, capsys=capsys)
        assert code == EXIT_VIOLATIONS
        assert json.loads(out)["violated_diets"] == ["Custom"]

    def test_empty_custom_flag_exit_1(self, monkeypatch, capsys):
        code, _, err = run_cli(["check", "--custom", "  "], stdin_text="x",
                               monkeypatch=monkeypatch, capsys=capsys)
        assert code == EXIT_USAGE
        assert "non-empty" in err

    def test_comma_custom_flag_exit_1(self, monkeypatch, capsys):
        code, _, _ = run_cli(["check", "--custom", "a,b"], stdin_text="x",
                             monkeypatch=monkeypatch, capsys=capsys)
        assert code == EXIT_USAGE

    def test_unknown_diet_warns_but_proceeds(self, monkeypatch, capsys):
        code, _, err = run_cli(["check", "--diet", "ghost-diet"], stdin_text="milk",
                               monkeypatch=monkeypatch, capsys=capsys)
        assert code == EXIT_OK
        assert "no diet named" in err

    def test_structured_output_repeatable(self, monkeypatch, capsys):
        argv = ["check", "--diet", "vegan", "--custom", "soy", "--format", "structured"]
        code1, out1, _ = run_cli(argv, stdin_text="soy milk, honey",
                                 monkeypatch=monkeypatch, capsys=capsys)
        code2, out2, _ = run_cli(argv, stdin_text="soy milk, honey",
                                 monkeypatch=monkeypatch, capsys=capsys)
        assert code1 == code2 == EXIT_VIOLATIONS
        assert out1 == out2

    def test_structured_error_document(self, monkeypatch, capsys):
        code, out, _ = run_cli(["check", "--format", "structured"], stdin_text=",,,",
                               monkeypatch=monkeypatch, capsys=capsys)
        assert code == EXIT_NO_TEXT
        assert json.loads(out)["error"]["code"] == "empty_transcript"


class TestOtherCommands:
    def test_seed_summary(self, monkeypatch, capsys):
        code, out, _ = run_cli(["seed"], monkeypatch=monkeypatch, capsys=capsys)
        assert code == EXIT_OK
        assert "loaded 7 diets" in out

    def test_seed_rejects_duplicate_name(self, tmp_path, monkeypatch, capsys):
        bad = tmp_path / "seed.json"
        bad.write_text(json.dumps({"diets": [
            {"name": "dup", "description": "", "forbidden_ingredients": ["a"]},
            {"name": "dup", "description": "", "forbidden_ingredients": ["b"]},
        ]}), encoding="utf-8")
        code, _, err = run_cli(["seed", "--seed", str(bad)],
                               monkeypatch=monkeypatch, capsys=capsys)
        assert code == EXIT_USAGE
        assert "dup" in err

    def test_diets_lists_seven_rows(self, monkeypatch, capsys):
        code, out, _ = run_cli(["diets"], monkeypatch=monkeypatch, capsys=capsys)
        assert code == EXIT_OK
        assert len(out.strip().splitlines()) == 7
        assert "gluten-free" in out

    def test_bench_small_structured(self, monkeypatch, capsys):
        code, out, _ = run_cli(["bench", "--needles", "500", "--tokens", "50",
                                "--repeat", "1", "--format", "structured"],
                               monkeypatch=monkeypatch, capsys=capsys)
        assert code == EXIT_OK
        report = json.loads(out)
        assert report["equal"] is True
        assert report["needles"] >= 500

    def test_usage_error_exit_1(self, monkeypatch, capsys):
        with pytest.raises(SystemExit) as excinfo:
            run_cli(["check", "--format", "yaml"], monkeypatch=monkeypatch, capsys=capsys)
        assert excinfo.value.code == EXIT_USAGE

    def test_unknown_command_exit_1(self, monkeypatch, capsys):
        with pytest.raises(SystemExit) as excinfo:
            run_cli(["frobnicate"], monkeypatch=monkeypatch, capsys=capsys)
        assert excinfo.value.code == EXIT_USAGE


class TestInstalledEntryPoint:
    """The console script behaves identically to in-process calls."""

    def test_pipe_through_subprocess(self):
        completed = subprocess.run(
            [sys.executable, "-m", "dietcheck.cli", "check", "--diet", "gluten-free"],
            input="wheat flour, salt", capture_output=True, text=True,
        )
        assert completed.returncode == EXIT_VIOLATIONS
        assert "[wheat] flour" in completed.stdout

    def test_subprocess_empty_stdin(self):
        completed = subprocess.run(
            [sys.executable, "-m", "dietcheck.cli", "check"],
            input="", capture_output=True, text=True,
        )
        assert completed.returncode == EXIT_NO_TEXT
