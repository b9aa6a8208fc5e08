"""
Tests for the dipcheck command-line interface
"""

import json

import pytest
from click.testing import CliRunner

from src import __version__
from src.cli.commands import EXIT_ERROR, EXIT_FOUND, EXIT_OK, cli
from src.services.automaton_service import automaton_digest, builtin, document_dict, list_builtins
from src.tools.laplace import LaplaceDist, prob_le

SVT_PATH = """
x0: 0
steps:
  - observed: {sym: bot}
  - input: 1.0
    observed: {sym: top}
"""


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def svt_path_file(tmp_path):
    path = tmp_path / "svt_path.yaml"
    path.write_text(SVT_PATH, encoding="utf-8")
    return str(path)


def structured(runner, *args):
    result = runner.invoke(cli, ["--format", "structured", *args])
    return result, json.loads(result.stdout)


class TestExitCodes:
    @pytest.mark.parametrize("args, code", [
        (["validate", "svt"], EXIT_OK),
        (["check", "svt"], EXIT_OK),
        (["check", "numeric_sparse"], EXIT_OK),
        (["check", "sort"], EXIT_FOUND),
        (["check", "svt_two_phase"], EXIT_FOUND),
        (["check", "no_such_automaton"], EXIT_ERROR),
        (["weight", "sort"], EXIT_OK),
        (["witness", "svt"], EXIT_OK),
        (["witness", "svt_two_phase", "--ell", "2", "--eps", "1"], EXIT_FOUND),
        (["run", "svt", "--input=-1e6", "--input=1e6"], EXIT_OK),
        (["demo"], EXIT_OK),
        (["demo", "no_such_automaton"], EXIT_ERROR),
    ])
    def test_exit_code(self, runner, args, code):
        assert runner.invoke(cli, args).exit_code == code

    def test_usage_errors(self, runner, svt_path_file):
        assert runner.invoke(cli, ["prob", "svt", svt_path_file, "--eps", "0"]).exit_code == EXIT_ERROR
        assert runner.invoke(cli, ["prob", "svt", "missing.yaml"]).exit_code == EXIT_ERROR
        assert runner.invoke(cli, ["witness", "sort", "--d", "-1"]).exit_code == EXIT_ERROR

    def test_version(self, runner):
        result = runner.invoke(cli, ["--version"])
        assert result.exit_code == EXIT_OK
        assert __version__ in result.output


class TestStructuredReports:
    def test_check_well_formed(self, runner):
        result, report = structured(runner, "check", "svt")
        assert report["command"] == "check"
        assert report["status"] == "well_formed"
        assert report["tool_version"] == __version__
        assert report["automaton"] == "svt"
        assert report["automaton_sha256"] == automaton_digest(builtin("svt"))
        assert report["result"]["weight"] == "1"
        assert report["error"] is None

    def test_check_violation(self, runner):
        result, report = structured(runner, "check", "sort")
        assert result.exit_code == EXIT_FOUND
        assert report["status"] == "violation"
        assert report["result"]["witness"]["kind"] == "leaking_cycle"

    def test_error_report(self, runner):
        result, report = structured(runner, "check", "no_such_automaton")
        assert report["status"] == "error"
        assert report["error"]["code"] == "unknown_builtin"
        assert report["automaton"] is None

    def test_validate_file(self, runner, tmp_path):
        path = tmp_path / "svt.json"
        path.write_text(json.dumps(document_dict(builtin("svt"))), encoding="utf-8")
        result, report = structured(runner, "validate", str(path))
        assert result.exit_code == EXIT_OK
        assert report["status"] == "valid"
        assert report["result"]["states"] == 3
        assert report["automaton_sha256"] == automaton_digest(builtin("svt"))

    def test_invalid_file(self, runner, tmp_path, raw_document):
        document = raw_document("svt")
        document["init"] = "nowhere"
        path = tmp_path / "broken.json"
        path.write_text(json.dumps(document), encoding="utf-8")
        result, report = structured(runner, "validate", str(path))
        assert result.exit_code == EXIT_ERROR
        assert report["error"]["code"] == "validation_error"

    def test_undecodable_file(self, runner, tmp_path):
        path = tmp_path / "bad.yaml"
        path.write_bytes(b"\xff\xfe")
        result, report = structured(runner, "check", str(path))
        assert result.exit_code == EXIT_ERROR
        assert report["status"] == "error"
        assert report["error"]["code"] == "syntax_error"

    def test_undecodable_path_file(self, runner, tmp_path):
        path = tmp_path / "bad_path.yaml"
        path.write_bytes(b"\xff\xfe")
        result, report = structured(runner, "prob", "svt", str(path))
        assert result.exit_code == EXIT_ERROR
        assert report["error"]["code"] == "syntax_error"

    def test_unexpected_failure_is_an_internal_error(self, runner, monkeypatch):
        def broken(a):
            raise RuntimeError("boom")

        monkeypatch.setattr("src.cli.commands.check_well_formed", broken)
        result = runner.invoke(cli, ["--format", "structured", "check", "svt"])
        assert result.exit_code == EXIT_ERROR
        assert "internal_error" in result.output

    @pytest.mark.parametrize("flags, mode, value", [
        ([], "reachable", "3/2"),
        (["--unrestricted"], "unrestricted", None),
    ])
    def test_weight(self, runner, flags, mode, value):
        result, report = structured(runner, "weight", "sort", *flags)
        assert report["result"]["mode"] == mode
        expected = value or report["result"]["unrestricted_weight"]
        assert report["result"]["value"] == expected
        assert report["result"]["costs"]

    def test_prob_matches_closed_form(self, runner, svt_path_file):
        result, report = structured(runner, "prob", "svt", svt_path_file, "--eps", "1", "--eps", "2")
        assert result.exit_code == EXIT_OK
        values = report["result"]["values"]
        assert [v["eps"] for v in values] == [1.0, 2.0]
        for v in values:
            expected = prob_le(LaplaceDist(v["eps"] / 2, 0.0), LaplaceDist(v["eps"] / 4, 1.0))
            assert v["value"] == pytest.approx(expected, rel=1e-9)
            assert v["method"] == "exact"

    def test_prob_function(self, runner, svt_path_file):
        result, report = structured(runner, "prob", "svt", svt_path_file, "--eps", "1", "--show-function")
        assert "1.0" in report["result"]["functions"]

    def test_path_that_does_not_fit(self, runner, svt_path_file):
        result, report = structured(runner, "prob", "numeric_sparse", svt_path_file)
        assert result.exit_code == EXIT_ERROR
        assert report["error"]["code"] == "no_such_transition"

    def test_simulate_is_reproducible(self, runner, svt_path_file):
        args = ["--format", "structured", "simulate", "svt", svt_path_file, "--n", "5000", "--seed", "11"]
        first, second = runner.invoke(cli, args), runner.invoke(cli, args)
        assert first.exit_code == EXIT_OK
        assert first.stdout == second.stdout
        report = json.loads(first.stdout)
        assert report["seed"] == 11
        assert report["result"]["samples"] == 5000
        assert 0.0 < report["result"]["exact"] < 1.0

    def test_run(self, runner):
        result, report = structured(runner, "run", "svt", "--input=-1e6", "--input=1e6", "--seed", "2")
        assert report["result"]["outputs"] == ["bot", "bot", "top"]

    def test_witness_pair(self, runner):
        result, report = structured(runner, "witness", "svt_two_phase", "--ell", "2", "--eps", "1", "--eps", "4")
        assert report["status"] == "pair"
        pair = report["result"]["pair"]
        assert pair["kind"] == "leaking_pair"
        assert [r["eps"] for r in pair["ratios"]] == [1.0, 4.0]

    def test_witness_search_refutes(self, runner):
        result, report = structured(runner, "witness", "svt_two_phase", "--eps", "4", "--ell-max", "16", "--n", "0")
        assert result.exit_code == EXIT_FOUND
        assert report["status"] == "refuted"
        assert report["result"]["d"] == "1"

    def test_witness_search_can_be_inconclusive(self, runner):
        result, report = structured(runner, "witness", "sort", "--d", "50", "--eps", "1",
                                    "--ell-max", "2", "--n", "0")
        assert result.exit_code == EXIT_OK
        assert report["status"] == "inconclusive"

    def test_demo_lists_every_builtin(self, runner):
        result, report = structured(runner, "demo")
        names = [entry["name"] for entry in report["result"]["automata"]]
        assert names == list_builtins()


class TestHumanOutput:
    @pytest.mark.parametrize("args", [
        ["check", "svt"],
        ["check", "numeric_sparse_mod"],
        ["weight", "svt_two_phase"],
        ["witness", "sort", "--ell", "1", "--eps", "1"],
        ["demo"],
        ["check", "no_such_automaton"],
    ])
    def test_renders_without_crashing(self, runner, args):
        result = runner.invoke(cli, args)
        assert result.exception is None or isinstance(result.exception, SystemExit)
        assert result.output.strip()

    def test_check_reports_well_formedness(self, runner):
        result = runner.invoke(cli, ["check", "svt"])
        assert "well" in result.output.lower()
