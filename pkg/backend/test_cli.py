"""
End-to-end tests of the lmcost command line
"""

import io
import logging
import sys

import pandas as pd
import pytest
from typer.testing import CliRunner

from app.cli.main import app
from app.core.logging import setup_logging

runner = CliRunner(mix_stderr=False)


def invoke(*args, **kwargs):
    return runner.invoke(app, list(args), **kwargs)


def read_csv(text: str) -> pd.DataFrame:
    return pd.read_csv(io.StringIO(text), dtype=str, keep_default_na=False)


def test_indices_csv():
    result = invoke("indices", "[3;2,1,1,1]", "--format", "csv")
    assert result.exit_code == 0, result.stderr
    df = read_csv(result.stdout)
    assert list(df.columns) == ["game", "index", "kind", "1", "2", "3", "4"]
    assert df["index"].tolist() == ["bz", "bz", "pgi", "pgi", "s", "s", "jo", "jo", "dp", "dp", "sdp", "sdp"]
    bz = df[(df["index"] == "bz") & (df["kind"] == "raw")].iloc[0]
    assert [bz[c] for c in "1234"] == ["6", "2", "2", "2"]
    jo = df[(df["index"] == "jo") & (df["kind"] == "normalized")].iloc[0]
    assert [jo[c] for c in "1234"] == ["9/14", "5/42", "5/42", "5/42"]


def test_indices_decimals():
    result = invoke("indices", "[3;2,1,1,1]", "--format", "csv", "--decimals", "3")
    df = read_csv(result.stdout)
    assert "1~" in df.columns
    dp = df[(df["index"] == "dp") & (df["kind"] == "normalized")].iloc[0]
    assert (dp["1"], dp["1~"]) == ("3/8", "0.375")


def test_indices_skip_shift_indices_on_incomplete_games():
    result = invoke("indices", '{"n": 4, "minimal_winning": [[1, 2], [3, 4]]}', "--format", "csv")
    assert result.exit_code == 0
    df = read_csv(result.stdout)
    assert sorted(set(df["index"])) == ["bz", "dp", "jo", "pgi"]
    assert "not complete" in result.stderr


def test_games_from_a_file_and_stdin(tmp_path):
    path = tmp_path / "games.txt"
    path.write_text("# two games\n[2;1,1,1]\n\n[3;2,1,1,1]\n", encoding="utf-8")
    from_file = invoke("indices", "--file", str(path), "--format", "csv")
    assert from_file.exit_code == 0
    assert read_csv(from_file.stdout)["game"].unique().tolist() == ["[2;1,1,1]", "[3;2,1,1,1]"]
    from_stdin = invoke("indices", "--file", "-", "--format", "csv", input="[2;1,1,1]\n[3;2,1,1,1]\n")
    assert from_stdin.stdout == from_file.stdout
    missing = invoke("indices", "--file", str(tmp_path / "nope.txt"))
    assert missing.exit_code == 2


def test_check_lm_on_the_star():
    result = invoke("check-lm", "[2;2,1,1,1,1,1,1]", "--alpha", "1/2,1/2", "--format", "csv")
    assert result.exit_code == 0
    df = read_csv(result.stdout)
    first = df.iloc[0]
    assert (first["i"], first["p_i"], first["p_next"], first["increase"], first["monotone"]) == ("1", "4", "5", "1", "false")
    assert df["monotone"].tolist()[1:] == ["true"] * 5


def test_check_lm_needs_a_sorted_complete_game():
    result = invoke("check-lm", "[3;1,2,1,1]", "--alpha", "1/2,1/2")
    assert result.exit_code == 1
    assert "error:" in result.stderr


def test_cost():
    result = invoke("cost", "--n", "5", "--format", "csv")
    assert result.exit_code == 0, result.stderr
    row = read_csv(result.stdout).iloc[0]
    assert (row["collection"], row["n"], row["class"], row["cost"]) == ("bz,pgi", "5", "weighted", "1/2")
    assert row["witness"].startswith("[")
    assert row["i"] in {"1", "2", "3", "4"}


def test_cost_on_restricted_classes():
    proper = read_csv(invoke("cost", "--n", "5", "--class", "proper", "--format", "csv").stdout).iloc[0]
    assert proper["cost"] == "1/3"
    zero = read_csv(invoke("cost", "--n", "3", "--format", "csv").stdout).iloc[0]
    assert (zero["cost"], zero["witness"], zero["i"]) == ("0", "", "")


def test_cost_with_three_indices_lists_each_pair():
    result = invoke("cost", "--collection", "bz,pgi,s", "--n", "4", "--format", "csv")
    df = read_csv(result.stdout)
    assert df["collection"].tolist() == ["bz,pgi", "bz,s", "bz,pgi,s"]
    assert df["cost"].tolist() == ["1/3", "1/3", "1/3"]


def test_cost_iterative_matches_direct():
    iterative = invoke("cost", "--n", "5", "--method", "iterative", "--format", "csv", "--log-level", "INFO")
    assert read_csv(iterative.stdout).iloc[0]["cost"] == "1/2"
    assert "alpha1 0 ->" in iterative.stderr


def test_enumerate_counts():
    result = invoke("enumerate", "--n", "4", "--count-only", "--format", "csv")
    assert result.stdout == "n,class,count\n4,weighted,25\n"
    result = invoke("enumerate", "--n", "4", "--class", "complete,uniform", "--count-only", "--format", "csv")
    assert result.stdout.splitlines()[-1] == '4,"complete,uniform",16'


def test_enumerate_tables():
    uniform = invoke("enumerate", "--table-uniform", "--n", "4", "--format", "csv")
    assert uniform.stdout == "n,uniform_complete,uniform_weighted\n1,1,1\n2,3,3\n3,7,7\n4,16,16\n"
    counts = read_csv(invoke("enumerate", "--table-counts", "--n", "3", "--format", "csv").stdout)
    assert counts["complete"].tolist() == ["1", "3", "8"]


def test_enumerate_emits_games():
    bracket = invoke("enumerate", "--n", "2", "--emit", "bracket")
    assert sorted(bracket.stdout.splitlines()) == ["[1;1,0]", "[1;1,1]", "[2;1,1]"]
    as_json = invoke("enumerate", "--n", "2", "--emit", "json")
    assert '{"n": 2, "minimal_winning": [[1]]}' in as_json.stdout.splitlines()


def test_enumerate_refuses_large_n():
    result = invoke("enumerate", "--n", "8", "--count-only")
    assert result.exit_code == 1
    assert "--allow-large" in result.stderr


def test_polyhedron():
    result = invoke("polyhedron", "--n", "4", "--format", "csv")
    assert result.stdout == "vertex,bz,pgi,s\n1,1,0,0\n2,1/3,2/3,0\n3,1/3,0,2/3\n"
    boundary = invoke("polyhedron", "--n", "4", "--boundary", "--method", "lazy", "--format", "csv")
    assert boundary.stdout == "point,pgi,s\n1,0,0\n2,2/3,0\n3,0,2/3\n"


def test_family():
    result = invoke("family", "star", "--n", "5", "--format", "csv")
    assert result.exit_code == 0
    df = read_csv(result.stdout)
    assert set(df["match"]) == {"true"}
    threshold = df[df["index"] == "threshold"].iloc[0]
    assert (threshold["predicted"], threshold["computed"]) == ("1/2", "1/2")
    bad = invoke("family", "star", "--n", "3")
    assert bad.exit_code == 1


def test_emit_ilp_matches_the_golden_file(fixtures_dir):
    result = invoke("emit-ilp", "--n", "2", "--collection", "bz,s", "--alpha", "1/2,1/2")
    assert result.exit_code == 0
    assert result.stdout == (fixtures_dir / "ilp_n2.lp").read_text(encoding="utf-8")


def test_emit_ilp_check():
    result = invoke("emit-ilp", "--n", "2", "--collection", "bz,s", "--alpha", "1/2,1/2", "--check", "[1;1,0]", "--format", "csv")
    assert result.exit_code == 0
    row = read_csv(result.stdout).iloc[0]
    assert (row["violated"], row["objective"], row["scaled_objective"], row["feasible"]) == ("0", "-3/2", "-3", "true")
    mismatch = invoke("emit-ilp", "--n", "3", "--alpha", "1/2,1/2", "--check", "[1;1,0]")
    assert mismatch.exit_code == 1


def test_emit_ilp_reads_a_solution(tmp_path):
    path = tmp_path / "solution.txt"
    path.write_text("x_0 0\nx_1 1\nx_2 1\nx_3 1\n", encoding="utf-8")
    result = invoke("emit-ilp", "--n", "2", "--solution", str(path))
    assert result.exit_code == 0
    assert result.stdout == "[1;1,1]\n"


@pytest.mark.parametrize("args,code", [
    (["indices", "[3;2,1"], 1),
    (["cost"], 2),
    (["cost", "--n", "4", "--collection", "pgi,bz"], 1),
    (["cost", "--n", "4", "--class", "odd"], 2),
    (["check-lm", "[2;1,1,1]", "--alpha", "1/2,1/3"], 2),
])
def test_errors_map_to_exit_codes(args, code):
    result = invoke(*args)
    assert result.exit_code == code
    assert result.stderr.startswith("error:")
    assert result.stdout == ""


def test_logs_go_to_stderr(monkeypatch, capsys):
    stderr = io.StringIO()
    monkeypatch.setattr(sys, "stderr", stderr)
    setup_logging("debug")
    logging.getLogger("app.services.enumeration_service").debug("tree split")
    assert logging.getLogger("app").level == logging.DEBUG
    assert "tree split" in stderr.getvalue()
    assert capsys.readouterr().out == ""
    setup_logging("WARNING")
