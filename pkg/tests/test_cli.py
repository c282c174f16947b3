import csv
import json
from fractions import Fraction

import pytest
from click.testing import CliRunner

from treegame import guaranteed_gain, parse_tree, strategy_from_pairs
from treegame.cli import cli


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def p5_file(tmp_path):
    path = tmp_path / "p5.tree"
    path.write_text("5\n0 1\n1 2\n2 3\n3 4\n")
    return str(path)


@pytest.fixture
def p2_file(tmp_path):
    path = tmp_path / "p2.tree"
    path.write_text("2\n0 1\n")
    return str(path)


def run_json(runner, args):
    result = runner.invoke(cli, args, catch_exceptions=False)
    assert result.exit_code == 0, result.output
    return json.loads(result.output)


class TestCentroidCommand:
    def test_path(self, runner, p5_file):
        doc = run_json(runner, ["centroid", "--tree", p5_file])
        assert doc["schema"] == "treegame.centroid/1"
        assert doc["weights"] == [4, 3, 2, 3, 4]
        assert doc["centroid"] == {"vertices": [2], "kind": "centroidal", "root": 2}

    def test_requires_exactly_one_input(self, runner, p5_file):
        result = runner.invoke(cli, ["centroid", "--tree", p5_file, "--ctree", "2", "2"])
        assert result.exit_code != 0

    def test_generated_trees_carry_labels(self, runner):
        doc = run_json(runner, ["centroid", "--spider", "3", "2"])
        assert doc["labels"][0] == "(0,0)"


class TestMatrixCommand:
    def test_csv_default(self, runner, p2_file):
        result = runner.invoke(cli, ["matrix", "--tree", p2_file], catch_exceptions=False)
        assert result.exit_code == 0
        assert result.output == "0,1\n1,0\n"

    def test_json_format(self, runner, p2_file):
        doc = run_json(runner, ["matrix", "--tree", p2_file, "--format", "json"])
        assert doc["entries"] == [[0, 1], [1, 0]]


class TestSimulateCommand:
    def test_p5(self, runner, p5_file):
        doc = run_json(runner, ["simulate", "--tree", p5_file, "--x", "1", "--y", "3"])
        assert doc["gain"] == 2
        assert doc["colors"] == ["player1", "player1", "grey", "player2", "player2"]
        assert doc["counts"] == {"player1": 2, "player2": 2, "grey": 1, "white": 0}


class TestValueCommand:
    def test_complete_tree_2_2(self, runner):
        doc = run_json(runner, ["value", "--ctree", "2", "2"])
        assert doc["value"] == "24/11"
        assert doc["verified"] is True
        assert doc["maxmin"] == [[0, "3/11"], [1, "4/11"], [2, "4/11"]]
        assert doc["minmax"] == [[0, "5/11"], [1, "3/11"], [2, "3/11"]]

    def test_float_mode(self, runner):
        doc = run_json(runner, ["value", "--ctree", "2", "2", "--float"])
        assert abs(doc["value"] - 24 / 11) < 1e-12

    def test_strategy_round_trip_through_import(self, runner):
        doc = run_json(runner, ["value", "--ctree", "2", "2"])
        x = strategy_from_pairs(doc["n"], doc["maxmin"])
        t = parse_tree("7\n0 1\n0 2\n1 3\n1 4\n2 5\n2 6")
        assert guaranteed_gain(t, x)[0] == Fraction(24, 11)


class TestCssCommand:
    def test_p2(self, runner, p2_file):
        doc = run_json(runner, ["css", "--tree", p2_file])
        assert doc["strategy"] == [[0, "1/2"], [1, "1/2"]]
        assert doc["guaranteed_gain"] == "1/2"
        assert doc["theorem4"] == "pass"

    def test_strict_rejects_bicentroidal(self, runner, p2_file):
        result = runner.invoke(cli, ["css", "--tree", p2_file, "--strict-centroidal"])
        assert result.exit_code != 0

    def test_branches_report(self, runner):
        doc = run_json(runner, ["css", "--ctree", "2", "2"])
        assert len(doc["branches"]) == 2
        assert doc["branches"][0]["class"] == "thick"
        assert doc["trace"] == ["0/1", "12/7", "24/11"]

    def test_strategy_round_trips_through_import(self, runner):
        from treegame import build_complete_tree, CompleteTreeSpec

        doc = run_json(runner, ["css", "--ctree", "2", "2"])
        x = strategy_from_pairs(doc["n"], doc["strategy"])
        t = build_complete_tree(CompleteTreeSpec(2, 2))
        assert guaranteed_gain(t, x)[0] == Fraction(doc["guaranteed_gain"])


class TestSpiderCommand:
    def test_optimal_depth_report(self, runner):
        doc = run_json(runner, ["spider", "--m", "3", "--l", "4"])
        assert doc["k"] == 1
        assert doc["guaranteed_gain"] == "3/1"
        assert doc["sandwich_ok"] is True
        assert doc["upper_bound"] == 4

    def test_explicit_depth(self, runner):
        doc = run_json(runner, ["spider", "--m", "3", "--l", "4", "--k", "2"])
        assert doc["k"] == 2 and doc["body_reply_gain"] == "3/1"

    def test_rejects_two_legs(self, runner):
        result = runner.invoke(cli, ["spider", "--m", "2", "--l", "4"])
        assert result.exit_code != 0


class TestCtreeCommand:
    def test_report(self, runner):
        doc = run_json(runner, ["ctree", "--m", "2", "--h", "2"])
        assert doc["value"] == "24/11"
        assert doc["verified"] is True
        assert doc["safe_strategy"] == [[0, "3/11"], [1, "4/11"], [2, "4/11"]]


class TestExperimentCommand:
    def test_run_writes_csvs(self, runner, tmp_path):
        out = tmp_path / "out"
        doc = run_json(
            runner,
            ["experiment", "--n", "12", "--trials", "3", "--seed", "5", "--out", str(out)],
        )
        assert doc["completed"] == 3 and doc["failed"] == 0
        with open(out / "records.csv") as fh:
            assert len(list(csv.DictReader(fh))) == 3
        with open(out / "histogram.csv") as fh:
            rows = list(csv.DictReader(fh))
        assert rows[0]["bin_low"] == "0"

    def test_config_file(self, runner, tmp_path):
        cfg = tmp_path / "exp.cfg"
        cfg.write_text("n=10\ntrials=2\nseed=3\n")
        doc = run_json(runner, ["experiment", "--config", str(cfg), "--out", str(tmp_path)])
        assert doc["trials"] == 2

    def test_missing_settings(self, runner):
        result = runner.invoke(cli, ["experiment", "--n", "10"])
        assert result.exit_code != 0


class TestDeterminismAndExitCodes:
    def test_byte_identical_invocations(self, runner):
        a = runner.invoke(cli, ["value", "--ctree", "3", "2"], catch_exceptions=False)
        b = runner.invoke(cli, ["value", "--ctree", "3", "2"], catch_exceptions=False)
        assert a.output == b.output

    def test_input_error_exit_code(self, tmp_path):
        import subprocess
        import sys

        bad = tmp_path / "bad.tree"
        bad.write_text("3\n0 1\n1 2\n0 2\n")
        proc = subprocess.run(
            [sys.executable, "-m", "treegame.cli", "css", "--tree", str(bad)],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 1
        assert "cycle" in proc.stderr

    def test_usage_error_exit_code(self):
        import subprocess
        import sys

        proc = subprocess.run(
            [sys.executable, "-m", "treegame.cli", "css"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 1

    def test_success_exit_code(self):
        import subprocess
        import sys

        proc = subprocess.run(
            [sys.executable, "-m", "treegame.cli", "value", "--ctree", "2", "1"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert json.loads(proc.stdout)["value"] == "4/5"
