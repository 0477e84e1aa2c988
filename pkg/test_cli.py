"""Tests for the command-line interface."""

import json

import pytest
from typer.testing import CliRunner

from cluster import app

runner = CliRunner()


@pytest.fixture
def numeric_csv(tmp_path):
    path = tmp_path / "points.csv"
    path.write_text("x,y\n0,0\n0.2,0.1\n0.1,0.3\n5,5\n5.2,4.8\n4.9,5.1\n", encoding="utf-8")
    return path


@pytest.fixture
def five_csv(tmp_path):
    path = tmp_path / "five.csv"
    path.write_text("x,y\n0,0\n1,0.2\n0.3,1\n4,4\n4.5,3.8\n", encoding="utf-8")
    return path


class TestCommands:
    def test_synth(self, tmp_path):
        out = tmp_path / "gaussian.csv"
        result = runner.invoke(app, ["synth", "--out", str(out), "--seed", "1"])
        assert result.exit_code == 0, result.output
        assert "wrote 150 points" in result.output
        assert out.read_text(encoding="utf-8").splitlines()[0] == "x0,x1,label"

    def test_run_brute_force(self, tmp_path, tiny_csv):
        result = runner.invoke(app, [
            "run", "--data", str(tiny_csv), "--label-column", "class",
            "--solver", "brute_force", "--output-dir", str(tmp_path / "out"),
        ])
        assert result.exit_code == 0, result.output
        assert "energy:" in result.output
        document = json.loads((tmp_path / "out" / "single_tiny.json").read_text(encoding="utf-8"))
        assert document["result"]["details"]["solver"] == "brute_force"
        assert document["result"]["summaries"]["Intra-Inter combined"]["rand_index"]["mean"] == 1.0

    def test_run_from_config_file(self, tmp_path, tiny_csv):
        config_file = tmp_path / "run.yaml"
        config_file.write_text(
            f"data: {tiny_csv}\nlabel_column: class\nobjectives: [intra_star]\n"
            f"output_dir: {tmp_path / 'out'}\n",
            encoding="utf-8",
        )
        result = runner.invoke(app, ["run", "--config", str(config_file), "--seed", "2"])
        assert result.exit_code == 0, result.output
        document = json.loads((tmp_path / "out" / "single_tiny.json").read_text(encoding="utf-8"))
        assert document["config"]["seed"] == 2
        assert document["result"]["params"]["kind"] == "intra_star"

    def test_sa_writes_json(self, tmp_path, numeric_csv):
        result = runner.invoke(app, [
            "sa", "--data", str(numeric_csv), "-o", "combined", "--sweeps", "50",
            "--restarts", "2", "--output-dir", str(tmp_path),
        ])
        assert result.exit_code == 0, result.output
        document = json.loads((tmp_path / "sa_points.json").read_text(encoding="utf-8"))
        assert document["result"]["protocol"] == "sa"
        assert set(document["result"]["summaries"]) == {"Intra-Inter combined", "k-means"}

    def test_kcluster(self, tmp_path, numeric_csv):
        result = runner.invoke(app, ["kcluster", "--k", "3", "--data", str(numeric_csv),
                                     "--output-dir", str(tmp_path)])
        assert result.exit_code == 0, result.output
        document = json.loads((tmp_path / "kcluster_points.json").read_text(encoding="utf-8"))
        assert len(set(document["result"]["details"]["labels"])) == 3

    def test_export_with_verification(self, tmp_path, five_csv):
        out = tmp_path / "inter.json"
        result = runner.invoke(app, ["export", "--data", str(five_csv), "-o", "inter",
                                     "--out", str(out), "--verify"])
        assert result.exit_code == 0, result.output
        assert "reduction sound: True" in result.output
        document = json.loads(out.read_text(encoding="utf-8"))
        assert document["num_original"] == 5
        assert len(document["auxiliaries"]) == document["num_vars"] - 5

    def test_export_unsound_penalty_exits_4(self, tmp_path, five_csv):
        result = runner.invoke(app, ["export", "--data", str(five_csv), "-o", "inter",
                                     "--out", str(tmp_path / "q.json"), "--verify", "--penalty", "1e-9"])
        assert result.exit_code == 4


class TestExitCodes:
    def test_export_refuses_large_inter(self, tmp_path):
        rows = "\n".join(f"{i},{i % 7}" for i in range(30))
        data = tmp_path / "thirty.csv"
        data.write_text("x,y\n" + rows + "\n", encoding="utf-8")
        result = runner.invoke(app, ["export", "--data", str(data), "-o", "inter",
                                     "--out", str(tmp_path / "q.json")])
        assert result.exit_code == 2
        assert not (tmp_path / "q.json").exists()

    def test_unknown_objective(self, tmp_path, numeric_csv):
        result = runner.invoke(app, ["run", "--data", str(numeric_csv), "-o", "kmedoids",
                                     "--output-dir", str(tmp_path)])
        assert result.exit_code == 2

    def test_no_dataset(self, tmp_path):
        result = runner.invoke(app, ["run", "--output-dir", str(tmp_path)])
        assert result.exit_code == 2

    def test_missing_data_file(self, tmp_path):
        result = runner.invoke(app, ["run", "--data", str(tmp_path / "absent.csv"),
                                     "--output-dir", str(tmp_path)])
        assert result.exit_code == 3

    def test_infeasible_constraints(self, tmp_path, numeric_csv):
        constraints = tmp_path / "c.json"
        constraints.write_text(json.dumps({"cardinality": {"C": 1}}), encoding="utf-8")
        result = runner.invoke(app, ["run", "--data", str(numeric_csv), "--constraints", str(constraints),
                                     "--output-dir", str(tmp_path)])
        assert result.exit_code == 5

    def test_too_large_for_brute_force(self, tmp_path):
        result = runner.invoke(app, ["run", "--synthetic", "--solver", "brute_force",
                                     "--output-dir", str(tmp_path)])
        assert result.exit_code == 4
