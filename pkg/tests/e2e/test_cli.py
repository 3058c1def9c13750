"""
End-to-End CLI Tests
====================
Invoke the modspace command line through click's CliRunner, from field files
on disk to reports on stdout or in an output directory.
"""

import csv
import io
import json
import math

import pytest
from click.testing import CliRunner

from cli.main import cli
from core.field import constant_field, single_mode
from core.grid import make_grid

ROOT_2PI = math.sqrt(2 * math.pi)


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def mode_file(tmp_path, mode3, write_field_file):
    return str(write_field_file(tmp_path / "mode.json", mode3))


@pytest.fixture
def riccati_file(tmp_path, write_field_file):
    return str(write_field_file(tmp_path / "riccati.json", constant_field(make_grid(1, 1, 16), 0.1)))


def _csv(text):
    return list(csv.reader(io.StringIO(text)))


class TestNormCommand:
    """Test `modspace norm`."""

    def test_single_mode(self, runner, mode_file):
        result = runner.invoke(cli, ["--timings", "norm", mode_file, "--s", "0", "--p", "2", "--q", "2"])
        assert result.exit_code == 0, result.output
        report = json.loads(result.output)
        assert report["value"] == pytest.approx(ROOT_2PI, abs=1e-10)
        assert report["manifest"]["command"] == "norm"
        assert mode_file in report["manifest"]["inputs"]
        assert report["breakdown"] is None
        assert report["manifest"]["operations"]["cli.norm"]["count"] == 1

    def test_default_report_is_reproducible(self, runner, mode_file):
        args = ["norm", mode_file, "--s", "1", "--q", "1"]
        first = runner.invoke(cli, args)
        second = runner.invoke(cli, args)
        assert first.exit_code == 0, first.output
        assert first.output == second.output
        manifest = json.loads(first.output)["manifest"]
        assert manifest["runtime"] is None
        assert manifest["operations"] is None

    def test_breakdown_sums_to_total(self, runner, tmp_path, write_field_file):
        grid = make_grid(1, 1, 32)
        path = write_field_file(tmp_path / "two.json", single_mode(grid, 3) + single_mode(grid, -5, 2.0))
        result = runner.invoke(cli, ["norm", str(path), "--q", "3", "--s", "1", "--breakdown"])
        assert result.exit_code == 0, result.output
        report = json.loads(result.output)
        total = sum(box["weighted"] ** 3 for box in report["breakdown"]) ** (1 / 3)
        assert total == pytest.approx(report["value"], rel=1e-12)

    def test_csv_format(self, runner, mode_file):
        result = runner.invoke(cli, ["--format", "csv", "norm", mode_file])
        assert result.exit_code == 0, result.output
        rows = _csv(result.output)
        assert rows[0] == ["s", "p", "q", "value"]
        assert float(rows[1][3]) == pytest.approx(ROOT_2PI, abs=1e-10)

    def test_missing_file(self, runner, tmp_path):
        result = runner.invoke(cli, ["norm", str(tmp_path / "absent.json")])
        assert result.exit_code == 4
        assert "modspace-error[file-not-found]" in result.output

    def test_malformed_file(self, runner, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"n": 1, "P": 1, "M": 15, "samples": []}')
        result = runner.invoke(cli, ["norm", str(path)])
        assert result.exit_code == 4
        assert "modspace-error[malformed-file]" in result.output

    def test_k_max_too_large(self, runner, mode_file):
        result = runner.invoke(cli, ["norm", mode_file, "--k-max", "8"])
        assert result.exit_code == 3
        assert "modspace-error[" in result.output


class TestDecomposeCommand:
    """Test `modspace decompose`."""

    def test_writes_boxes(self, runner, tmp_path, mode_file):
        out = tmp_path / "out"
        result = runner.invoke(cli, ["--out", str(out), "decompose", mode_file, "--window", "sharp"])
        assert result.exit_code == 0, result.output
        report = json.loads((out / "decompose.json").read_text())
        assert list(report["files"]) == ["box_3"]
        assert (out / "boxes" / "box_3.json").exists()
        assert str(out / "decompose.csv") in report["manifest"]["outputs"]


class TestClassifyCommand:
    """Test `modspace classify`."""

    def test_wellposed_line(self, runner):
        result = runner.invoke(cli, ["classify", "--equation", "fractional-heat", "--alpha", "1",
                                     "--n", "1", "--k", "2", "--s", "0.2", "--q", "2"])
        assert result.exit_code == 0
        assert result.output.startswith("WellPosed (Theorem 2: σ=-0.30 > -1.00)")

    def test_schrodinger_gap(self, runner):
        result = runner.invoke(cli, ["classify", "--equation", "schrodinger", "--k", "3", "--s", "-0.5", "--q", "2"])
        assert result.exit_code == 0
        assert result.output.startswith("Gap (Corollary 1: ")
        assert "interval" in result.output

    def test_zero_alpha(self, runner):
        result = runner.invoke(cli, ["classify", "--alpha", "0", "--s", "0", "--q", "2"])
        assert result.exit_code == 2
        assert "modspace-error[invalid-parameter]" in result.output

    def test_infinite_q_rejected(self, runner):
        result = runner.invoke(cli, ["classify", "--alpha", "1", "--s", "0", "--q", "inf"])
        assert result.exit_code == 2


class TestSweepCommand:
    """Test `modspace sweep`."""

    def test_phase_diagram_csv(self, runner):
        result = runner.invoke(cli, ["--format", "csv", "sweep", "--alpha", "1", "--s-min", "-3",
                                     "--s-max", "1", "--s-points", "41", "--q-values", "1,2,4"])
        assert result.exit_code == 0, result.output
        rows = _csv(result.output)
        assert rows[0] == ["s", "q", "inv_q", "sigma", "status", "rule", "overlap"]
        assert len(rows) == 1 + 123
        assert {row[4] for row in rows[1:]} == {"WellPosed", "IllPosed", "Gap"}

    def test_single_point(self, runner):
        result = runner.invoke(cli, ["--format", "csv", "sweep", "--s-min", "0.5", "--s-max", "0.5",
                                     "--s-points", "1", "--q-values", "2"])
        assert result.exit_code == 0, result.output
        assert len(_csv(result.output)) == 2

    def test_empty_range(self, runner):
        result = runner.invoke(cli, ["sweep", "--s-min", "1", "--s-max", "0"])
        assert result.exit_code == 2
        assert "modspace-error[invalid-parameter]" in result.output


class TestEvolveCommand:
    """Test `modspace evolve`."""

    def test_riccati(self, runner, tmp_path, riccati_file):
        out = tmp_path / "run"
        result = runner.invoke(cli, ["--out", str(out), "evolve", riccati_file, "--alpha", "1", "--k", "2", "--T", "1"])
        assert result.exit_code == 0, result.output
        report = json.loads((out / "evolve.json").read_text())
        assert report["status"] == "converged"
        assert report["final_norm"] == pytest.approx(ROOT_2PI / 9, abs=1e-6)
        assert report["residual"] <= 1e-9
        assert (out / "states" / "state_0000.json").exists()
        assert report["manifest"]["config"]["quad_nodes"] == 16

    def test_etd_mode(self, runner, riccati_file):
        result = runner.invoke(cli, ["evolve", riccati_file, "--mode", "etd-step", "--etd-substeps", "64"])
        assert result.exit_code == 0, result.output
        report = json.loads(result.output)
        assert report["mode"] == "etd-step"
        assert report["final_norm"] == pytest.approx(ROOT_2PI / 9, abs=1e-6)

    def test_linear(self, runner, mode_file):
        result = runner.invoke(cli, ["evolve", mode_file, "--linear", "--T", "1"])
        assert result.exit_code == 0, result.output
        report = json.loads(result.output)
        assert report["status"] == "linear"
        assert report["final_norm"] == pytest.approx(ROOT_2PI * math.exp(-3.0), rel=1e-10)

    def test_dump_multiplier(self, runner, mode_file):
        result = runner.invoke(cli, ["evolve", mode_file, "--kind", "schrodinger", "--T", "1", "--dump-multiplier"])
        assert result.exit_code == 0, result.output
        rows = _csv(result.output)
        assert rows[0] == ["xi_1", "re", "im"]
        assert len(rows) == 1 + 16
        for row in rows[1:]:
            assert math.hypot(float(row[1]), float(row[2])) == pytest.approx(1.0, abs=1e-14)

    def test_bad_dealias_factor(self, runner, mode_file):
        result = runner.invoke(cli, ["evolve", mode_file, "--k", "3", "--dealias-factor", "1.5"])
        assert result.exit_code == 2
        assert "modspace-error[invalid-parameter]" in result.output


class TestProbeCommands:
    """Test `modspace probe`."""

    @pytest.mark.slow
    def test_inflation_case_one(self, runner):
        result = runner.invoke(cli, ["--no-timings", "probe", "inflation", "--case", "1"])
        assert result.exit_code == 0, result.output
        report = json.loads(result.output)
        assert report["verdict"] == "ConsistentWithPaper"
        assert report["runtime"] is None
        assert report["manifest"]["operations"] is None
        assert report["manifest"]["config"]["N_list"] == [8, 16, 32, 64]

    def test_isomorphism_to_directory(self, runner, tmp_path):
        out = tmp_path / "iso"
        result = runner.invoke(cli, ["--out", str(out), "probe", "isomorphism", "--N-list", "4,8,16"])
        assert result.exit_code == 0, result.output
        rows = _csv((out / "probe_isomorphism.csv").read_text())
        assert rows[0][:2] == ["parameter", "value"]
        assert len(rows) == 4
        assert "ConsistentWithPaper" in result.output

    def test_deterministic_csv(self, runner):
        args = ["--seed", "11", "--format", "csv", "probe", "decay", "--k-list", "2,4,8", "--ensemble-size", "3"]
        first = runner.invoke(cli, args)
        second = runner.invoke(cli, args)
        assert first.exit_code == 0, first.output
        assert first.output == second.output

    def test_too_few_points(self, runner):
        result = runner.invoke(cli, ["probe", "inflation", "--N-list", "8,16"])
        assert result.exit_code == 2
        assert "modspace-error[probe]" in result.output


class TestGlobalBehaviour:
    """Test config documents and usage errors."""

    def test_config_document(self, runner, tmp_path):
        document = tmp_path / "run.json"
        document.write_text(json.dumps({
            "seed": 5,
            "timings": False,
            "probe": {"isomorphism": {"N-list": [2, 4, 8], "sigma": -1.0}},
        }))
        result = runner.invoke(cli, ["--config", str(document), "probe", "isomorphism"])
        assert result.exit_code == 0, result.output
        report = json.loads(result.output)
        assert report["manifest"]["seed"] == 5
        assert report["manifest"]["config"]["sigma"] == -1.0
        assert [point["value"] for point in report["points"]] == [2.0, 4.0, 8.0]

    def test_flags_override_config(self, runner, tmp_path):
        document = tmp_path / "run.json"
        document.write_text(json.dumps({"seed": 5}))
        result = runner.invoke(cli, ["--config", str(document), "--seed", "9", "--no-timings",
                                     "probe", "isomorphism", "--N-list", "2,4,8"])
        assert json.loads(result.output)["manifest"]["seed"] == 9

    def test_missing_config(self, runner, tmp_path):
        result = runner.invoke(cli, ["--config", str(tmp_path / "none.json"), "classify", "--s", "0", "--q", "2"])
        assert result.exit_code == 2
        assert "modspace-error[invalid-parameter]" in result.output

    def test_unknown_subcommand(self, runner):
        result = runner.invoke(cli, ["frobnicate"])
        assert result.exit_code == 2
        assert "Usage" in result.output
        assert "modspace-error[usage]" in result.output
