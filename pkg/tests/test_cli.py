"""
Tests for CLI functionality and command interface
"""

import json

import pytest
from typer.testing import CliRunner

from interpiq.cli.main import app
from interpiq.core import InterpolationAnalyzer
from interpiq.sequences import gen_section6

pytestmark = [pytest.mark.cli, pytest.mark.integration]


@pytest.fixture
def runner():
    """Create CLI test runner"""
    return CliRunner()


@pytest.fixture
def invoke(runner, output_dir):
    """Run a command with results under the test output directory"""

    def _invoke(*args, options=()):
        return runner.invoke(app, ["-o", str(output_dir), *options, *args])

    return _invoke


def config_error(result) -> dict:
    """The JSON diagnostic a config error prints"""
    line = next(l for l in result.output.splitlines() if l.startswith("{"))
    return json.loads(line)


class TestMainCLI:
    """Test help, version and error handling"""

    def test_cli_help(self, runner):
        result = runner.invoke(app, ["--help"])
        assert result.exit_code == 0
        assert "InterpIQ" in result.output

    def test_cli_version(self, runner):
        result = runner.invoke(app, ["version"])
        assert result.exit_code == 0
        assert "1.0.0" in result.output

    def test_missing_generator(self, invoke):
        result = invoke("carleson")
        assert result.exit_code == 2
        assert config_error(result) == {"error": "config", "field": "gen", "reason": "missing value"}

    def test_unknown_shape(self, invoke):
        result = invoke("probe", "--shape", "cubic:3")
        assert result.exit_code == 2
        assert config_error(result)["field"] == "shape"

    def test_bad_config_file(self, runner, tmp_path):
        path = tmp_path / "run.json"
        path.write_text(json.dumps({"gen": "radial:0.5,10", "colour": "red"}))
        result = runner.invoke(app, ["--config", str(path), "carleson"])
        assert result.exit_code == 2
        assert config_error(result)["field"] == "colour"

    def test_config_file_supplies_generator(self, runner, tmp_path):
        path = tmp_path / "run.json"
        out = tmp_path / "from_config"
        path.write_text(json.dumps({"gen": "radial:0.5,10", "output_dir": str(out)}))
        result = runner.invoke(app, ["--config", str(path), "carleson"])
        assert result.exit_code == 0
        assert (out / "carleson.json").exists()


class TestSequenceCommands:
    """Test generate, phi-lambda, carleson and squares"""

    def test_generate(self, invoke, output_dir):
        result = invoke("generate", "--gen", "radial:0.5,10")
        assert result.exit_code == 0
        for name in ("generate.csv", "generate.manifest.json", "generate_points.json", "generate_points.manifest.json"):
            assert (output_dir / name).exists()
        manifest = json.loads((output_dir / "generate.manifest.json").read_text())
        assert manifest["config"]["command"] == "generate"
        assert manifest["config"]["gen"] == "radial:0.5,10"

    def test_generate_pairs(self, invoke, output_dir):
        result = invoke("generate", "--gen", "radial:0.5,6", "--eta", "2")
        assert result.exit_code == 0
        assert (output_dir / "generate_residuals.csv").exists()

    def test_generated_file_is_a_generator(self, invoke, output_dir):
        assert invoke("generate", "--gen", "explicit:0.5,0.3+0.4j,-0.6j").exit_code == 0
        result = invoke("carleson", "--gen", f"file:{output_dir / 'generate_points.json'}")
        assert result.exit_code == 0
        assert json.loads((output_dir / "carleson.json").read_text())["size"] == 3

    def test_phi_lambda(self, invoke, output_dir):
        result = invoke("phi-lambda", "--gen", "radial:0.5,10")
        assert result.exit_code == 0
        assert (output_dir / "phi_lambda.csv").exists()
        assert json.loads((output_dir / "phi_lambda.json").read_text())["rows"] == 10

    def test_carleson(self, invoke, output_dir):
        result = invoke("carleson", "--gen", "radial:0.5,20")
        assert result.exit_code == 0
        assert json.loads((output_dir / "carleson.json").read_text())["verdict"] == "carleson"

    def test_squares(self, invoke, output_dir):
        result = invoke("squares", "--gen", "section6:1,4")
        assert result.exit_code == 0
        assert (output_dir / "squares.csv").read_text().splitlines()[0].startswith("n,k")


class TestOrliczCommands:
    """Test orlicz-norm, conjugate and probe"""

    def test_orlicz_norm(self, invoke, output_dir):
        result = invoke("orlicz-norm", "--shape", "power:2", "--weight", "indicator:0.25")
        assert result.exit_code == 0
        data = json.loads((output_dir / "orlicz_norm.json").read_text())
        assert data["luxemburg"] == pytest.approx(0.5, rel=1e-8)
        assert data["indicator_oracle"] == pytest.approx(data["luxemburg"], rel=1e-8)

    def test_shadow_weight_needs_sequence(self, invoke):
        result = invoke("orlicz-norm", "--shape", "psi:1", "--weight", "shadow:1")
        assert result.exit_code == 2
        assert config_error(result)["field"] == "weight"

    def test_conjugate(self, invoke, output_dir):
        result = invoke("conjugate", "--shape", "power:2", "--points", "5")
        assert result.exit_code == 0
        lines = (output_dir / "conjugate.csv").read_text().splitlines()
        assert lines[0] == "s,conjugate,maximizer,biconjugate_at_maximizer"
        assert len(lines) == 6

    def test_conjugate_range(self, invoke):
        result = invoke("conjugate", "--shape", "power:2", "--s-min", "2", "--s-max", "1")
        assert result.exit_code == 2
        assert config_error(result)["field"] == "s_range"

    def test_probe(self, invoke, output_dir):
        result = invoke("probe", "--shape", "power:2")
        assert result.exit_code == 0
        data = json.loads((output_dir / "probe.json").read_text())
        assert data["strongly_convex"] is True
        assert len(data) == 4

    def test_probe_needs_both_ends(self, invoke):
        result = invoke("probe", "--shape", "power:2", "--t-min", "1")
        assert result.exit_code == 2


class TestDiagnosticCommands:
    """Test the diagnostics end to end on small inputs"""

    def test_majorant_check(self, invoke, output_dir):
        result = invoke("majorant-check", "--gen", "radial:0.5,10")
        assert result.exit_code == 0
        manifest = json.loads((output_dir / "majorant_check.manifest.json").read_text())
        assert manifest["verdicts"] == {"majorant": "majorized"}
        assert set(manifest["outputs"]) == {"majorant_check.csv", "majorant_check.json"}

    def test_strict_undecided_exits_one(self, invoke):
        top = float(InterpolationAnalyzer(gen_section6(1.0, 4)).phi.max())
        args = ("majorant-check", "--gen", "section6:1,4", "--weight", f"constant:{top!r}")
        assert invoke(*args).exit_code == 0
        assert invoke(*args, options=("--strict",)).exit_code == 1

    def test_balayage(self, invoke, output_dir):
        result = invoke("balayage", "--measure", "atoms:0.5/1,0.9j/2", "--shape", "power:2", "--grid-base", "256")
        assert result.exit_code == 0
        data = json.loads((output_dir / "balayage_norm.json").read_text())
        assert data["dual_norm"]["value"] > 0.0
        assert (output_dir / "balayage.csv").exists()

    def test_condition_d(self, invoke, output_dir):
        result = invoke(
            "condition-d", "--gen", "radial:0.5,8", "--shape", "psi:1", "--budget", "10", "--grid-base", "256"
        )
        assert result.exit_code == 0
        assert json.loads((output_dir / "condition_d.json").read_text())["ratio"] > 0.0
        assert (output_dir / "condition_d_trace.csv").exists()

    def test_condition_d_nevanlinna(self, invoke, output_dir):
        result = invoke("condition-d", "--gen", "radial:0.5,8", "--nevanlinna", "--budget", "10", "--grid-base", "256")
        assert result.exit_code == 0
        assert json.loads((output_dir / "condition_d.json").read_text())["norm"] == "sup"

    def test_hoffman(self, invoke, output_dir):
        result = invoke("hoffman", "--gen", "radial:0.5,12", "--delta", "0.3")
        assert result.exit_code == 0
        split = (output_dir / "hoffman_split.csv").read_text().splitlines()
        assert split[0].endswith(",part")
        assert len(split) == 13
        assert "eta" in json.loads((output_dir / "hoffman.json").read_text())

    def test_hoffman_poor_separation(self, invoke):
        result = invoke("hoffman", "--gen", "radial:0.5,12", "--delta", "0.5")
        assert result.exit_code == 1

    def test_shadow(self, invoke, output_dir):
        result = invoke("shadow", "--gen", "section6:1,4", "--shape", "psi:0.5", "--terms", "10000")
        assert result.exit_code == 0
        data = json.loads((output_dir / "shadow.json").read_text())
        assert data["membership"]["verdict"] == "member"
        assert data["c0"] > 0.0
        assert (output_dir / "shadow_weight.csv").exists()

    @pytest.mark.slow
    def test_section6_report(self, invoke, output_dir):
        result = invoke(
            "section6-report", "--epsilon", "1", "--n", "3..4", "--j-offset", "8", "--shadow-terms", "10000"
        )
        assert result.exit_code == 0
        for suffix in (".csv", ".json", ".manifest.json"):
            assert (output_dir / f"section6_report{suffix}").exists()

    def test_section6_bad_range(self, invoke):
        result = invoke("section6-report", "--n", "1..50")
        assert result.exit_code == 2
        assert config_error(result)["field"] == "n_range"


@pytest.mark.slow
class TestParallelDeterminism:
    """CSV outputs do not depend on the worker count"""

    def run_twice(self, runner, tmp_path, *args):
        outputs = []
        for workers in ("1", "8"):
            target = tmp_path / f"j{workers}"
            result = runner.invoke(app, ["-o", str(target), "-j", workers, *args])
            assert result.exit_code == 0, result.output
            outputs.append(target)
        return outputs

    def test_phi_lambda_bytes(self, runner, tmp_path):
        serial, threaded = self.run_twice(runner, tmp_path, "phi-lambda", "--gen", "section6:1,10")
        assert (serial / "phi_lambda.csv").read_bytes() == (threaded / "phi_lambda.csv").read_bytes()

    def test_section6_report_bytes(self, runner, tmp_path):
        serial, threaded = self.run_twice(
            runner, tmp_path, "section6-report", "--epsilon", "1", "--n", "8..10", "--j-offset", "8", "--shadow-terms", "10000"
        )
        assert (serial / "section6_report.csv").read_bytes() == (threaded / "section6_report.csv").read_bytes()
