"""Command line tests through click's runner."""
import csv
import io
import json

import jsonschema
import mpmath
import pytest
from click.testing import CliRunner

from zeta_laplace_lab import lab
from zeta_laplace_lab.cache import CACHE_DIR_ENV
from zeta_laplace_lab.utils import DEFAULT_CONFIG, InvalidConfigurationError

from zeta_laplace_lab.tests.conftest import SAMPLE_CONFIG, reference_xi


@pytest.fixture
def config_path(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps(SAMPLE_CONFIG))
    return str(path)


@pytest.fixture
def runner():
    return CliRunner()


def test_load_config_precedence(tmp_path, monkeypatch):
    """Defaults < file < environment < flags."""
    path = tmp_path / "config.json"
    path.write_text(json.dumps({"digits": 40, "cache_dir": "/from/file"}))
    monkeypatch.setenv(CACHE_DIR_ENV, "/from/env")
    config = lab.load_config(str(path), {"digits": 50, "k_trunc": None})
    assert config["digits"] == 50
    assert config["k_trunc"] == DEFAULT_CONFIG["k_trunc"]
    assert config["cache_dir"] == "/from/env"


def test_config_validation():
    with pytest.raises(InvalidConfigurationError):
        lab.load_config(None, {"digits": -3})
    with pytest.raises(InvalidConfigurationError):
        lab.load_config(None, {"output_format": "xml"})
    with pytest.raises(InvalidConfigurationError):
        lab.validate_config(dict(DEFAULT_CONFIG, digits="thirty"))


def test_y_max_beyond_precision_ceiling():
    with pytest.raises(InvalidConfigurationError):
        lab.load_config(None, {"y_max": 6.0})
    assert lab.load_config(None, {"y_max": 4.5})["y_max"] == 4.5


def test_dump_config_round_trips():
    config = lab.load_config()
    assert json.loads(lab.dump_config(config)) == dict(config)


def test_compute_f(runner, config_path):
    result = runner.invoke(lab.cli, ["--config", config_path, "compute", "f", "--at", "2,3", "--digits", "20"])
    assert result.exit_code == 0, result.output
    rows = list(csv.DictReader(io.StringIO(result.output)))
    assert [row["input"] for row in rows] == ["2.0", "3.0"]
    with mpmath.workdps(30):
        expected = 1 / (2 * reference_xi(mpmath.mpf("2.5")))
        assert abs(mpmath.mpf(rows[0]["value"]) - expected) < mpmath.mpf("1e-18")


def test_compute_json_output(runner, config_path, tmp_path):
    output = tmp_path / "lambda.json"
    result = runner.invoke(
        lab.cli,
        ["--config", config_path, "compute", "lambda", "--at", "0", "--digits", "15", "--out", "json", "--output", str(output)],
    )
    assert result.exit_code == 0, result.output
    rows = json.loads(output.read_text())
    assert len(rows) == 1
    assert -0.1 < float(rows[0]["value"]) < 0


def test_compute_at_pole(runner, config_path):
    result = runner.invoke(lab.cli, ["--config", config_path, "compute", "f", "--at", "4"])
    assert result.exit_code == lab.EXIT_CONFIG
    assert "NearPoleError" in result.output


def test_compute_beyond_y_max(runner, config_path):
    result = runner.invoke(lab.cli, ["--config", config_path, "compute", "lambda", "--at", "3"])
    assert result.exit_code == lab.EXIT_PRECISION


def test_invalid_config_file(runner, tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps({"digits": 0}))
    result = runner.invoke(lab.cli, ["--config", str(path), "compute", "f", "--at", "2"])
    assert result.exit_code == lab.EXIT_CONFIG


def test_check_without_zeros_is_degraded(runner, config_path, tmp_path):
    report_path = tmp_path / "report.json"
    result = runner.invoke(lab.cli, ["--config", config_path, "check", "continuity", "--report", str(report_path)])
    assert result.exit_code == lab.EXIT_DEGRADED
    assert "degraded" in result.output
    document = json.loads(report_path.read_text())
    jsonschema.validate(document, lab.report_jsonschema)
    assert document["reports"][0]["degraded"] is True


def test_check_positivity_report(runner, config_path, tmp_path):
    report_path = tmp_path / "report.json"
    args = ["--config", config_path, "check", "positivity", "--zeros", "bundled", "--report", str(report_path), "--no-timestamps"]
    result = runner.invoke(lab.cli, args)
    assert result.exit_code == lab.EXIT_PASS, result.output
    document = json.loads(report_path.read_text())
    assert [report["name"] for report in document["reports"]] == ["p0_positivity", "p0_boundedness"]
    assert "generated_at" not in document
    assert all("timestamps" not in report for report in document["reports"])
    assert document["config"]["zeros_path"] == "bundled"


def test_reports_are_reproducible(runner, config_path, tmp_path):
    """Without timestamps two runs write identical bytes."""
    paths = [tmp_path / "first.json", tmp_path / "second.json"]
    for path in paths:
        runner.invoke(lab.cli, ["--config", config_path, "check", "charbound", "--report", str(path), "--no-timestamps"])
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_peel_needs_zeros(runner, config_path):
    result = runner.invoke(lab.cli, ["--config", config_path, "recover", "peel"])
    assert result.exit_code == lab.EXIT_CONFIG


def test_peel_from_bundled_zeros(runner, config_path, tmp_path):
    report_path = tmp_path / "recovery.json"
    result = runner.invoke(
        lab.cli,
        ["--config", config_path, "recover", "peel", "--zeros", "bundled", "--n", "1", "--terms", "5",
         "--digits", "40", "--report", str(report_path)],
    )
    assert result.exit_code == lab.EXIT_PASS, result.output
    assert result.output.startswith("gamma_1 = 14.13472")
    document = json.loads(report_path.read_text())
    assert document["recovery"]["method"] == "peeling"
    assert "gamma_1_vs_table" in document["recovery"]["residuals"]


def test_zeros_command(runner, config_path, tmp_path):
    output = tmp_path / "zeros.txt"
    result = runner.invoke(
        lab.cli,
        ["--config", config_path, "zeros", "--from", "14", "--to", "22", "--step", "0.5", "--digits", "20", "--output", str(output)],
    )
    assert result.exit_code == 0, result.output
    assert "wrote 2 zeros" in result.output
    lines = [line for line in output.read_text().splitlines() if not line.startswith("#")]
    assert lines[0].startswith("14.1347251417346937")


def test_zeros_command_without_zeros(runner, config_path, tmp_path):
    result = runner.invoke(
        lab.cli, ["--config", config_path, "zeros", "--from", "15", "--to", "16", "--output", str(tmp_path / "z.txt")]
    )
    assert result.exit_code == lab.EXIT_CONFIG


def test_cache_commands(runner, tmp_path, monkeypatch):
    result = runner.invoke(lab.cli, ["cache", "stats"])
    assert result.exit_code == lab.EXIT_CONFIG
    monkeypatch.setenv(CACHE_DIR_ENV, str(tmp_path))
    result = runner.invoke(lab.cli, ["compute", "f", "--at", "2", "--digits", "15"])
    assert result.exit_code == 0, result.output
    result = runner.invoke(lab.cli, ["cache", "stats"])
    assert result.exit_code == 0
    assert not result.output.startswith("0 entries")
    result = runner.invoke(lab.cli, ["cache", "clear"])
    assert result.output.startswith("removed ")
    assert runner.invoke(lab.cli, ["cache", "stats"]).output.startswith("0 entries")
