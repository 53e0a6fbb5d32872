"""Tests for CLI functionality."""

import csv
import io
import json
import math
from pathlib import Path

from click.testing import CliRunner

import fpintegrate
from fpintegrate.__main__ import cli


def _invoke(*args: str, **kwargs):
    return CliRunner().invoke(cli, ["-q", *args], **kwargs)


def _value(result) -> complex:
    value = json.loads(result.stdout)["value"]
    return complex(value["re"], value["im"])


def test_cli_version() -> None:
    """CLI: --version outputs version string."""
    result = CliRunner().invoke(cli, ["--version"])
    assert result.exit_code == 0
    assert "version" in result.output.lower()
    assert fpintegrate.__version__ in result.output


def test_cli_help() -> None:
    """CLI: --help outputs usage, options and subcommands."""
    result = CliRunner().invoke(cli, ["--help"])
    assert result.exit_code == 0
    assert "Usage:" in result.output
    for text in ("--quiet", "--verbose", "--trace", "--max-terms", "--seed", "--output"):
        assert text in result.output
    for command in ("fpi", "stieltjes", "hyp", "verify"):
        assert command in result.output


# fpi
def test_cli_fpi_branch() -> None:
    """CLI: fpi branch prints the closed form as JSON."""
    result = _invoke("fpi", "branch", "--s", "1", "--upsilon", "0.5", "--lambda", "1.5")
    assert result.exit_code == 0, result.output
    record = json.loads(result.stdout)
    assert record["family"] == "branch"
    assert record["method"] == "closed"
    assert record["error_estimate"] is None
    assert abs(_value(result) + 2) < 1e-12


def test_cli_fpi_pole_and_beta() -> None:
    """CLI: fpi pole and fpi beta reference values."""
    result = _invoke("fpi", "pole", "--s", "2", "--upsilon", "1", "--n", "0")
    assert result.exit_code == 0, result.output
    assert abs(_value(result) - math.log(2) / 2) < 1e-12
    result = _invoke("fpi", "beta", "--sigma", "0.5", "--rho", "1.5")
    assert result.exit_code == 0, result.output
    assert _value(result) == 0


def test_cli_fpi_branch_near_integer_warning() -> None:
    """CLI: a near-integer lambda lists its conditioning warning."""
    result = _invoke(
        "fpi", "branch", "--s", "2", "--upsilon", "1.3", "--lambda", "2.0000001"
    )
    assert result.exit_code == 0, result.output
    (warning,) = json.loads(result.stdout)["warnings"]
    assert warning.startswith("lambda=")


def test_cli_fpi_oracle_method() -> None:
    """CLI: --method oracle extracts the value with an error estimate."""
    result = _invoke(
        "fpi", "branch", "--s", "1", "--upsilon", "0.5", "--lambda", "1.5",
        "--method", "oracle",
    )
    assert result.exit_code == 0, result.output
    assert abs(_value(result) + 2) < 1e-4
    assert json.loads(result.stdout)["error_estimate"] is not None


def test_cli_fpi_oracle_command() -> None:
    """CLI: fpi oracle takes the family and only its parameters."""
    result = _invoke("fpi", "oracle", "--family", "pole", "--s", "2", "--upsilon", "1", "--n", "0")
    assert result.exit_code == 0, result.output
    assert abs(_value(result) - math.log(2) / 2) < 1e-4


def test_cli_fpi_domain_error() -> None:
    """CLI: an integer lambda is a domain error with exit code 2."""
    result = _invoke("fpi", "branch", "--s", "1", "--upsilon", "0.5", "--lambda", "2")
    assert result.exit_code == 2


def test_cli_fpi_complex_parameter() -> None:
    """CLI: complex parameters are accepted."""
    result = _invoke("fpi", "branch", "--s", "1+0.5i", "--upsilon", "0.5", "--lambda", "1.5")
    assert result.exit_code == 0, result.output
    assert json.loads(result.stdout)["params"]["s"] == {"re": 1.0, "im": 0.5}


def test_cli_bad_complex() -> None:
    """CLI: an unparseable number is a usage error."""
    result = _invoke("fpi", "beta", "--sigma", "abc", "--rho", "1.5")
    assert result.exit_code == 2


def test_cli_csv_output() -> None:
    """CLI: --output csv writes a header and one row."""
    result = _invoke(
        "--output", "csv", "fpi", "branch", "--s", "1", "--upsilon", "0.5", "--lambda", "1.5"
    )
    assert result.exit_code == 0, result.output
    (row,) = list(csv.DictReader(io.StringIO(result.stdout)))
    assert row["family"] == "branch"
    assert abs(float(row["value_re"]) + 2) < 1e-12


# stieltjes
def test_cli_stieltjes_both_integer() -> None:
    """CLI: integer rho and nu report the quadrature value only."""
    result = _invoke("stieltjes", "--a", "2", "--b", "1", "--mu", "1", "--nu", "1", "--rho", "1")
    assert result.exit_code == 0, result.output
    record = json.loads(result.stdout)
    assert record["series"] is None
    assert record["case"] is None
    assert abs(record["direct"]["re"] - math.log(2)) < 1e-10


def test_cli_stieltjes_series() -> None:
    """CLI: the series agrees with quadrature."""
    result = _invoke(
        "stieltjes", "--a", "2", "--b", "1", "--mu", "0.6", "--nu", "0.4", "--rho", "0.7"
    )
    assert result.exit_code == 0, result.output
    record = json.loads(result.stdout)
    assert record["case"] == "BranchBranch"
    assert record["rel_residual"] < 1e-8
    assert record["terms_used"] > 0


def test_cli_stieltjes_b_outside_a() -> None:
    """CLI: |b| > |a| is a domain error."""
    result = _invoke(
        "stieltjes", "--a", "1", "--b", "2", "--mu", "0.6", "--nu", "0.4", "--rho", "0.7"
    )
    assert result.exit_code == 2


# hyp
def test_cli_hyp_2f1_methods_agree() -> None:
    """CLI: hyp 2f1 series, transform and fpi agree."""
    values = []
    for method in ("series", "transform", "fpi"):
        result = _invoke("hyp", "2f1", "0.3", "0.7", "1.9", "0.6", "--method", method)
        assert result.exit_code == 0, result.output
        values.append(_value(result))
    assert abs(values[1] - values[0]) < 1e-9 * abs(values[0])
    assert abs(values[2] - values[0]) < 1e-8 * abs(values[0])


def test_cli_hyp_3f2_transform() -> None:
    """CLI: hyp 3f2 transform agrees with the series."""
    args = ["hyp", "3f2", "1.6", "0.3", "1", "0.9", "0.6"]
    series = _invoke(*args)
    transform = _invoke(*args, "--method", "transform")
    assert series.exit_code == 0, series.output
    assert transform.exit_code == 0, transform.output
    assert json.loads(series.stdout)["status"] == "converged"
    assert abs(_value(transform) - _value(series)) < 1e-8 * abs(_value(series))


def test_cli_hyp_series_radius() -> None:
    """CLI: |z| beyond the series radius exits with code 2."""
    result = _invoke("hyp", "2f1", "0.3", "0.7", "1.9", "0.99")
    assert result.exit_code == 2


# verify
def test_cli_verify_tag() -> None:
    """CLI: verify --tag sweeps one identity and prints JSON."""
    result = _invoke("verify", "--tag", "keykey", "--count", "3")
    assert result.exit_code == 0, result.output
    (record,) = json.loads(result.stdout)
    assert record["tag"] == "keykey"
    assert record["count"] == 3
    assert record["failures"] == 0


def test_cli_verify_seeded() -> None:
    """CLI: the same seed gives the same report."""
    first = _invoke("--seed", "5", "verify", "--tag", "xxx12", "--count", "2")
    second = _invoke("--seed", "5", "verify", "--tag", "xxx12", "--count", "2")
    assert first.exit_code == 0, first.output
    assert first.stdout == second.stdout


def test_cli_verify_unknown_tag() -> None:
    """CLI: an unknown tag is a usage error."""
    result = _invoke("verify", "--tag", "nonsense")
    assert result.exit_code == 2


def test_cli_verify_needs_selection() -> None:
    """CLI: verify without a selection is a usage error."""
    result = _invoke("verify")
    assert result.exit_code == 2


def test_cli_verify_list() -> None:
    """CLI: verify --list names every identity."""
    result = _invoke("verify", "--list")
    assert result.exit_code == 0
    assert "keykey\t" in result.stdout
    assert "res2x\t" in result.stdout


def test_cli_verify_csv() -> None:
    """CLI: verify with --output csv writes one row per sample."""
    result = _invoke("--output", "csv", "verify", "--tag", "keykey", "--count", "2")
    assert result.exit_code == 0, result.output
    rows = list(csv.DictReader(io.StringIO(result.stdout)))
    assert len(rows) == 2


def test_cli_verify_tolerance_failure() -> None:
    """CLI: an impossible tolerance fails the sweep with exit code 1."""
    result = _invoke("--tol", "1e-300", "verify", "--tag", "mainresult3", "--count", "2")
    assert result.exit_code == 1
    (record,) = json.loads(result.stdout)
    assert record["failures"] > 0


# configuration
def test_cli_config_file(tmp_path: Path, write_yaml) -> None:
    """CLI: --config supplies defaults, invalid values exit with code 2."""
    config_file = tmp_path / "fpi.yaml"
    write_yaml(config_file, {"output_format": "csv"})
    result = _invoke(
        "--config", str(config_file), "fpi", "beta", "--sigma", "1", "--rho", "0.5"
    )
    assert result.exit_code == 0, result.output
    assert result.stdout.startswith("family,")
    write_yaml(config_file, {"max_terms": 8})
    result = _invoke("--config", str(config_file), "fpi", "beta", "--sigma", "1", "--rho", "0.5")
    assert result.exit_code == 2


def test_cli_max_terms_env(clean_env) -> None:
    """CLI: FPI_MAX_TERMS is validated like --max-terms."""
    result = _invoke(
        "fpi", "beta", "--sigma", "1", "--rho", "0.5", env={"FPI_MAX_TERMS": "8"}
    )
    assert result.exit_code == 2


# numerical failures
def test_cli_stieltjes_near_ratio_limit() -> None:
    """CLI: b/a close to the limit sums hundreds of pole terms without error."""
    result = _invoke(
        "stieltjes", "--a", "1", "--b", "0.88", "--mu", "1.5", "--nu", "1.3", "--rho", "0.3"
    )
    assert result.exit_code == 0, result.output
    record = json.loads(result.stdout)
    assert record["case"] == "PoleOriginPos"
    assert record["rel_residual"] < 1e-7


def test_cli_arithmetic_error_exit_code(monkeypatch) -> None:
    """CLI: an overflow inside a command exits with code 1, not a traceback."""

    def overflow(spec):
        raise OverflowError("int too large to convert to float")

    monkeypatch.setattr("fpintegrate.__main__.stieltjes_fpi_series", overflow)
    result = _invoke(
        "stieltjes", "--a", "2", "--b", "1", "--mu", "0.6", "--nu", "0.4", "--rho", "0.7"
    )
    assert result.exit_code == 1
    assert isinstance(result.exception, SystemExit)
