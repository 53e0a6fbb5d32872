"""Tests for numeric settings and command-line configuration."""

from pathlib import Path

import pytest
from pydantic import ValidationError

from fpintegrate.config import NumericSettings, get_settings, use_settings
from fpintegrate.config.cli import CliConfig, OutputFormat
from fpintegrate.errors import DomainError


# NumericSettings
def test_numeric_settings_defaults() -> None:
    """NumericSettings: documented defaults."""
    settings = NumericSettings()
    assert settings.max_terms == 10000
    assert settings.integer_tol == 1e-9
    assert settings.quad_epsrel == 1e-12


@pytest.mark.parametrize(
    "field, value",
    [
        ("tolerance", 0.0),
        ("integer_tol", -1e-9),
        ("max_terms", 15),
        ("quad_limit", 10),
    ],
)
def test_numeric_settings_validation(field, value) -> None:
    """NumericSettings: invalid values are rejected."""
    with pytest.raises(ValidationError):
        NumericSettings(**{field: value})


def test_numeric_settings_strict_and_frozen() -> None:
    """NumericSettings: no coercion, no unknown keys, no mutation."""
    with pytest.raises(ValidationError):
        NumericSettings(max_terms="100")
    with pytest.raises(ValidationError):
        NumericSettings(unknown=1)
    settings = NumericSettings()
    with pytest.raises(ValidationError):
        settings.max_terms = 20


def test_merge_returns_new_instance() -> None:
    """BaseSettings.merge: a new instance; invalid updates are DomainErrors."""
    settings = NumericSettings()
    merged = settings.merge({"max_terms": 64})
    assert merged.max_terms == 64
    assert settings.max_terms == 10000
    with pytest.raises(DomainError):
        settings.merge({"max_terms": 1})


def test_deep_merge_dicts() -> None:
    """BaseSettings.deep_merge_dicts: nested keys merge, others overwrite."""
    base = {"a": {"x": 1, "y": 2}, "b": 1}
    update = {"a": {"y": 3}, "b": {"c": 4}}
    assert NumericSettings.deep_merge_dicts(base, update) == {
        "a": {"x": 1, "y": 3},
        "b": {"c": 4},
    }
    assert base == {"a": {"x": 1, "y": 2}, "b": 1}


# get_settings / use_settings
def test_use_settings_scopes_overrides() -> None:
    """use_settings: overrides apply inside the block only; None is ignored."""
    before = get_settings()
    with use_settings(max_terms=32, integer_tol=None) as settings:
        assert settings.max_terms == 32
        assert get_settings() is settings
        assert settings.integer_tol == before.integer_tol
    assert get_settings() is before


def test_use_settings_nested() -> None:
    """use_settings: nested blocks build on the enclosing settings."""
    with use_settings(max_terms=32):
        with use_settings(integer_tol=1e-6) as inner:
            assert inner.max_terms == 32
            assert inner.integer_tol == 1e-6


def test_max_terms_from_environment(monkeypatch) -> None:
    """NumericSettings: FPI_MAX_TERMS sets the default term cap."""
    from fpintegrate import config

    monkeypatch.setenv("FPI_MAX_TERMS", "500")
    assert config._default_max_terms() == 500
    monkeypatch.setenv("FPI_MAX_TERMS", "many")
    with pytest.raises(DomainError, match="FPI_MAX_TERMS"):
        config._default_max_terms()


def test_max_terms_default_without_environment(clean_env) -> None:
    """NumericSettings: without FPI_MAX_TERMS the cap is 10000."""
    from fpintegrate import config

    assert config._default_max_terms() == 10000


# CliConfig
def test_cli_config_defaults() -> None:
    """CliConfig: seed 42 and JSON output by default."""
    config = CliConfig()
    assert config.seed == 42
    assert config.output_format is OutputFormat.JSON
    assert config.max_terms is None


def test_cli_config_output_format_from_string() -> None:
    """CliConfig: output_format accepts the enum's string value."""
    assert CliConfig(output_format="csv").output_format is OutputFormat.CSV
    with pytest.raises(ValidationError):
        CliConfig(output_format="xml")


@pytest.mark.parametrize(
    "kwargs",
    [{"seed": -1}, {"seed": 2**64}, {"max_terms": 8}, {"tolerance": 0.0}],
)
def test_cli_config_validation(kwargs) -> None:
    """CliConfig: invalid options are rejected."""
    with pytest.raises(ValidationError):
        CliConfig(**kwargs)


def test_cli_config_from_yaml(tmp_path: Path, write_yaml) -> None:
    """CliConfig: YAML values load, explicit values win."""
    config_file = tmp_path / "fpi.yaml"
    write_yaml(config_file, {"seed": 7, "max_terms": 200, "output_format": "csv"})
    config = CliConfig(config_file=config_file, max_terms=300)
    assert config.seed == 7
    assert config.max_terms == 300
    assert config.output_format is OutputFormat.CSV
    assert config.config_file == config_file.resolve()


def test_cli_config_yaml_must_be_mapping(tmp_path: Path) -> None:
    """CliConfig: a YAML file without a mapping is rejected."""
    config_file = tmp_path / "list.yaml"
    config_file.write_text("- 1\n- 2\n")
    with pytest.raises(ValidationError, match="mapping"):
        CliConfig(config_file=config_file)


def test_cli_config_numeric_settings() -> None:
    """CliConfig: numeric_settings carries max_terms and the integer tolerance."""
    config = CliConfig(max_terms=64, integer_detection_tol=1e-7)
    settings = config.numeric_settings()
    assert settings.max_terms == 64
    assert settings.integer_tol == 1e-7


def test_cli_config_readable(tmp_path: Path, write_yaml) -> None:
    """CliConfig: readable() renders enums and paths as plain strings."""
    config_file = tmp_path / "fpi.yaml"
    write_yaml(config_file, {"seed": 3})
    text = CliConfig(config_file=config_file).readable()
    assert "output_format: json" in text
    assert "seed: 3" in text
    assert str(config_file.resolve()) in text
