"""Command-line configuration for fpintegrate."""

from enum import Enum
from pathlib import Path
from typing import Any

from pydantic import field_validator, model_validator
from ruamel.yaml import YAML

from . import BaseSettings, NumericSettings, convert_enum, get_settings

__all__ = ["CliConfig", "OutputFormat"]


class OutputFormat(Enum):
    """Possible values for output_format."""

    JSON = "json"
    CSV = "csv"


class CliConfig(BaseSettings):
    """Global command-line options.

    Values from an optional YAML ``config_file`` are overridden by explicit flags.
    """

    tolerance: float | None = None
    max_terms: int | None = None
    seed: int = 42
    output_format: OutputFormat = OutputFormat.JSON
    integer_detection_tol: float | None = None
    config_file: Path | None = None

    @model_validator(mode="before")
    @classmethod
    def load_config(cls, data: Any) -> Any:
        """Load defaults from a YAML file; explicit (non-None) values win."""
        if isinstance(data, dict) and data.get("config_file") is not None:
            config_file = Path(data["config_file"]).resolve()
            file_data = YAML(typ="safe").load(config_file.read_text()) or {}
            if not isinstance(file_data, dict):
                raise ValueError(f"{config_file} does not contain a mapping")
            explicit = {k: v for k, v in data.items() if v is not None}
            data = BaseSettings.deep_merge_dicts(file_data, explicit)
            data["config_file"] = config_file
        return data

    @field_validator("output_format", mode="before")
    @classmethod
    def validate_output_format(cls, value: str) -> OutputFormat:
        """Convert string to OutputFormat enum value."""
        return convert_enum(OutputFormat)(value)

    @field_validator("tolerance", "integer_detection_tol")
    @classmethod
    def validate_positive(cls, value: float | None) -> float | None:
        """Tolerances must be positive."""
        if value is not None and not value > 0:
            raise ValueError("must be positive")
        return value

    @field_validator("max_terms")
    @classmethod
    def validate_max_terms(cls, value: int | None) -> int | None:
        """Series need room for the consecutive-small-terms rule."""
        if value is not None and value < 16:
            raise ValueError("max_terms must be at least 16")
        return value

    @field_validator("seed")
    @classmethod
    def validate_seed(cls, value: int) -> int:
        """Seeds are unsigned 64-bit integers."""
        if not 0 <= value < 2**64:
            raise ValueError("seed must fit in 64 bits")
        return value

    def numeric_settings(self) -> NumericSettings:
        """Return the numeric settings these options select."""
        overrides = {
            "max_terms": self.max_terms,
            "integer_tol": self.integer_detection_tol,
        }
        return get_settings().merge(
            {key: value for key, value in overrides.items() if value is not None}
        )
