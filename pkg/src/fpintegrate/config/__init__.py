"""Numeric settings shared by every evaluator."""

import io
import os
from collections.abc import Iterator
from contextlib import contextmanager
from contextvars import ContextVar
from enum import Enum
from pathlib import PurePath
from typing import Any

from pydantic import BaseModel, ConfigDict, ValidationError, field_validator
from ruamel.yaml import YAML

from ..errors import DomainError

__all__ = [
    "BaseSettings",
    "MAX_TERMS_ENV",
    "NumericSettings",
    "convert_enum",
    "get_settings",
    "use_settings",
]

MAX_TERMS_ENV = "FPI_MAX_TERMS"


def convert_enum(enum_class):
    """Convert a string to an enum value."""

    def _convert(value):
        if isinstance(value, str):
            return enum_class(value)
        return value

    return _convert


class BaseSettings(BaseModel):
    """Common behaviour of settings models."""

    model_config = ConfigDict(
        strict=True,  # don't try to coerce values
        extra="forbid",
        frozen=True,
    )

    def readable(self) -> str:
        """Return readable YAML representation."""
        yaml = YAML()
        yaml.indent(offset=4)
        yaml.default_flow_style = False
        yaml.representer.add_multi_representer(
            Enum, lambda r, data: r.represent_scalar("tag:yaml.org,2002:str", data.value)
        )
        yaml.representer.add_multi_representer(
            PurePath, lambda r, data: r.represent_scalar("tag:yaml.org,2002:str", str(data))
        )
        stream = io.StringIO()
        yaml.dump(self.model_dump(), stream)
        return stream.getvalue()

    @staticmethod
    def deep_merge_dicts(
        base: dict[Any, Any], update: dict[Any, Any]
    ) -> dict[Any, Any]:
        """Deep merge two dictionaries."""
        result = base.copy()
        for key, value in update.items():
            if (
                key in result
                and isinstance(result[key], dict)
                and isinstance(value, dict)
            ):
                result[key] = BaseSettings.deep_merge_dicts(result[key], value)
            else:
                result[key] = value
        return result

    def merge(self, update: dict[str, Any]) -> "BaseSettings":
        """Deep merge a dictionary into the settings, returning a new instance."""
        merged = self.deep_merge_dicts(self.model_dump(), update)
        try:
            return self.__class__(**merged)
        except ValidationError as exc:
            raise DomainError(str(exc)) from exc


def _default_max_terms() -> int:
    value = os.environ.get(MAX_TERMS_ENV)
    if value is None:
        return 10000
    try:
        return int(value)
    except ValueError as exc:
        raise DomainError(f"{MAX_TERMS_ENV} must be an integer, got {value!r}") from exc


class NumericSettings(BaseSettings):
    """Tolerances and limits of the numerical machinery.

    Attributes:
        tolerance: Relative size of a term below which a series may stop
        max_terms: Hard cap on series terms before NonConvergence
        integer_tol: Distance within which a value counts as an integer
        near_integer_warn: Distance within which a non-integer is ill-conditioned
        quad_epsrel: Relative tolerance requested from adaptive quadrature
        quad_limit: Maximum number of quadrature subintervals
    """

    tolerance: float = 1e-16
    max_terms: int = 10000
    integer_tol: float = 1e-9
    near_integer_warn: float = 1e-6
    quad_epsrel: float = 1e-12
    quad_limit: int = 500

    @field_validator("tolerance", "integer_tol", "near_integer_warn", "quad_epsrel")
    @classmethod
    def validate_positive(cls, value: float) -> float:
        """Tolerances must be positive."""
        if not value > 0:
            raise ValueError("must be positive")
        return value

    @field_validator("max_terms")
    @classmethod
    def validate_max_terms(cls, value: int) -> int:
        """Series need room for the consecutive-small-terms rule."""
        if value < 16:
            raise ValueError("max_terms must be at least 16")
        return value

    @field_validator("quad_limit")
    @classmethod
    def validate_quad_limit(cls, value: int) -> int:
        """Quadrature needs at least a few subdivisions."""
        if value < 50:
            raise ValueError("quad_limit must be at least 50")
        return value


_settings: ContextVar[NumericSettings | None] = ContextVar(
    "fpintegrate_settings", default=None
)


def get_settings() -> NumericSettings:
    """Return the settings active in the current context."""
    settings = _settings.get()
    if settings is None:
        settings = NumericSettings(max_terms=_default_max_terms())
        _settings.set(settings)
    return settings


@contextmanager
def use_settings(**overrides: Any) -> Iterator[NumericSettings]:
    """Install settings merged with ``overrides`` for the enclosed block."""
    settings = get_settings().merge(
        {key: value for key, value in overrides.items() if value is not None}
    )
    token = _settings.set(settings)
    try:
        yield settings
    finally:
        _settings.reset(token)
