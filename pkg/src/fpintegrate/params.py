"""Validated parameter bundles."""

import re
from typing import Annotated, Any

from pydantic import BaseModel, BeforeValidator, ConfigDict, ValidationError

from .errors import DomainError

__all__ = ["Complex", "ParamSpec", "on_branch_cut", "parse_complex"]

_COMPLEX_RE = re.compile(
    r"^\s*(?P<re>[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?"
    r"(?:(?P<im>[+-]\s*(?:\d+\.?\d*|\.\d+)?(?:[eE][+-]?\d+)?)[ij])?\s*$"
)


def parse_complex(text: str) -> complex:
    """Parse '1.5', '-2i', '1.5+0.5i' or '1.5-0.5j' into a complex number."""
    value = text.strip().replace(" ", "")
    if value.endswith(("i", "j")) and not _COMPLEX_RE.match(value):
        # bare imaginary such as '2i' or '-i'
        body = value[:-1]
        if body in ("", "+", "-"):
            body += "1"
        try:
            return complex(0.0, float(body))
        except ValueError as exc:
            raise ValueError(f"not a complex number: {text!r}") from exc
    match = _COMPLEX_RE.match(value)
    if not match or not value:
        raise ValueError(f"not a complex number: {text!r}")
    real = float(match.group("re")) if match.group("re") else 0.0
    imag_text = match.group("im")
    imag = 0.0
    if imag_text:
        if imag_text in ("+", "-"):
            imag_text += "1"
        imag = float(imag_text)
    return complex(real, imag)


def _to_complex(value: Any) -> complex:
    if isinstance(value, str):
        return parse_complex(value)
    if isinstance(value, bool):
        raise ValueError("booleans are not numbers")
    if isinstance(value, int | float | complex):
        return complex(value)
    raise ValueError(f"expected a number, got {type(value).__name__}")


Complex = Annotated[complex, BeforeValidator(_to_complex)]


def on_branch_cut(value: complex) -> bool:
    """Whether value is zero or on the negative real axis (|arg| = pi)."""
    return value == 0 or (value.imag == 0.0 and value.real < 0)


class ParamSpec(BaseModel):
    """Base for parameter bundles validated at construction.

    Violations surface as DomainError rather than pydantic's ValidationError.
    """

    model_config = ConfigDict(frozen=True)

    def __init__(self, **data: Any) -> None:
        try:
            super().__init__(**data)
        except ValidationError as exc:
            messages = "; ".join(
                f"{'.'.join(str(p) for p in err['loc']) or 'spec'}: {err['msg']}"
                for err in exc.errors()
            )
            raise DomainError(f"{self.__class__.__name__}: {messages}") from exc

    def as_dict(self) -> dict[str, complex | int]:
        """Return the parameters as a plain dictionary."""
        return self.model_dump()
