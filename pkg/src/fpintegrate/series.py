"""Series summation with compensated accumulation and a truncation rule."""

from collections.abc import Iterable
from enum import Enum
from typing import NamedTuple

from .config import get_settings
from .errors import NonConvergence

__all__ = ["KahanSum", "SeriesResult", "SeriesStatus", "combine", "sum_series"]

CONSECUTIVE_SMALL_TERMS = 3


class SeriesStatus(Enum):
    """How a series evaluation ended."""

    CONVERGED = "converged"
    TRUNCATED = "truncated"


class SeriesResult(NamedTuple):
    """The outcome of a series evaluation."""

    value: complex
    terms_used: int
    tail_estimate: float
    status: SeriesStatus
    warnings: tuple[str, ...] = ()

    @property
    def converged(self) -> bool:
        """Whether the truncation rule was met."""
        return self.status is SeriesStatus.CONVERGED

    def scaled(self, factor: complex) -> "SeriesResult":
        """Return this result multiplied by a constant factor."""
        return self._replace(
            value=self.value * factor, tail_estimate=self.tail_estimate * abs(factor)
        )

    def with_warnings(self, *warnings: str) -> "SeriesResult":
        """Return this result with extra conditioning warnings attached."""
        return self._replace(warnings=self.warnings + tuple(w for w in warnings if w))


class KahanSum:
    """Compensated (Neumaier) running sum of complex values.

    Real and imaginary parts carry their own compensation.
    """

    def __init__(self) -> None:
        self.sum = 0j
        self.carry = 0j

    @staticmethod
    def _two_sum(total: float, value: float) -> tuple[float, float]:
        new_total = total + value
        if abs(total) >= abs(value):
            error = (total - new_total) + value
        else:
            error = (value - new_total) + total
        return new_total, error

    def add(self, value: complex) -> None:
        """Add a value to the running sum."""
        value = complex(value)
        re, re_err = self._two_sum(self.sum.real, value.real)
        im, im_err = self._two_sum(self.sum.imag, value.imag)
        self.sum = complex(re, im)
        self.carry += complex(re_err, im_err)

    @property
    def value(self) -> complex:
        """The compensated sum."""
        return self.sum + self.carry


def sum_series(
    terms: Iterable[complex],
    tol: float | None = None,
    max_terms: int | None = None,
    min_terms: int = 1,
    label: str = "series",
    allow_truncation: bool = False,
) -> SeriesResult:
    """Sum ``terms`` until they become negligible.

    Stops once |term_k| <= tol * |partial sum| holds for three consecutive k
    (not before ``min_terms`` terms), or when a finite iterable is exhausted.
    Reaching ``max_terms`` raises NonConvergence unless ``allow_truncation``.
    """
    settings = get_settings()
    tol = settings.tolerance if tol is None else tol
    max_terms = settings.max_terms if max_terms is None else max_terms

    total = KahanSum()
    small_run = 0
    recent: list[float] = []
    count = 0
    last = 0.0
    for term in terms:
        term = complex(term)
        total.add(term)
        count += 1
        last = abs(term)
        recent = (recent + [last])[-CONSECUTIVE_SMALL_TERMS:]
        if last <= tol * abs(total.value) and count >= min_terms:
            small_run += 1
            if small_run >= CONSECUTIVE_SMALL_TERMS:
                return SeriesResult(
                    total.value, count, sum(recent), SeriesStatus.CONVERGED
                )
        else:
            small_run = 0
        if count >= max_terms:
            if allow_truncation:
                return SeriesResult(
                    total.value, count, sum(recent), SeriesStatus.TRUNCATED
                )
            raise NonConvergence(
                f"{label} did not converge within {max_terms} terms "
                f"(last term {last:.3e})",
                terms=count,
                last_term=last,
            )
    # finite series: nothing left in the tail
    return SeriesResult(total.value, count, 0.0, SeriesStatus.CONVERGED)


def combine(*parts: SeriesResult | complex) -> SeriesResult:
    """Add series results (and plain finite values) into one result."""
    total = KahanSum()
    terms = 0
    tail = 0.0
    status = SeriesStatus.CONVERGED
    warnings: tuple[str, ...] = ()
    for part in parts:
        if isinstance(part, SeriesResult):
            total.add(part.value)
            terms += part.terms_used
            tail += part.tail_estimate
            warnings += part.warnings
            if not part.converged:
                status = SeriesStatus.TRUNCATED
        else:
            total.add(part)
    return SeriesResult(total.value, terms, tail, status, warnings)
