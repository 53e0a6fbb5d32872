"""Tests for series summation."""

import math

import pytest
from numpy.testing import assert_allclose

from fpintegrate.config import use_settings
from fpintegrate.errors import NonConvergence
from fpintegrate.series import KahanSum, SeriesStatus, combine, sum_series


def _geometric(ratio: float):
    term = 1.0
    while True:
        yield term
        term *= ratio


# KahanSum
def test_kahan_sum_compensates() -> None:
    """KahanSum: small terms survive next to a large one."""
    total = KahanSum()
    total.add(1e16)
    for _ in range(10):
        total.add(1.0)
    total.add(-1e16)
    assert total.value == 10


def test_kahan_sum_complex_parts() -> None:
    """KahanSum: real and imaginary parts accumulate separately."""
    total = KahanSum()
    for value in (1 + 2j, 0.5 - 1j, -0.25j):
        total.add(value)
    assert total.value == 1.5 + 0.75j


# sum_series
def test_sum_series_geometric() -> None:
    """sum_series: a geometric series converges to 1/(1-r)."""
    result = sum_series(_geometric(0.5))
    assert result.status is SeriesStatus.CONVERGED
    assert result.converged
    assert_allclose(result.value, 2.0, rtol=1e-15)
    assert result.terms_used > 50


def test_sum_series_finite_iterable() -> None:
    """sum_series: a finite iterable has no tail."""
    result = sum_series([1, 2, 3])
    assert result.value == 6
    assert result.tail_estimate == 0.0
    assert result.terms_used == 3


def test_sum_series_needs_three_small_terms() -> None:
    """sum_series: one accidental small term does not stop the sum."""
    terms = iter([1.0, 0.0, 1.0, 0.5, 0.0, 0.0, 0.0, 7.0])
    result = sum_series(terms, tol=1e-12)
    assert result.value == 2.5
    assert result.terms_used == 7


def test_sum_series_min_terms() -> None:
    """sum_series: leading zeros are summed past when min_terms asks."""
    terms = iter([0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 5.0])
    result = sum_series(terms, min_terms=5)
    assert result.value == 1.0


def test_sum_series_nonconvergence() -> None:
    """sum_series: a divergent series raises NonConvergence with context."""
    with pytest.raises(NonConvergence) as excinfo:
        sum_series(_geometric(1.0), max_terms=100, label="test series")
    assert excinfo.value.terms == 100
    assert "test series" in str(excinfo.value)


def test_sum_series_truncation_allowed() -> None:
    """sum_series: truncation is reported instead of raised when allowed."""
    result = sum_series(_geometric(0.99), max_terms=20, allow_truncation=True)
    assert result.status is SeriesStatus.TRUNCATED
    assert not result.converged
    assert result.tail_estimate > 0


def test_sum_series_uses_settings() -> None:
    """sum_series: max_terms comes from the active settings."""
    with use_settings(max_terms=16):
        with pytest.raises(NonConvergence):
            sum_series(_geometric(0.99))


# SeriesResult / combine
def test_series_result_scaled() -> None:
    """SeriesResult: scaling multiplies value and tail."""
    result = sum_series(_geometric(0.5), max_terms=10, allow_truncation=True)
    scaled = result.scaled(-2)
    assert scaled.value == -2 * result.value
    assert scaled.tail_estimate == 2 * result.tail_estimate


def test_combine_mixes_results_and_numbers() -> None:
    """combine: adds series results and plain values, keeping warnings."""
    first = sum_series([1.0, 2.0]).with_warnings("near integer")
    combined = combine(first, 0.5, sum_series(_geometric(0.5)))
    assert_allclose(combined.value, 5.5, rtol=1e-15)
    assert combined.warnings == ("near integer",)
    assert combined.terms_used >= 2


def test_combine_status_truncated() -> None:
    """combine: one truncated part truncates the whole."""
    truncated = sum_series(_geometric(0.9), max_terms=20, allow_truncation=True)
    assert combine(truncated, 1.0).status is SeriesStatus.TRUNCATED


def test_sum_series_log_series() -> None:
    """sum_series: alternating series of ln(1.5)."""

    def terms():
        k = 1
        while True:
            yield (-1) ** (k + 1) / k * 0.5**k
            k += 1

    result = sum_series(terms(), tol=1e-15)
    assert_allclose(result.value, math.log(1.5), rtol=1e-12)
