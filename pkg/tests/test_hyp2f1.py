"""Tests for the Gauss hypergeometric function and its transformations."""

import math

import mpmath
import pytest
from numpy.testing import assert_allclose
from scipy import special

from fpintegrate.errors import DegenerateParameters, DomainError
from fpintegrate.hyp2f1 import (
    ConnectionCase,
    Gauss2F1Params,
    classify_connection,
    digamma_log_series,
    gauss_2f1_near_one,
    gauss_2f1_nu1_n,
    gauss_series,
    gauss_value,
    mainresult1_rhs,
    mainresult3_rhs,
    pfaff_transform,
    repcase4bx_rhs,
    resultx_rhs,
    xxx12_sum,
)


def _params(mu, nu, sigma, z) -> Gauss2F1Params:
    return Gauss2F1Params(mu=mu, nu=nu, sigma=sigma, z=z)


# Canonical series
def test_gauss_series_at_zero() -> None:
    """gauss_series: 2F1(a, b; c; 0) = 1."""
    assert gauss_series(_params(0.3, 0.7, 1.9, 0)).value == 1


def test_gauss_series_log() -> None:
    """gauss_series: 2F1(1, 1; 2; 1/2) = 2 ln 2."""
    result = gauss_series(_params(1, 1, 2, 0.5))
    assert result.converged
    assert_allclose(result.value, 2 * math.log(2), rtol=1e-13)


def test_gauss_series_against_scipy() -> None:
    """gauss_series: real arguments match scipy.special.hyp2f1."""
    for args in ((0.3, 0.7, 1.9, 0.6), (1.5, -0.4, 2.2, -0.8), (2.0, 3.0, 4.5, 0.7)):
        assert_allclose(
            gauss_series(_params(*args)).value, special.hyp2f1(*args), rtol=1e-11
        )


def test_gauss_series_radius() -> None:
    """gauss_series: |z| beyond the series radius is a DomainError."""
    with pytest.raises(DomainError):
        gauss_series(_params(0.3, 0.7, 1.9, 0.97))


def test_params_reject_nonpositive_sigma() -> None:
    """Gauss2F1Params: sigma at a nonpositive integer is rejected."""
    with pytest.raises(DomainError):
        _params(0.3, 0.7, -2, 0.5)


def test_pfaff_transform() -> None:
    """pfaff_transform: equals 2F1(mu, sigma-nu; sigma; z)."""
    mu, nu, sigma, z = 0.3, 0.7, 1.9, -0.8
    assert_allclose(
        pfaff_transform(_params(mu, nu, sigma, z)),
        gauss_value(mu, sigma - nu, sigma, z),
        rtol=1e-12,
    )
    with pytest.raises(DomainError):
        pfaff_transform(_params(mu, nu, sigma, 1))


def test_digamma_log_series_without_digammas() -> None:
    """digamma_log_series: a bare logarithm multiplies the canonical series."""
    result = digamma_log_series((0.3, 0.7, 1.9), 0.4, 1.0, (), (), "log")
    assert_allclose(result.value, math.log(0.4) * gauss_value(0.3, 0.7, 1.9, 0.4))


# Expansion about z = 1
@pytest.mark.parametrize(
    "args, case, order",
    [
        ((0.3, 0.7, 1.9, 0.6), ConnectionCase.GENERIC, 0),
        ((0.4, 0.9, 2.3, 0.7), ConnectionCase.POSITIVE, 1),
        ((0.3, 0.5, 2.8, 0.5), ConnectionCase.POSITIVE, 2),
        ((0.4, 0.6, 1.0, 0.5), ConnectionCase.ZERO, 0),
        ((1.4, 0.9, 1.3, 0.6), ConnectionCase.NEGATIVE, 1),
        ((1.5, 1.2, 0.7, 0.5), ConnectionCase.NEGATIVE, 2),
    ],
)
def test_near_one_matches_series(args, case, order) -> None:
    """gauss_2f1_near_one: every connection case agrees with the series."""
    p = _params(*args)
    assert classify_connection(p) == (case, order)
    result = gauss_2f1_near_one(p)
    assert_allclose(result.value, gauss_value(*args), rtol=1e-9)


def test_near_one_radius() -> None:
    """gauss_2f1_near_one: |1-z| beyond the radius is a DomainError."""
    with pytest.raises(DomainError):
        gauss_2f1_near_one(_params(0.3, 0.7, 1.9, 0.05))


# Closed forms
def test_nu1_n_examples() -> None:
    """gauss_2f1_nu1_n: closed forms of 2F1(nu, 1; n; z)."""
    assert_allclose(gauss_2f1_nu1_n(2, 2, 0.5), 2.0, rtol=1e-14)
    assert_allclose(
        gauss_2f1_nu1_n(0.3, 3, 0.6), gauss_value(0.3, 1, 3, 0.6), rtol=1e-12
    )
    assert_allclose(gauss_2f1_nu1_n(0.7, 1, 0.4), 0.6**-0.7, rtol=1e-14)
    assert gauss_2f1_nu1_n(0.7, 4, 0) == 1


@pytest.mark.parametrize("n", [4, 5, 6])
@pytest.mark.parametrize("z", [1e-6, 0.1, 0.49, 0.5, 0.8])
def test_nu1_n_small_z_accuracy(n, z) -> None:
    """gauss_2f1_nu1_n: no cancellation loss for small z."""
    expected = complex(mpmath.hyp2f1(1.7, 1, n, z))
    assert_allclose(gauss_2f1_nu1_n(1.7, n, z), expected, rtol=1e-11)


def test_nu1_n_degenerate() -> None:
    """gauss_2f1_nu1_n: a vanishing normalisation is degenerate."""
    with pytest.raises(DegenerateParameters):
        gauss_2f1_nu1_n(1, 2, 0.5)
    with pytest.raises(DomainError):
        gauss_2f1_nu1_n(0.5, 0, 0.5)


def test_xxx12_sum() -> None:
    """xxx12_sum: equals Gamma(nu)/Gamma(nu-n+1) 2F1(mu, nu; nu-n+1; z)."""
    mu, nu, n, z = 0.5, 2.3, 2, 0.3
    expected = (
        special.gamma(nu) / special.gamma(nu - n + 1) * gauss_value(mu, nu, nu - n + 1, z)
    )
    assert_allclose(xxx12_sum(mu, nu, n, z), expected, rtol=1e-12)


# Transformations from Stieltjes integrals
def test_mainresult3() -> None:
    """mainresult3_rhs: the branch-branch transformation."""
    mu, nu, rho, z = 0.6, 0.4, 0.7, 0.4
    assert_allclose(
        mainresult3_rhs(mu, nu, rho, z), gauss_value(mu, nu, mu + rho, 1 - z), rtol=1e-9
    )
    with pytest.raises(DomainError):
        mainresult3_rhs(mu, nu, 2, z)


def test_mainresult1() -> None:
    """mainresult1_rhs: the pole-kernel transformation."""
    mu, nu, n, z = 0.8, 0.35, 2, 0.4
    assert_allclose(
        mainresult1_rhs(mu, nu, n, z), gauss_value(mu, nu, mu + n, 1 - z), rtol=1e-9
    )


def test_repcase4bx() -> None:
    """repcase4bx_rhs: nu - rho a positive integer."""
    mu, nu, rho, z = 2.4, 2.6, 0.6, 0.5
    assert_allclose(
        repcase4bx_rhs(mu, nu, rho, z), gauss_value(mu, nu, mu + rho, 1 - z), rtol=1e-9
    )
    with pytest.raises(DomainError):
        repcase4bx_rhs(mu, 0.3, 0.6, z)


@pytest.mark.parametrize("mu, nu, rho", [(0.8, 0.3, 1.3), (0.5, 0.7, 0.7), (0.6, 0.45, 2.45)])
def test_resultx(mu, nu, rho) -> None:
    """resultx_rhs: rho - nu a nonnegative integer."""
    z = 0.4
    assert_allclose(
        resultx_rhs(mu, nu, rho, z), gauss_value(mu, nu, mu + rho, 1 - z), rtol=1e-9
    )
