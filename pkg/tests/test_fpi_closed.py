"""Tests for the closed-form finite-part integrals."""

import math

import mpmath
import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy import integrate, special

from fpintegrate.errors import DomainError
from fpintegrate.fpi_closed import (
    BetaFpiSpec,
    FpiBranchSpec,
    FpiPoleSpec,
    FpiValue,
    beta_fpi,
    beta_fpi_log,
    branch_value,
    fpi_branch_infinite,
    fpi_convergent,
    fpi_pole_infinite,
    pole_coefficient,
    pole_value,
)


# Spec validation
def test_branch_spec_rejects_integer_lambda() -> None:
    """FpiBranchSpec: integer lambda is a DomainError."""
    with pytest.raises(DomainError, match="integer"):
        FpiBranchSpec(s=1, upsilon=1, lam=2)


def test_branch_spec_rejects_branch_cut() -> None:
    """FpiBranchSpec: s on the negative real axis is rejected."""
    with pytest.raises(DomainError):
        FpiBranchSpec(s=-1, upsilon=1, lam=1.5)


def test_branch_spec_accepts_lambda_alias() -> None:
    """FpiBranchSpec: the parameter may be given as 'lambda'."""
    spec = FpiBranchSpec(**{"s": 1, "upsilon": 0.5, "lambda": "1.5"})
    assert spec.lam == 1.5


def test_pole_spec_validation() -> None:
    """FpiPoleSpec: negative n and Re(n+upsilon) <= 0 are rejected."""
    with pytest.raises(DomainError):
        FpiPoleSpec(s=1, upsilon=1, n=-1)
    with pytest.raises(DomainError):
        FpiPoleSpec(s=1, upsilon=-2, n=1)


def test_beta_spec_rejects_integer_rho() -> None:
    """BetaFpiSpec: positive integer rho is rejected."""
    with pytest.raises(DomainError):
        BetaFpiSpec(sigma=1, rho=2)


# Branch-point finite part
def test_branch_convergent_examples() -> None:
    """fpi_branch_infinite: convergent cases equal the integrals."""
    assert_allclose(fpi_branch_infinite(FpiBranchSpec(s=1, upsilon=1, lam=0.5)), math.pi)
    assert_allclose(
        fpi_branch_infinite(FpiBranchSpec(s=4, upsilon=1, lam=0.5)), math.pi / 2
    )


def test_branch_divergent_example() -> None:
    """fpi_branch_infinite: FP int (1+x)^-1/2 x^-3/2 dx = -2."""
    value = fpi_branch_infinite(FpiBranchSpec(s=1, upsilon=0.5, lam=1.5))
    assert_allclose(value, -2.0, rtol=1e-13)


def test_branch_complex_s_rotation() -> None:
    """branch_value: s^-(lambda+upsilon-1) uses the principal branch."""
    s = 2 * np.exp(0.7j)
    value = branch_value(s, 1.0, 1.5)
    base = branch_value(2.0, 1.0, 1.5)
    assert_allclose(value, base * np.exp(-0.7j * 1.5), rtol=1e-13)


def test_branch_convergent_match_quadrature(rng) -> None:
    """fpi_convergent: equals quadrature for 0 < lambda < 1."""
    for _ in range(200):
        s = rng.uniform(0.5, 3.0)
        lam = rng.uniform(0.1, 0.9)
        upsilon = rng.uniform(1.2 - lam, 3.0)
        near, _ = integrate.quad(
            lambda x, s=s, u=upsilon: (s + x) ** (-u),
            0,
            1,
            weight="alg",
            wvar=(-lam, 0),
            epsabs=0,
            epsrel=1e-12,
        )
        far, _ = integrate.quad(
            lambda x, s=s, u=upsilon, lam=lam: (s + x) ** (-u) * x ** (-lam),
            1,
            np.inf,
            epsabs=0,
            epsrel=1e-12,
            limit=200,
        )
        expected = near + far
        assert_allclose(fpi_convergent(s, upsilon, lam).real, expected, rtol=1e-8)


def test_fpi_convergent_rejects_divergence() -> None:
    """fpi_convergent: Re lambda >= 1 is a DomainError."""
    with pytest.raises(DomainError, match="diverges"):
        fpi_convergent(1, 1, 1.5)


def test_branch_near_integer_warning() -> None:
    """fpi_branch_infinite: a near-integer lambda carries a warning on the result."""
    value = fpi_branch_infinite(FpiBranchSpec(s=2, upsilon=1.3, lam=2 + 1e-7))
    assert isinstance(value, FpiValue)
    (warning,) = value.warnings
    assert warning.startswith("lambda=")
    assert "csc" in warning
    assert fpi_branch_infinite(FpiBranchSpec(s=2, upsilon=1.3, lam=2.4)).warnings == ()


def test_branch_pole_limits_differ() -> None:
    """fpi_branch_infinite: grows like csc(pi lambda) near the pole family."""
    pole = fpi_pole_infinite(FpiPoleSpec(s=2, upsilon=1.3, n=1))
    gaps = []
    for delta in (1e-3, 1e-4):
        branch = fpi_branch_infinite(FpiBranchSpec(s=2, upsilon=1.3, lam=2 + delta))
        gaps.append(abs(branch - pole))
    assert_allclose(gaps[1] / gaps[0], 10, rtol=0.05)


# Pole finite part
def test_pole_examples() -> None:
    """fpi_pole_infinite: the three reference values."""
    assert abs(fpi_pole_infinite(FpiPoleSpec(s=1, upsilon=1, n=0))) < 1e-14
    assert_allclose(
        fpi_pole_infinite(FpiPoleSpec(s=2, upsilon=1, n=0)), math.log(2) / 2, rtol=1e-13
    )
    assert_allclose(fpi_pole_infinite(FpiPoleSpec(s=1, upsilon=2, n=1)), 1.0, rtol=1e-13)


def test_pole_value_vanishing_coefficient() -> None:
    """pole_value: (upsilon)_n = 0 gives zero."""
    assert pole_value(1.5, -1, 3) == 0


def test_pole_coefficient_large_order() -> None:
    """pole_coefficient: stays finite far beyond n = 170."""
    for n in (171, 400, 1000):
        expected = (-1) ** n * math.exp(
            special.gammaln(n + 1.5) - special.gammaln(1.5) - special.gammaln(n + 1)
        )
        assert_allclose(pole_coefficient(1.5, n), expected, rtol=1e-10)
    assert np.isfinite(pole_value(1, 1.5, 400))


def test_pole_value_running_coefficient() -> None:
    """pole_value: a supplied coefficient gives the same value."""
    for n in (0, 3, 250):
        assert pole_value(1.7, 0.8, n, coeff=pole_coefficient(0.8, n)) == pole_value(
            1.7, 0.8, n
        )


def _pole_by_subtraction(s: float, upsilon: float, n: int) -> float:
    """FP int_0^inf (s+x)^-upsilon x^-(n+1) dx with the Taylor head removed on [0, 1]."""
    with mpmath.workdps(30):
        s, upsilon = mpmath.mpf(s), mpmath.mpf(upsilon)
        coeffs = [mpmath.binomial(-upsilon, k) * s ** (-upsilon - k) for k in range(n + 1)]

        def near(x):
            head = sum(c * x**k for k, c in enumerate(coeffs))
            return ((s + x) ** (-upsilon) - head) / x ** (n + 1)

        far = mpmath.quad(lambda x: (s + x) ** (-upsilon) / x ** (n + 1), [1, mpmath.inf])
        # FP int_0^1 x^(k-n-1) dx is 1/(k-n), and 0 for k = n
        boundary = sum(c / (k - n) for k, c in enumerate(coeffs[:n]))
        return float(mpmath.quad(near, [0, 1]) + far + boundary)


def test_pole_matches_taylor_subtraction(rng) -> None:
    """pole_value: equals the integral with the divergent Taylor terms removed."""
    for _ in range(200):
        s = rng.uniform(0.5, 3.0)
        upsilon = rng.uniform(0.3, 3.0)
        n = int(rng.integers(0, 4))
        expected = _pole_by_subtraction(s, upsilon, n)
        assert_allclose(pole_value(s, upsilon, n).real, expected, rtol=1e-9, atol=1e-12)


# Beta-type finite parts
def test_beta_examples() -> None:
    """beta_fpi: convergent values and the exact zero."""
    assert_allclose(beta_fpi(BetaFpiSpec(sigma=1, rho=0.5)), 2.0, rtol=1e-13)
    assert beta_fpi(BetaFpiSpec(sigma=0.5, rho=1.5)) == 0
    assert_allclose(beta_fpi(BetaFpiSpec(sigma=1.5, rho=0.5)), math.pi / 2, rtol=1e-13)


def test_beta_exact_zeros(rng) -> None:
    """beta_fpi: sigma - rho a negative integer returns exactly zero."""
    for _ in range(20):
        sigma = rng.uniform(0.1, 2.0)
        rho = sigma + int(rng.integers(1, 4))
        assert abs(beta_fpi(BetaFpiSpec(sigma=sigma, rho=rho))) <= 1e-12


def test_beta_log_examples() -> None:
    """beta_fpi_log: convergent, removable and generic values."""
    assert_allclose(
        beta_fpi_log(BetaFpiSpec(sigma=1, rho=0.5)), 4 * math.log(2) - 4, rtol=1e-12
    )
    assert_allclose(beta_fpi_log(BetaFpiSpec(sigma=0.5, rho=1.5)), -2 * math.pi, rtol=1e-12)
    expected = (
        math.pi
        * (special.digamma(2) - special.digamma(2.5))
        / (special.gamma(0.5) * special.gamma(2.5))
    )
    assert_allclose(beta_fpi_log(BetaFpiSpec(sigma=2, rho=0.5)), expected, rtol=1e-12)


def test_beta_log_is_sigma_derivative() -> None:
    """beta_fpi_log: equals d/dsigma of beta_fpi."""
    h = 1e-5
    for sigma, rho in ((0.7, 1.3), (1.5, 2.4), (2.2, 0.4)):
        derivative = (
            beta_fpi(BetaFpiSpec(sigma=sigma + h, rho=rho))
            - beta_fpi(BetaFpiSpec(sigma=sigma - h, rho=rho))
        ) / (2 * h)
        assert_allclose(
            beta_fpi_log(BetaFpiSpec(sigma=sigma, rho=rho)), derivative, rtol=1e-8
        )


def test_beta_log_convergent_quadrature() -> None:
    """beta_fpi_log: matches quadrature with the log weight for rho < 1."""
    sigma, rho = 1.3, 0.6
    expected, _ = integrate.quad(
        lambda y: 1.0,
        0,
        1,
        weight="alg-loga",
        wvar=(sigma - 1, -rho),
        epsabs=0,
        epsrel=1e-12,
    )
    assert_allclose(beta_fpi_log(BetaFpiSpec(sigma=sigma, rho=rho)).real, expected, rtol=1e-9)


def test_beta_convergent_strip(rng) -> None:
    """beta_fpi: equals the integral for sigma > 0, rho < 1."""
    for _ in range(200):
        sigma = rng.uniform(0.1, 3.0)
        rho = rng.uniform(0.05, 0.95)
        expected, _ = integrate.quad(
            lambda y: 1.0, 0, 1, weight="alg", wvar=(sigma - 1, -rho),
            epsabs=0, epsrel=1e-12,
        )
        assert_allclose(beta_fpi(BetaFpiSpec(sigma=sigma, rho=rho)).real, expected, rtol=1e-10)


def test_beta_log_convergent_strip(rng) -> None:
    """beta_fpi_log: equals the log-weighted integral for sigma > 0, rho < 1."""
    for _ in range(200):
        sigma = rng.uniform(0.1, 3.0)
        rho = rng.uniform(0.05, 0.95)
        expected, _ = integrate.quad(
            lambda y: 1.0, 0, 1, weight="alg-loga", wvar=(sigma - 1, -rho),
            epsabs=0, epsrel=1e-12,
        )
        assert_allclose(
            beta_fpi_log(BetaFpiSpec(sigma=sigma, rho=rho)).real, expected, rtol=1e-8
        )
