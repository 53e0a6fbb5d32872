"""Gauss hypergeometric function near z = 0 and near z = 1.

The canonical series serves |z| <= 0.95. Around z = 1 the connection
formulas are dispatched on d = sigma - mu - nu:

    d not an integer   two (1-z)-series weighted by gamma ratios
    d = -n             finite sum plus a logarithmic series
    d = +m             finite sum plus a logarithmic series
    d = 0              a single logarithmic series

The transformations obtained from Stieltjes integrals in the variable z
(before the shift to 1 - z) are provided as ``*_rhs`` functions so that each
can be checked against the series.
"""

import logging
import math
from collections.abc import Iterator
from enum import Enum

from pydantic import model_validator

from .errors import DegenerateParameters, DomainError, UnsupportedCase
from .logging import conditioning_warning
from .params import Complex, ParamSpec
from .series import SeriesResult, SeriesStatus, combine, sum_series
from .special_core import (
    binomial_complex,
    digamma,
    gamma_product,
    near_integer,
    nearest_integer,
    pochhammer,
    principal_log,
    principal_power,
    sin_pi,
)

__all__ = [
    "ConnectionCase",
    "Gauss2F1Params",
    "classify_connection",
    "digamma_log_series",
    "gauss_2f1_near_one",
    "gauss_2f1_nu1_n",
    "gauss_series",
    "gauss_value",
    "mainresult1_rhs",
    "mainresult3_rhs",
    "pfaff_transform",
    "repcase4bx_rhs",
    "resultx_rhs",
    "xxx12_sum",
]

logger = logging.getLogger(__name__)

SERIES_RADIUS = 0.95
NEAR_ONE_RADIUS = 0.9
# below this |z| the closed form of 2F1(nu, 1; n; z) cancels; sum the series instead
NU1_N_CLOSED_RADIUS = 0.5


class Gauss2F1Params(ParamSpec):
    """Parameters of 2F1(mu, nu; sigma; z)."""

    mu: Complex
    nu: Complex
    sigma: Complex
    z: Complex

    @model_validator(mode="after")
    def check_domain(self) -> "Gauss2F1Params":
        """sigma must not be a nonpositive integer."""
        n = nearest_integer(self.sigma)
        if n is not None and n <= 0:
            raise ValueError(f"sigma={self.sigma} is a nonpositive integer")
        return self


class ConnectionCase(Enum):
    """Which connection formula applies around z = 1."""

    GENERIC = "generic"
    NEGATIVE = "negative"
    POSITIVE = "positive"
    ZERO = "zero"


def _gauss_terms(a: complex, b: complex, c: complex, z: complex) -> Iterator[complex]:
    term = 1 + 0j
    k = 0
    while True:
        yield term
        term *= (a + k) * (b + k) / ((c + k) * (k + 1)) * z
        k += 1


def _series(a, b, c, z, label: str = "2F1 series") -> SeriesResult:
    z = complex(z)
    if abs(z) > SERIES_RADIUS:
        raise DomainError(f"|z|={abs(z):.3f} exceeds the series radius {SERIES_RADIUS}")
    return sum_series(_gauss_terms(complex(a), complex(b), complex(c), z), label=label)


def gauss_value(a: complex, b: complex, c: complex, z: complex) -> complex:
    """Value of the canonical series 2F1(a, b; c; z) without validation."""
    return _series(a, b, c, z).value


def gauss_series(p: Gauss2F1Params) -> SeriesResult:
    """Sum of (mu)_k (nu)_k / ((sigma)_k k!) z^k for |z| <= 0.95."""
    return _series(p.mu, p.nu, p.sigma, p.z)


def pfaff_transform(p: Gauss2F1Params) -> complex:
    """(1-z)^-mu 2F1(mu, nu; sigma; z/(z-1)), which equals 2F1(mu, sigma-nu; sigma; z)."""
    if p.z == 1:
        raise DomainError("z=1 is outside the domain of the Pfaff transformation")
    mapped = p.z / (p.z - 1)
    return principal_power(1 - p.z, -p.mu) * _series(p.mu, p.nu, p.sigma, mapped).value


def _digammas(x: complex) -> Iterator[complex]:
    """psi(x), psi(x+1), ... by forward recurrence."""
    value = digamma(x)
    k = 0
    while True:
        yield value
        value += 1.0 / (x + k)
        k += 1


def classify_connection(p: Gauss2F1Params) -> tuple[ConnectionCase, int]:
    """Case of the connection formula and the integer |d| where it applies."""
    d = p.sigma - p.mu - p.nu
    n = nearest_integer(d)
    if n is None:
        return ConnectionCase.GENERIC, 0
    if n < 0:
        return ConnectionCase.NEGATIVE, -n
    if n > 0:
        return ConnectionCase.POSITIVE, n
    return ConnectionCase.ZERO, 0


def _generic(mu, nu, sigma, w) -> SeriesResult:
    d = sigma - mu - nu
    first = _series(sigma - nu, sigma - mu, d + 1, w).scaled(
        gamma_product([sigma, -d], [nu, mu]) * principal_power(w, d)
    )
    second = _series(mu, nu, 1 - d, w).scaled(
        gamma_product([sigma, d], [sigma - nu, sigma - mu])
    )
    return combine(first, second)


def digamma_log_series(
    coeff_args: tuple[complex, complex, complex],
    w: complex,
    log_sign: float,
    plus: tuple[complex, ...],
    minus: tuple[complex, ...],
    label: str,
) -> SeriesResult:
    """Sum c_k [log_sign ln(w) + sum psi(plus+k) - sum psi(minus+k)] w^k.

    c_k = (a)_k (b)_k / ((c)_k k!) with (a, b, c) = coeff_args.
    """
    a, b, c = coeff_args
    log_w = principal_log(w)

    def terms() -> Iterator[complex]:
        coeff = 1 + 0j
        ups = [_digammas(x) for x in plus]
        downs = [_digammas(x) for x in minus]
        k = 0
        while True:
            bracket = log_sign * log_w
            bracket += sum(next(run) for run in ups)
            bracket -= sum(next(run) for run in downs)
            yield coeff * bracket
            coeff *= (a + k) * (b + k) / ((c + k) * (k + 1)) * w
            k += 1

    return sum_series(terms(), label=label)


def _negative(mu, nu, n: int, w) -> SeriesResult:
    """sigma = mu + nu - n."""
    sigma = mu + nu - n
    finite = sum(
        pochhammer(nu - n, k) * pochhammer(mu - n, k)
        / (pochhammer(1 - n, k) * math.factorial(k)) * w**k
        for k in range(n)
    )
    head = (
        gamma_product([sigma], [nu, mu]) * math.factorial(n - 1)
        * principal_power(w, -n) * finite
    )
    scale = (-1) ** n * gamma_product([sigma], [nu - n, mu - n]) / math.factorial(n)
    if scale == 0:
        return SeriesResult(head, n, 0.0, SeriesStatus.CONVERGED)
    tail = digamma_log_series(
        (mu, nu, n + 1), w, -1.0, (1, n + 1), (mu, nu), "2F1 connection (d=-n)"
    ).scaled(scale)
    return combine(head, tail)


def _positive(mu, nu, m: int, w) -> SeriesResult:
    """sigma = mu + nu + m."""
    sigma = mu + nu + m
    finite = sum(
        pochhammer(mu, k) * pochhammer(nu, k) * math.factorial(m - k - 1)
        / math.factorial(k) * (-w) ** k
        for k in range(m)
    )
    head = gamma_product([sigma], [mu + m, nu + m]) * finite
    scale = -((-w) ** m) * gamma_product([sigma], [nu, mu]) / math.factorial(m)
    if scale == 0:
        return SeriesResult(head, m, 0.0, SeriesStatus.CONVERGED)
    tail = digamma_log_series(
        (nu + m, mu + m, m + 1), w, 1.0, (mu + m, nu + m), (m + 1, 1),
        "2F1 connection (d=+m)",
    ).scaled(scale)
    return combine(head, tail)


def _zero(mu, nu, w) -> SeriesResult:
    """sigma = mu + nu."""
    return digamma_log_series(
        (mu, nu, 1), w, -1.0, (1, 1), (mu, nu), "2F1 connection (d=0)"
    ).scaled(gamma_product([mu + nu], [mu, nu]))


def gauss_2f1_near_one(p: Gauss2F1Params) -> SeriesResult:
    """2F1(mu, nu; sigma; z) by its expansion in powers of 1 - z."""
    w = 1 - p.z
    if abs(w) > NEAR_ONE_RADIUS:
        raise DomainError(f"|1-z|={abs(w):.3f} exceeds {NEAR_ONE_RADIUS}")
    if w == 0 or (w.imag == 0.0 and w.real < 0):
        raise DomainError("1-z must satisfy |arg(1-z)| < pi")
    n = nearest_integer(p.sigma)
    if n is not None and n <= 0:
        raise UnsupportedCase(f"sigma={p.sigma} is a nonpositive integer")

    case, order = classify_connection(p)
    logger.debug("2F1 connection case %s (order %d)", case.value, order)
    warnings = []
    d = p.sigma - p.mu - p.nu
    if near_integer(d):
        warnings.append(
            conditioning_warning(logger, "sigma-mu-nu", d, "gamma factors amplify error")
        )

    if case is ConnectionCase.GENERIC:
        result = _generic(p.mu, p.nu, p.sigma, w)
    elif case is ConnectionCase.NEGATIVE:
        result = _negative(p.mu, p.nu, order, w)
    elif case is ConnectionCase.POSITIVE:
        result = _positive(p.mu, p.nu, order, w)
    else:
        result = _zero(p.mu, p.nu, w)
    return result.with_warnings(*warnings)


def gauss_2f1_nu1_n(nu: complex, n: int, z: complex) -> complex:
    """Closed form of 2F1(nu, 1; n; z).

    (n-1)! / ((nu-n+1)_(n-1) z^(n-1)) [(1-z)^(n-nu-1) - sum_(k<=n-2) (nu-n+1)_k z^k / k!]

    The bracket is O(z^(n-1)), so for |z| < 0.5 the value comes from the
    series instead of the subtraction.
    """
    nu, z = complex(nu), complex(z)
    if n < 1:
        raise DomainError(f"n must be a positive integer, got {n}")
    if z == 0:
        return 1 + 0j
    norm = pochhammer(nu - n + 1, n - 1)
    if norm == 0:
        raise DegenerateParameters(f"(nu-n+1)_(n-1) vanishes for nu={nu}, n={n}")
    if n > 1 and abs(z) < NU1_N_CLOSED_RADIUS:
        return _series(nu, 1, n, z, label="2F1(nu, 1; n; z)").value
    tail = sum(
        (pochhammer(nu - n + 1, k) / math.factorial(k) * z**k for k in range(n - 1)),
        start=0j,
    )
    bracket = principal_power(1 - z, n - nu - 1) - tail
    return math.factorial(n - 1) / (norm * z ** (n - 1)) * bracket


def xxx12_sum(mu: complex, nu: complex, n: int, z: complex) -> complex:
    """sum_(k<n) C(n-1,k) (mu)_k (nu-n+1+k)_(n-1-k) z^k / (1-z)^(k+mu).

    Equals Gamma(nu)/Gamma(nu-n+1) 2F1(mu, nu; nu-n+1; z).
    """
    mu, nu, z = complex(mu), complex(nu), complex(z)
    if n < 1:
        raise DomainError(f"n must be a positive integer, got {n}")
    return sum(
        (
            binomial_complex(n - 1, k) * pochhammer(mu, k)
            * pochhammer(nu - n + 1 + k, n - 1 - k)
            * z**k * principal_power(1 - z, -(k + mu))
            for k in range(n)
        ),
        start=0j,
    )


def mainresult3_rhs(mu: complex, nu: complex, rho: complex, z: complex) -> complex:
    """2F1(mu, nu; mu+rho; 1-z) from the branch-branch Stieltjes integral.

    Needs rho and rho - nu non-integer and both |z| and |z/(z-1)| inside the
    series radius.
    """
    mu, nu, rho, z = complex(mu), complex(nu), complex(rho), complex(z)
    if nearest_integer(rho) is not None or nearest_integer(rho - nu) is not None:
        raise DomainError("rho and rho-nu must not be integers")
    s_diff = sin_pi(rho - nu)
    first = (
        -math.pi / s_diff
        * gamma_product([mu + rho], [nu, mu, rho - nu + 1])
        * principal_power(z, rho - nu)
        * gauss_value(rho - nu + mu, rho, rho - nu + 1, z)
    )
    second = (
        sin_pi(rho) / s_diff
        * principal_power(1 - z, -mu)
        * gamma_product([mu + rho, 1 - rho], [nu - rho + 1, mu - nu + rho])
        * gauss_value(mu, 1 - rho, nu - rho + 1, z / (z - 1))
    )
    return first + second


def mainresult1_rhs(mu: complex, nu: complex, n: int, z: complex) -> complex:
    """2F1(mu, nu; mu+n; 1-z) from the pole-kernel Stieltjes integral (nu non-integer)."""
    mu, nu, z = complex(mu), complex(nu), complex(z)
    if nearest_integer(nu) is not None:
        raise DomainError("nu must not be an integer")
    common = (-1) ** n * math.pi / sin_pi(nu)
    first = (
        common
        * gamma_product([mu + n], [nu, mu, n - nu + 1])
        * principal_power(z, n - nu)
        * gauss_value(n - nu + mu, n, n - nu + 1, z)
    )
    second = (
        -common
        * gamma_product([mu + n], [nu, mu - nu + n, n])
        * xxx12_sum(mu, nu, n, z)
    )
    return first + second


def repcase4bx_rhs(mu: complex, nu: complex, rho: complex, z: complex) -> complex:
    """2F1(mu, nu; mu+rho; 1-z) for nu - rho a positive integer."""
    mu, nu, rho, z = complex(mu), complex(nu), complex(rho), complex(z)
    n = nearest_integer(nu - rho)
    if n is None or n < 1:
        raise DomainError(f"nu-rho={nu - rho} must be a positive integer")
    finite = sum(
        (
            pochhammer(rho, k) * pochhammer(mu - n, k)
            / (pochhammer(1 - n, k) * math.factorial(k)) * z**k
            for k in range(n)
        ),
        start=0j,
    )
    head = gamma_product([mu + rho, n], [mu, nu]) * principal_power(z, -n) * finite
    scale = (-1) ** n * gamma_product([mu + rho], [rho, n + 1, mu - n])
    if scale == 0:
        return head
    log_part = digamma_log_series(
        (mu, nu, n + 1), z, -1.0, (1, n + 1), (mu, nu), "repcase4bx series"
    )
    return head + scale * log_part.value


def resultx_rhs(mu: complex, nu: complex, rho: complex, z: complex) -> complex:
    """2F1(mu, nu; mu+rho; 1-z) for rho - nu a nonnegative integer."""
    mu, nu, rho, z = complex(mu), complex(nu), complex(rho), complex(z)
    m = nearest_integer(rho - nu)
    if m is None or m < 0:
        raise DomainError(f"rho-nu={rho - nu} must be a nonnegative integer")
    log_part = digamma_log_series(
        (rho, mu + m, m + 1), z, 1.0, (m + mu, rho), (m + 1, 1), "resultx series"
    )
    head = (
        (-1) ** (m + 1)
        * gamma_product([mu + rho], [mu, nu, m + 1])
        * principal_power(z, m)
        * log_part.value
    )
    finite = sum(
        (
            (-1) ** k * pochhammer(mu, k) * pochhammer(nu, k)
            * math.factorial(m - k - 1) / math.factorial(k) * z**k
            for k in range(m)
        ),
        start=0j,
    )
    return head + gamma_product([mu + rho], [rho, mu + m]) * finite
