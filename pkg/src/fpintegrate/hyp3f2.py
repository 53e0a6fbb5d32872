"""3F2(beta, nu, 1; beta+sigma, n; z) near z = 1.

The family reduces to an Euler-type integral whose inner function
2F1(nu, 1; n; zt) is elementary. Splitting off the polynomial part leaves

    L(z) = Gamma(beta) (nu-n+1)_(n-1) z^(n-1) / (Gamma(beta+sigma) (n-1)!) 3F2(...)
         = body(1-z) - tail(z)

where tail is a polynomial of degree n-2 and body is the Stieltjes integral

    int_0^inf s^(beta-n) ((1-z)^-1 + s)^(n-nu-1) (1+s)^-(beta+sigma-nu) ds

times Gamma(sigma)^-1 (1-z)^(n-nu-1). Finite-part integration of that
integral gives body as (1-z)-series. The form depends on sigma - nu:

    not an integer           two 2F1 pieces in 1-z
    n + sigma - nu = m >= 1  finite sum plus a digamma series
    nu - sigma - n = m >= 0  finite sum plus a digamma series

The logarithmic series carry psi(k+m+2) in the second integer case.
"""

import logging
import math
from collections.abc import Iterator, Sequence
from enum import Enum

from pydantic import model_validator

from .errors import DegenerateParameters, DomainError, WrongCase
from .fpi_oracle import SingularHint, quadrature
from .hyp2f1 import NEAR_ONE_RADIUS, SERIES_RADIUS, digamma_log_series, gauss_value
from .params import Complex, ParamSpec
from .series import SeriesResult, combine, sum_series
from .special_core import (
    gamma_product,
    nearest_integer,
    pochhammer,
    principal_power,
    sin_pi,
)
from .stieltjes_eval import (
    StieltjesEvaluator,
    StieltjesGaussSpec,
    progenic_gauss_value,
)

__all__ = [
    "ProgenicPiece",
    "ThreeF2Case",
    "ThreeF2Params",
    "bebebe_rhs",
    "bebebex_rhs",
    "classify_3f2",
    "finite_tail",
    "finite_tail_about_one",
    "keyx_closed",
    "keyx_fpi",
    "keyx_integral",
    "normalization",
    "pfq_series",
    "progenic_3f2_pieces",
    "progenic_3f2_series",
    "res2_rhs",
    "res2x_rhs",
    "threef2_fpi",
    "threef2_iden_rhs",
    "threef2_integral_direct",
    "threef2_series",
    "threef2_transform",
    "threef2_transform_general",
    "threef2_transform_pole_neg",
    "threef2_transform_pole_pos",
]

logger = logging.getLogger(__name__)


class ThreeF2Case(Enum):
    """Integer structure of sigma - nu."""

    GENERIC = "generic"
    POLE_POS = "pole_pos"
    POLE_NEG = "pole_neg"


class ProgenicPiece(Enum):
    """Progenic finite parts over [0, 1] met in the transformations."""

    ST3F2 = "st3f2"
    TERM2 = "term2"
    MOFPIX = "mofpix"


class ThreeF2Params(ParamSpec):
    """Parameters of 3F2(beta, nu, 1; beta+sigma, n; z)."""

    beta: Complex
    nu: Complex
    n: int
    sigma: Complex
    z: Complex

    @model_validator(mode="after")
    def check_domain(self) -> "ThreeF2Params":
        """n >= 1; nu not an integer; Re sigma > 0; Re(beta+sigma-nu) > 0."""
        if self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n}")
        if nearest_integer(self.nu) is not None:
            raise ValueError(f"nu={self.nu} must not be an integer")
        if self.sigma.real <= 0:
            raise ValueError("Re(sigma) must be positive")
        if (self.beta + self.sigma - self.nu).real <= 0:
            raise ValueError("Re(beta + sigma - nu) must be positive")
        return self


def classify_3f2(p: ThreeF2Params) -> tuple[ThreeF2Case, int]:
    """Case and the integer m of the pole cases (0 for the generic case)."""
    diff = nearest_integer(p.sigma - p.nu)
    if diff is None:
        return ThreeF2Case.GENERIC, 0
    if p.n + diff >= 1:
        return ThreeF2Case.POLE_POS, p.n + diff
    return ThreeF2Case.POLE_NEG, -(p.n + diff)


# canonical series


def pfq_series(
    upper: Sequence[complex], lower: Sequence[complex], z: complex
) -> SeriesResult:
    """Partial sums of pFq(upper; lower; z)."""
    upper = [complex(a) for a in upper]
    lower = [complex(b) for b in lower]
    z = complex(z)
    if len(upper) > len(lower) + 1:
        raise DomainError(f"{len(upper)}F{len(lower)} diverges for every z != 0")
    if len(upper) == len(lower) + 1 and abs(z) > SERIES_RADIUS:
        raise DomainError(f"|z|={abs(z):.3f} exceeds the series radius {SERIES_RADIUS}")
    for b in lower:
        k = nearest_integer(b)
        if k is not None and k <= 0:
            raise DomainError(f"lower parameter {b} is a nonpositive integer")

    def terms() -> Iterator[complex]:
        term = 1 + 0j
        k = 0
        while True:
            yield term
            ratio = z / (k + 1)
            for a in upper:
                ratio *= a + k
            for b in lower:
                ratio /= b + k
            term *= ratio
            k += 1

    return sum_series(terms(), label=f"{len(upper)}F{len(lower)} series")


def threef2_series(p: ThreeF2Params) -> SeriesResult:
    """3F2(beta, nu, 1; beta+sigma, n; z) by its power series."""
    return pfq_series((p.beta, p.nu, 1), (p.beta + p.sigma, p.n), p.z)


def threef2_integral_direct(p: ThreeF2Params) -> complex:
    """3F2 by quadrature of its Euler integral, for real parameters.

    Gamma(beta+sigma) / (Gamma(beta) Gamma(sigma))
        int_0^1 t^(beta-1) (1-t)^(sigma-1) 2F1(nu, 1; n; zt) dt
    """
    values = (p.beta, p.nu, p.sigma, p.z)
    if any(v.imag != 0.0 for v in values):
        raise DomainError("quadrature needs real parameters")
    beta, nu, sigma, z = (v.real for v in values)
    if beta <= p.n - 1:
        raise DomainError(f"the integral path needs beta > n-1, got beta={beta}")
    if abs(z) > SERIES_RADIUS:
        raise DomainError(f"|z|={abs(z):.3f} exceeds the series radius {SERIES_RADIUS}")

    def inner(t: float) -> float:
        return gauss_value(nu, 1, p.n, z * t).real

    hint = SingularHint(alpha=beta - 1, beta=sigma - 1)
    value = quadrature(inner, (0.0, 1.0), hint, epsabs=0.0)
    return gamma_product([beta + sigma], [beta, sigma]) * value


# pieces of the transformation


def normalization(p: ThreeF2Params) -> complex:
    """Gamma(beta) (nu-n+1)_(n-1) z^(n-1) / (Gamma(beta+sigma) (n-1)!)."""
    value = (
        gamma_product([p.beta], [p.beta + p.sigma])
        * pochhammer(p.nu - p.n + 1, p.n - 1)
        * p.z ** (p.n - 1)
        / math.factorial(p.n - 1)
    )
    if value == 0:
        raise DegenerateParameters(f"the 3F2 prefactor vanishes at z={p.z}, n={p.n}")
    return value


def _tail_coefficient(p: ThreeF2Params, k: int) -> complex:
    # (nu-n+1)_k Gamma(k-n+beta+1) / Gamma(k-n+beta+sigma+1), without 1/k!
    shift = k - p.n + p.beta + 1
    return pochhammer(p.nu - p.n + 1, k) * gamma_product([shift], [shift + p.sigma])


def finite_tail(p: ThreeF2Params) -> complex:
    """sum_(k<=n-2) (nu-n+1)_k Gamma(k-n+beta+1) / (Gamma(k-n+beta+sigma+1) k!) z^k."""
    return sum(
        (
            _tail_coefficient(p, k) / math.factorial(k) * p.z**k
            for k in range(p.n - 1)
        ),
        start=0j,
    )


def finite_tail_about_one(p: ThreeF2Params) -> complex:
    """The finite tail re-expanded in powers of z - 1."""
    total = 0j
    for j in range(p.n - 1):
        inner = sum(
            (
                _tail_coefficient(p, k) / math.factorial(k - j)
                for k in range(j, p.n - 1)
            ),
            start=0j,
        )
        total += inner / math.factorial(j) * (p.z - 1) ** j
    return total


def _check_near_one(z: complex) -> complex:
    w = 1 - complex(z)
    if abs(w) > NEAR_ONE_RADIUS:
        raise DomainError(f"|1-z|={abs(w):.3f} exceeds {NEAR_ONE_RADIUS}")
    if w == 0 or (w.imag == 0.0 and w.real < 0):
        raise DomainError("1-z must satisfy |arg(1-z)| < pi")
    return w


def _general_body(beta, nu, n: int, sigma, w) -> SeriesResult:
    s_diff = sin_pi(sigma - nu)
    first = (
        (-1) ** n * math.pi / s_diff
        * principal_power(w, sigma + n - nu - 1)
        * gamma_product([], [1 + nu - n, sigma - nu + n])
        * gauss_value(sigma, beta + sigma - nu, sigma - nu + n, w)
    )
    # (-1)^(n-1) on the second piece; a single factor pi
    second = (
        (-1) ** (n - 1) * math.pi / s_diff
        * gamma_product([beta - n + 1], [sigma, beta + sigma - nu, 2 - n - sigma + nu])
        * gauss_value(1 + nu - n, beta - n + 1, 2 - n - sigma + nu, w)
    )
    return combine(first, second)


def _pole_pos_body(beta, nu, n: int, m: int, w) -> SeriesResult:
    """n + sigma - nu = m >= 1."""
    sigma = m - n + nu
    kernel = beta + sigma - nu
    finite = sum(
        (
            (-1) ** k / math.factorial(k)
            * gamma_product([k + beta - n + 1], [sigma, kernel])
            * pochhammer(1 + nu - n, k)
            * math.factorial(m - 2 - k)
            * w**k
            for k in range(m - 1)
        ),
        start=0j,
    )
    scale = (
        (-1) ** m
        * gamma_product([], [nu - n + 1])
        * principal_power(w, m - 1)
        / math.factorial(m - 1)
    )
    log_part = digamma_log_series(
        (sigma, kernel, m), w, 1.0, (sigma, kernel), (m, 1), "3F2 connection (m>=1)"
    )
    return combine(finite, log_part.scaled(scale))


def _pole_neg_body(beta, nu, n: int, m: int, w) -> SeriesResult:
    """nu - sigma - n = m >= 0."""
    sigma = nu - m - n
    kernel = beta + sigma - nu
    finite = sum(
        (
            (-1) ** k / math.factorial(k)
            * pochhammer(kernel, k)
            * pochhammer(sigma, k)
            * math.factorial(m - k)
            * w**k
            for k in range(m + 1)
        ),
        start=0j,
    ) * principal_power(w, -m - 1) * gamma_product([], [1 - n + nu])
    scale = (
        (-1) ** m
        * gamma_product([beta - n + 1], [kernel, sigma])
        / math.factorial(m + 1)
    )
    if scale == 0:
        return combine(finite)
    log_part = digamma_log_series(
        (beta - n + 1, nu + 1 - n, m + 2),
        w,
        1.0,
        (nu + 1 - n, beta - n + 1),
        (1, m + 2),
        "3F2 connection (m>=0)",
    )
    return combine(finite, log_part.scaled(scale))


def _body(p: ThreeF2Params, w: complex) -> SeriesResult:
    case, m = classify_3f2(p)
    logger.debug("3F2 case %s (m=%d)", case.value, m)
    if case is ThreeF2Case.GENERIC:
        return _general_body(p.beta, p.nu, p.n, p.sigma, w)
    if case is ThreeF2Case.POLE_POS:
        return _pole_pos_body(p.beta, p.nu, p.n, m, w)
    return _pole_neg_body(p.beta, p.nu, p.n, m, w)


def _require(p: ThreeF2Params, case: ThreeF2Case) -> int:
    actual, m = classify_3f2(p)
    if actual is not case:
        raise WrongCase(f"{actual.value} parameters passed to the {case.value} form")
    return m


# the normalised left-hand side L(z)


def threef2_iden_rhs(p: ThreeF2Params) -> complex:
    """L(z) from the two-piece form with the tail left in powers of z."""
    _require(p, ThreeF2Case.GENERIC)
    w = _check_near_one(p.z)
    return _general_body(p.beta, p.nu, p.n, p.sigma, w).value - finite_tail(p)


def res2_rhs(p: ThreeF2Params) -> complex:
    """L(z) for n + sigma - nu a positive integer, in terms of sigma."""
    m = _require(p, ThreeF2Case.POLE_POS)
    w = _check_near_one(p.z)
    return _pole_pos_body(p.beta, p.nu, p.n, m, w).value - finite_tail_about_one(p)


def res2x_rhs(beta: complex, nu: complex, n: int, m: int, z: complex) -> complex:
    """L(z) with sigma = m - n + nu eliminated."""
    if m < 1:
        raise DomainError(f"m must be a positive integer, got {m}")
    p = ThreeF2Params(beta=beta, nu=nu, n=n, sigma=m - n + complex(nu), z=z)
    return res2_rhs(p)


def bebebe_rhs(p: ThreeF2Params) -> complex:
    """L(z) for nu - sigma - n a nonnegative integer, in terms of sigma."""
    m = _require(p, ThreeF2Case.POLE_NEG)
    w = _check_near_one(p.z)
    return _pole_neg_body(p.beta, p.nu, p.n, m, w).value - finite_tail_about_one(p)


def bebebex_rhs(beta: complex, nu: complex, n: int, m: int, z: complex) -> complex:
    """L(z) with sigma = nu - m - n eliminated."""
    if m < 0:
        raise DomainError(f"m must be a nonnegative integer, got {m}")
    p = ThreeF2Params(beta=beta, nu=nu, n=n, sigma=complex(nu) - m - n, z=z)
    return bebebe_rhs(p)


# 3F2 itself


def _transform(p: ThreeF2Params) -> SeriesResult:
    w = _check_near_one(p.z)
    body = _body(p, w)
    return combine(body, -finite_tail_about_one(p)).scaled(1 / normalization(p))


def threef2_transform_general(p: ThreeF2Params) -> SeriesResult:
    """3F2 from the two 2F1 pieces in 1 - z (sigma - nu not an integer)."""
    _require(p, ThreeF2Case.GENERIC)
    return _transform(p)


def threef2_transform_pole_pos(p: ThreeF2Params) -> SeriesResult:
    """3F2 for sigma = m - n + nu with m a positive integer."""
    _require(p, ThreeF2Case.POLE_POS)
    return _transform(p)


def threef2_transform_pole_neg(p: ThreeF2Params) -> SeriesResult:
    """3F2 for sigma = nu - m - n with m a nonnegative integer."""
    _require(p, ThreeF2Case.POLE_NEG)
    return _transform(p)


def threef2_transform(p: ThreeF2Params) -> SeriesResult:
    """3F2 near z = 1 by whichever transformation applies."""
    return _transform(p)


# the Stieltjes integral behind the transformation


def _keyx_spec(p: ThreeF2Params, w: complex) -> StieltjesGaussSpec:
    return StieltjesGaussSpec(
        a=1 / w,
        b=1,
        mu=p.nu + 1 - p.n,
        nu=p.beta - p.n + 1,
        rho=p.beta + p.sigma - p.nu,
    )


def keyx_integral(p: ThreeF2Params) -> complex:
    """int_0^inf s^(beta-n) ((1-x)^-1 + s)^(n-nu-1) (1+s)^-(beta+sigma-nu) ds by quadrature.

    Real parameters and 0 < x < 1. The half-line is split at s = 1 and the
    outer part mapped back by s = 1/u, leaving u^(sigma-1) at the origin.
    """
    values = (p.beta, p.nu, p.sigma, p.z)
    if any(v.imag != 0.0 for v in values):
        raise DomainError("quadrature needs real parameters")
    beta, nu, sigma, x = (v.real for v in values)
    if not 0 < x < 1:
        raise DomainError(f"x={x} must lie in (0, 1)")
    if beta <= p.n - 1:
        raise DomainError(f"the integral needs beta > n-1, got beta={beta}")
    a = 1 / (1 - x)
    power = p.n - nu - 1
    kernel = beta + sigma - nu

    def near(s: float) -> float:
        return (a + s) ** power * (1 + s) ** (-kernel)

    def far(u: float) -> float:
        return (1 + a * u) ** power * (1 + u) ** (-kernel)

    inner = quadrature(near, (0.0, 1.0), SingularHint(beta - p.n, 0.0), epsabs=0.0)
    outer = quadrature(far, (0.0, 1.0), SingularHint(sigma - 1, 0.0), epsabs=0.0)
    return inner + outer


def keyx_closed(p: ThreeF2Params) -> SeriesResult:
    """The same integral from the (1-x)-series of the applicable case."""
    w = _check_near_one(p.z)
    factor = gamma_product([p.sigma]) * principal_power(w, p.nu + 1 - p.n)
    return _body(p, w).scaled(factor)


def keyx_fpi(p: ThreeF2Params) -> SeriesResult:
    """The same integral by finite-part integration of the Stieltjes form.

    a = (1-x)^-1 and b = 1, so the expansion needs |1-x| <= 0.9.
    """
    w = _check_near_one(p.z)
    return StieltjesEvaluator(_keyx_spec(p, w)).evaluate()


def threef2_fpi(p: ThreeF2Params) -> SeriesResult:
    """3F2 assembled from the finite-part evaluation of the Stieltjes integral."""
    w = _check_near_one(p.z)
    body = keyx_fpi(p).scaled(
        principal_power(w, p.n - p.nu - 1) * gamma_product([], [p.sigma])
    )
    return combine(body, -finite_tail(p)).scaled(1 / normalization(p))


# progenic finite parts over [0, 1]


def _st3f2(p: ThreeF2Params, w: complex) -> complex:
    lower = 2 - p.n - p.sigma + p.nu
    k = nearest_integer(lower)
    if k is not None and k <= 0:
        raise DomainError(f"2-n-sigma+nu={lower} is a nonpositive integer")
    kernel = p.beta + p.sigma - p.nu
    return (
        math.pi / sin_pi(kernel)
        * gamma_product([p.beta - p.n + 1], [kernel, lower])
        * principal_power(w, p.nu + 1 - p.n)
        * gauss_value(1 + p.nu - p.n, p.beta - p.n + 1, lower, w)
    )


def _term2(p: ThreeF2Params, m: int, w: complex) -> complex:
    beta, nu, n, sigma = p.beta, p.nu, p.n, p.sigma
    kernel = beta + sigma - nu
    prefactor = math.pi / sin_pi(beta)
    finite = sum(
        (
            (-1) ** (n + k)
            * gamma_product([k + beta - n + 1], [kernel])
            * pochhammer(1 + nu - n, k)
            * math.factorial(m - 2 - k)
            / math.factorial(k)
            * w**k
            for k in range(m - 1)
        ),
        start=0j,
    ) * principal_power(w, nu + 1 - n)
    series = digamma_log_series(
        (sigma, kernel, m), w, 0.0, (kernel,), (1,), "term2 series"
    )
    scale = (
        (-1) ** (m - n)
        * gamma_product([sigma], [1 + nu - n])
        * principal_power(w, sigma)
        / math.factorial(m - 1)
    )
    return prefactor * (finite + scale * series.value)


def _mofpix(p: ThreeF2Params, m: int, w: complex) -> complex:
    beta, nu, n = p.beta, p.nu, p.n
    kernel = beta + p.sigma - nu
    series = digamma_log_series(
        (nu + 1 - n, beta - n + 1, m + 2), w, 0.0, (beta - n + 1,), (m + 2,),
        "mofpix series",
    )
    return (
        (-1) ** (m + n) * math.pi / sin_pi(beta)
        * gamma_product([beta - n + 1], [kernel])
        / math.factorial(m + 1)
        * principal_power(w, nu + 1 - n)
        * series.value
    )


def progenic_3f2_pieces(p: ThreeF2Params, kind: ProgenicPiece) -> complex:
    """Progenic finite part over [0, 1] of s^(beta-n) ((1-x)^-1 - s)^(n-nu-1) (1-s)^-(beta+sigma-nu).

    ST3F2 is the plain finite part; TERM2 and MOFPIX carry an extra ln(s) and
    belong to the cases n + sigma - nu >= 1 and nu - sigma - n >= 0.
    """
    w = _check_near_one(p.z)
    if kind is ProgenicPiece.ST3F2:
        return _st3f2(p, w)
    if kind is ProgenicPiece.TERM2:
        return _term2(p, _require(p, ThreeF2Case.POLE_POS), w)
    return _mofpix(p, _require(p, ThreeF2Case.POLE_NEG), w)


def progenic_3f2_series(p: ThreeF2Params) -> complex:
    """ST3F2 from the progenic Stieltjes value, for cross-checking."""
    w = _check_near_one(p.z)
    spec = _keyx_spec(p, w)
    return progenic_gauss_value(spec.a, spec.b, spec.mu, spec.nu, spec.rho)
