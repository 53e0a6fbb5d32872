"""Generalized Stieltjes integrals by finite-part series.

    I = int_0^inf x^(nu-1) (a+x)^-mu (b+x)^-rho dx

Expanding (b+x)^-rho binomially and integrating term by term gives a series
of finite-part integrals of the fundamental kind, convergent for |b| < |a|.
The expansion misses the contribution of the singularity at x = -b, which is
added back either as a progenic finite part over [0, b] (branch point) or as a
residue (pole). Which of the four forms applies depends on whether rho and
rho - nu are integers.
"""

import cmath
import math
from collections.abc import Iterator
from enum import Enum

import numpy as np
from pydantic import model_validator

from .errors import DomainError, UnsupportedCase, WrongCase
from .fpi_closed import (
    beta_log_value,
    beta_value,
    branch_value,
    pole_coefficient,
    pole_value,
)
from .fpi_oracle import SingularHint, quadrature
from .hyp2f1 import SERIES_RADIUS, gauss_value
from .logging import LoggingMixin
from .params import Complex, ParamSpec, on_branch_cut
from .series import SeriesResult, combine, sum_series
from .special_core import (
    gamma_product,
    near_integer,
    nearest_integer,
    pochhammer,
    principal_log,
    principal_power,
    sin_pi,
)

__all__ = [
    "CaseTag",
    "StieltjesEvaluator",
    "StieltjesGaussSpec",
    "classify_case",
    "contour_residue",
    "convergent_head",
    "fundamental_fpi_for_case",
    "gauss_as_stieltjes",
    "fundamental_series",
    "progenic_fpi_gauss",
    "progenic_fpi_gauss_b_over_a",
    "progenic_fpi_gauss_log",
    "progenic_gauss_value",
    "progenic_log_value",
    "residue_pole_kernel",
    "singular_contribution",
    "stieltjes_direct",
    "stieltjes_fpi_series",
]

# series safety margin inside |b| < |a|
RATIO_LIMIT = 0.9
CONTOUR_POINTS = 64


class CaseTag(Enum):
    """Kind of singularity at the origin and at -b."""

    BRANCH_BRANCH = "BranchBranch"
    POLE_KERNEL = "PoleKernel"
    POLE_ORIGIN_POS = "PoleOriginPos"
    POLE_ORIGIN_NEG = "PoleOriginNeg"


class StieltjesGaussSpec(ParamSpec):
    """Parameters (a, b, mu, nu, rho) of the Stieltjes integral."""

    a: Complex
    b: Complex
    mu: Complex
    nu: Complex
    rho: Complex

    @model_validator(mode="after")
    def check_domain(self) -> "StieltjesGaussSpec":
        """|arg a|, |arg b| < pi; mu != 0; Re nu, Re rho, Re(rho+mu-nu) > 0."""
        if on_branch_cut(self.a) or on_branch_cut(self.b):
            raise ValueError("a and b must satisfy |arg| < pi")
        if self.mu == 0:
            raise ValueError("mu must be nonzero")
        if self.nu.real <= 0:
            raise ValueError("Re(nu) must be positive")
        if self.rho.real <= 0:
            raise ValueError("Re(rho) must be positive")
        if (self.rho + self.mu - self.nu).real <= 0:
            raise ValueError("Re(rho + mu - nu) must be positive")
        return self


def classify_case(spec: StieltjesGaussSpec) -> CaseTag:
    """Case of the parameters under the integer-detection tolerance."""
    if nearest_integer(spec.rho) is not None:
        if nearest_integer(spec.nu) is not None:
            raise UnsupportedCase(
                f"rho={spec.rho} and nu={spec.nu} are both integers"
            )
        return CaseTag.POLE_KERNEL
    diff = nearest_integer(spec.rho - spec.nu)
    if diff is None:
        return CaseTag.BRANCH_BRANCH
    if diff < 0:
        return CaseTag.POLE_ORIGIN_POS
    return CaseTag.POLE_ORIGIN_NEG


def stieltjes_direct(spec: StieltjesGaussSpec) -> complex:
    """The integral by quadrature, for real parameters and real positive a, b.

    x = t/(1-t) maps it to int_0^1 t^(nu-1) (1-t)^(mu+rho-nu-1) g(t) dt with
    g smooth, which QAWS integrates with the algebraic weight exactly.
    """
    values = (spec.a, spec.b, spec.mu, spec.nu, spec.rho)
    if any(v.imag != 0.0 for v in values) or spec.a.real <= 0 or spec.b.real <= 0:
        raise DomainError("quadrature needs real parameters and real positive a, b")
    a, b, mu, nu, rho = (v.real for v in values)

    def regular(t: float) -> float:
        return (a * (1 - t) + t) ** (-mu) * (b * (1 - t) + t) ** (-rho)

    hint = SingularHint(alpha=nu - 1, beta=mu + rho - nu - 1)
    return quadrature(regular, (0.0, 1.0), hint, epsabs=0.0)


def progenic_gauss_value(a, b, mu, nu, rho) -> complex:
    """FP int_0^b x^(nu-1) (a-x)^-mu (b-x)^-rho dx without validation.

    Uses the series in b/(b-a) when it lies inside the series radius and the
    series in b/a otherwise.
    """
    a, b, mu, nu, rho = (complex(v) for v in (a, b, mu, nu, rho))
    prefactor = gamma_product([nu, 1 - rho], [nu - rho + 1]) * principal_power(
        b, nu - rho
    )
    if prefactor == 0:
        return 0j
    w = b / (b - a)
    if abs(w) <= RATIO_LIMIT:
        return (
            prefactor
            * principal_power(a - b, -mu)
            * gauss_value(mu, 1 - rho, nu - rho + 1, w)
        )
    if abs(b / a) > SERIES_RADIUS:
        raise DomainError(f"neither b/(b-a)={w} nor b/a={b / a} is inside the radius")
    return prefactor * principal_power(a, -mu) * gauss_value(mu, nu, nu - rho + 1, b / a)


def progenic_log_value(a, b, mu, nu, rho) -> SeriesResult:
    """FP int_0^b x^(nu-1) (a-x)^-mu (b-x)^-rho ln(x) dx without validation.

    sum_k (mu)_k / k! a^(-mu-k) b^(nu-rho+k) [ln(b) B(nu+k, rho) + B_log(nu+k, rho)]
    with B and B_log the beta-type finite parts on [0, 1].
    """
    a, b, mu, nu, rho = (complex(v) for v in (a, b, mu, nu, rho))
    if nearest_integer(rho) is not None:
        raise DomainError(f"rho={rho} must not be an integer")
    if abs(b / a) > SERIES_RADIUS:
        raise DomainError(f"|b/a|={abs(b / a):.3f} exceeds the series radius")
    log_b = principal_log(b)
    ratio = b / a

    def terms() -> Iterator[complex]:
        coeff = principal_power(a, -mu) * principal_power(b, nu - rho)
        k = 0
        while True:
            sigma = nu + k
            yield coeff * (log_b * beta_value(sigma, rho) + beta_log_value(sigma, rho))
            coeff *= (mu + k) / (k + 1) * ratio
            k += 1

    return sum_series(terms(), label="progenic log series")


class StieltjesEvaluator(LoggingMixin):
    """Finite-part series evaluation of one Stieltjes integral."""

    def __init__(self, spec: StieltjesGaussSpec) -> None:
        self.spec = spec
        self.case = classify_case(spec)
        self.warnings: list[str] = []
        for label, value in (("rho", spec.rho), ("rho-nu", spec.rho - spec.nu)):
            if near_integer(value):
                self.warnings.append(self.warn_near_integer(label, value))

    @property
    def offset(self) -> int:
        """nu - rho for PoleOriginPos, rho - nu for PoleOriginNeg, else 0."""
        if self.case is CaseTag.POLE_ORIGIN_POS:
            return nearest_integer(self.spec.nu - self.spec.rho)
        if self.case is CaseTag.POLE_ORIGIN_NEG:
            return nearest_integer(self.spec.rho - self.spec.nu)
        return 0

    def _pole_index(self, k: int) -> int | None:
        """Order n of the pole finite part at step k; None where the branch form applies."""
        if self.case is CaseTag.POLE_ORIGIN_POS:
            return k - self.offset if k >= self.offset else None
        if self.case is CaseTag.POLE_ORIGIN_NEG:
            return k + self.offset
        return None

    def fundamental_fpi(self, k: int) -> complex:
        """FP int_0^inf (a+x)^-mu x^-(k+rho-nu+1) dx with this case's substitutions."""
        if k < 0:
            raise DomainError(f"k must be nonnegative, got {k}")
        a, mu = self.spec.a, self.spec.mu
        if self.case in (CaseTag.BRANCH_BRANCH, CaseTag.POLE_KERNEL):
            return branch_value(a, mu, k + self.spec.rho - self.spec.nu + 1)
        n = self._pole_index(k)
        if n is None:
            # convergent at the origin
            exponent = k + mu - self.offset
            return gamma_product([self.offset - k, exponent], [mu]) * principal_power(
                a, -exponent
            )
        return pole_value(a, mu, n)

    def fundamental_terms(self) -> Iterator[complex]:
        """Terms C(-rho, k) b^k FP_k of the expansion."""
        a, mu, rho, b = self.spec.a, self.spec.mu, self.spec.rho, self.spec.b
        coeff = 1 + 0j
        pole_coeff = None
        k = 0
        while True:
            n = self._pole_index(k)
            if n is None:
                fpi = self.fundamental_fpi(k)
            else:
                # (-1)^n (mu)_n / n! carried from the previous order
                if pole_coeff is None:
                    pole_coeff = pole_coefficient(mu, n)
                else:
                    pole_coeff *= -(mu + n - 1) / n
                fpi = pole_value(a, mu, n, coeff=pole_coeff)
            yield coeff * fpi
            coeff *= (-rho - k) / (k + 1) * b
            k += 1

    def fundamental_series(self) -> SeriesResult:
        """Sum of the finite-part series."""
        ratio = abs(self.spec.b / self.spec.a)
        if ratio > RATIO_LIMIT:
            raise DomainError(
                f"|b/a|={ratio:.3f} exceeds {RATIO_LIMIT}; the expansion needs |b| < |a|"
            )
        return sum_series(self.fundamental_terms(), label=f"{self.case.value} series")

    def residue(self) -> complex:
        """Residue of z^(nu-1) (a+z)^-mu (b+z)^-n at z = -b, arg z taken in [0, 2pi)."""
        self._require(CaseTag.POLE_KERNEL)
        a, b, mu, nu = self.spec.a, self.spec.b, self.spec.mu, self.spec.nu
        n = nearest_integer(self.spec.rho)
        total = 0j
        for k in range(n):
            total += (
                math.comb(n - 1, k)
                * pochhammer(nu - k, k)
                * pochhammer(mu, n - 1 - k)
                * principal_power(b, nu - k - 1)
                * principal_power(a - b, k - mu - n + 1)
            )
        # (-b)^(nu-1-k) = e^(i pi nu) (-1)^(k+1) b^(nu-1-k); the derivative of
        # (a+z)^-mu contributes (-1)^(n-1-k)
        return (-1) ** n * cmath.exp(1j * math.pi * nu) * total / math.factorial(n - 1)

    def progenic(self) -> complex:
        """FP int_0^b x^(nu-1) (a-x)^-mu (b-x)^-rho dx."""
        self._require(CaseTag.BRANCH_BRANCH)
        s = self.spec
        return progenic_gauss_value(s.a, s.b, s.mu, s.nu, s.rho)

    def progenic_log(self) -> SeriesResult:
        """FP int_0^b x^(nu-1) (a-x)^-mu (b-x)^-rho ln(x) dx."""
        self._require(CaseTag.POLE_ORIGIN_POS, CaseTag.POLE_ORIGIN_NEG)
        s = self.spec
        return progenic_log_value(s.a, s.b, s.mu, s.nu, s.rho)

    def singular_contribution(self) -> SeriesResult:
        """Contribution of the singularity at -b missed by the expansion."""
        s = self.spec
        if self.case is CaseTag.BRANCH_BRANCH:
            value = sin_pi(s.rho) / sin_pi(s.rho - s.nu) * self.progenic()
            return combine(value)
        if self.case is CaseTag.POLE_KERNEL:
            # -2 pi i / (e^(2 pi i nu) - 1) Res
            factor = -2j * math.pi / (cmath.exp(2j * math.pi * s.nu) - 1)
            return combine(factor * self.residue())
        sign = (-1) ** self.offset
        return self.progenic_log().scaled(-sign * sin_pi(s.rho) / math.pi)

    def evaluate(self) -> SeriesResult:
        """The integral as finite-part series plus singular contribution."""
        self.log_debug_section("Stieltjes integral, case %s", self.case.value)
        series = self.fundamental_series()
        singular = self.singular_contribution()
        self.log_series("finite-part series", series)
        self.log_series("singular contribution", singular)
        return combine(series, singular).with_warnings(*self.warnings)

    def _require(self, *cases: CaseTag) -> None:
        if self.case not in cases:
            raise WrongCase(
                f"{self.case.value} spec passed to an evaluator for "
                + ", ".join(c.value for c in cases)
            )


def fundamental_fpi_for_case(spec: StieltjesGaussSpec, k: int) -> complex:
    """k-th fundamental finite part of the expansion."""
    return StieltjesEvaluator(spec).fundamental_fpi(k)


def fundamental_series(spec: StieltjesGaussSpec) -> SeriesResult:
    """Sum over k of C(-rho, k) b^k times the k-th fundamental finite part."""
    return StieltjesEvaluator(spec).fundamental_series()


def singular_contribution(spec: StieltjesGaussSpec) -> SeriesResult:
    """Progenic or residue term for the case of the parameters."""
    return StieltjesEvaluator(spec).singular_contribution()


def stieltjes_fpi_series(spec: StieltjesGaussSpec) -> SeriesResult:
    """The Stieltjes integral by finite-part integration."""
    return StieltjesEvaluator(spec).evaluate()


def progenic_fpi_gauss(spec: StieltjesGaussSpec) -> complex:
    """Progenic finite part over [0, b] for the branch-branch case."""
    return StieltjesEvaluator(spec).progenic()


def progenic_fpi_gauss_b_over_a(spec: StieltjesGaussSpec) -> complex:
    """Progenic finite part from the series in b/a.

    b^(nu-rho) a^-mu Gamma(nu) Gamma(1-rho) / Gamma(nu-rho+1) 2F1(mu, nu; nu-rho+1; b/a)
    """
    evaluator = StieltjesEvaluator(spec)
    evaluator._require(CaseTag.BRANCH_BRANCH)
    a, b, mu, nu, rho = spec.a, spec.b, spec.mu, spec.nu, spec.rho
    return (
        gamma_product([nu, 1 - rho], [nu - rho + 1])
        * principal_power(b, nu - rho)
        * principal_power(a, -mu)
        * gauss_value(mu, nu, nu - rho + 1, b / a)
    )


def progenic_fpi_gauss_log(spec: StieltjesGaussSpec) -> complex:
    """Progenic logarithmic finite part over [0, b] for the pole-origin cases."""
    return StieltjesEvaluator(spec).progenic_log().value


def residue_pole_kernel(spec: StieltjesGaussSpec) -> complex:
    """Residue at the pole z = -b of the integrand with rho = n."""
    return StieltjesEvaluator(spec).residue()


def contour_residue(spec: StieltjesGaussSpec, points: int = CONTOUR_POINTS) -> complex:
    """Residue at z = -b by the trapezoidal rule on a small circle.

    The circle has radius min(|b|, |a-b|)/2 and z^(nu-1) uses arg z in [0, 2pi),
    the branch whose cut lies along the positive real axis.
    """
    a, b, mu, nu, rho = spec.a, spec.b, spec.mu, spec.nu, spec.rho
    radius = 0.5 * min(abs(b), abs(a - b))
    theta = 2 * np.pi * np.arange(points) / points
    offsets = radius * np.exp(1j * theta)
    z = -b + offsets
    arg = np.mod(np.angle(z), 2 * np.pi)
    z_power = np.exp((nu - 1) * (np.log(np.abs(z)) + 1j * arg))
    values = z_power * (a + z) ** (-mu) * (b + z) ** (-rho)
    # (1 / 2 pi i) sum f(z_j) i r e^(i theta_j) (2 pi / N)
    return complex(np.mean(values * offsets))


def convergent_head(spec: StieltjesGaussSpec) -> complex:
    """Closed form of the first nu - rho terms of the PoleOriginPos expansion.

    Those integrals converge; their sum is
    Gamma(nu-rho) Gamma(mu-nu+rho) / (a^(mu+rho-nu) Gamma(mu))
        sum_(k<nu-rho) (rho)_k (mu-nu+rho)_k / ((1-nu+rho)_k k!) (b/a)^k
    """
    evaluator = StieltjesEvaluator(spec)
    evaluator._require(CaseTag.POLE_ORIGIN_POS)
    a, b, mu, nu, rho = spec.a, spec.b, spec.mu, spec.nu, spec.rho
    m = evaluator.offset
    ratio = b / a
    total = sum(
        (
            pochhammer(rho, k) * pochhammer(mu - nu + rho, k)
            / (pochhammer(1 - nu + rho, k) * math.factorial(k)) * ratio**k
            for k in range(m)
        ),
        start=0j,
    )
    return (
        gamma_product([nu - rho, mu - nu + rho], [mu])
        * principal_power(a, -(mu + rho - nu))
        * total
    )


def gauss_as_stieltjes(
    mu: complex, nu: complex, sigma: complex, z: complex
) -> tuple[complex, StieltjesGaussSpec]:
    """Factor and spec with 2F1(mu, nu; sigma; z) = factor * I(1, 1-z, mu, nu, sigma-mu).

    Needs Re nu > 0, Re(sigma-nu) > 0 and Re(sigma-mu) > 0.
    """
    mu, nu, sigma, z = (complex(v) for v in (mu, nu, sigma, z))
    spec = StieltjesGaussSpec(a=1, b=1 - z, mu=mu, nu=nu, rho=sigma - mu)
    factor = gamma_product([sigma], [nu, sigma - nu]) * principal_power(
        spec.b, spec.rho - spec.nu
    )
    return factor, spec
