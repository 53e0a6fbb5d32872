"""Closed-form fundamental and beta-type finite-part integrals.

    branch:   FP int_0^inf (s+x)^-upsilon x^-lambda dx
    pole:     FP int_0^inf (s+x)^-upsilon x^-(n+1) dx
    beta:     FP int_0^1 y^(sigma-1) (1-y)^-rho dy
    beta_log: FP int_0^1 y^(sigma-1) (1-y)^-rho ln(y) dy
"""

import logging
import math

from pydantic import AliasChoices, Field, model_validator

from .errors import DomainError
from .logging import conditioning_warning
from .params import Complex, ParamSpec, on_branch_cut
from .special_core import (
    binomial_complex,
    digamma,
    gamma_product,
    is_integer,
    near_integer,
    nearest_integer,
    principal_log,
    principal_power,
)

__all__ = [
    "BetaFpiSpec",
    "FpiBranchSpec",
    "FpiPoleSpec",
    "FpiValue",
    "beta_fpi",
    "beta_fpi_log",
    "beta_value",
    "beta_log_value",
    "branch_value",
    "fpi_branch_infinite",
    "fpi_convergent",
    "fpi_pole_infinite",
    "pole_coefficient",
    "pole_value",
]

logger = logging.getLogger(__name__)


class FpiBranchSpec(ParamSpec):
    """Parameters of the branch-point finite part."""

    s: Complex
    upsilon: Complex
    lam: Complex = Field(validation_alias=AliasChoices("lam", "lambda"))

    @model_validator(mode="after")
    def check_domain(self) -> "FpiBranchSpec":
        """|arg s| < pi, upsilon != 0, Re lambda > 0, lambda not an integer."""
        if on_branch_cut(self.s):
            raise ValueError("s must satisfy |arg s| < pi")
        if self.upsilon == 0:
            raise ValueError("upsilon must be nonzero")
        if self.lam.real <= 0:
            raise ValueError("Re(lambda) must be positive")
        if is_integer(self.lam):
            raise ValueError("lambda must not be an integer")
        if (self.lam + self.upsilon).real <= 1:
            raise ValueError("Re(lambda + upsilon) must exceed 1")
        return self


class FpiPoleSpec(ParamSpec):
    """Parameters of the pole finite part."""

    s: Complex
    upsilon: Complex
    n: int = Field(ge=0)

    @model_validator(mode="after")
    def check_domain(self) -> "FpiPoleSpec":
        """|arg s| < pi, upsilon != 0, Re(n + upsilon) > 0."""
        if on_branch_cut(self.s):
            raise ValueError("s must satisfy |arg s| < pi")
        if self.upsilon == 0:
            raise ValueError("upsilon must be nonzero")
        if (self.n + self.upsilon).real <= 0:
            raise ValueError("Re(n + upsilon) must be positive")
        return self


class BetaFpiSpec(ParamSpec):
    """Parameters of the beta-type finite parts on [0, 1]."""

    sigma: Complex
    rho: Complex

    @model_validator(mode="after")
    def check_domain(self) -> "BetaFpiSpec":
        """Re sigma > 0, Re rho > 0, rho not a positive integer."""
        if self.sigma.real <= 0:
            raise ValueError("Re(sigma) must be positive")
        if self.rho.real <= 0:
            raise ValueError("Re(rho) must be positive")
        if is_integer(self.rho):
            raise ValueError("rho must not be a positive integer")
        return self


def branch_value(s: complex, upsilon: complex, lam: complex) -> complex:
    """Branch-point finite part continued to every non-integer lambda.

    Gamma(1-lambda) Gamma(lambda+upsilon-1) / (Gamma(upsilon) s^(lambda+upsilon-1)),
    which equals pi Gamma(lambda+upsilon-1) / (s^.. sin(pi lambda) Gamma(upsilon)
    Gamma(lambda)). Convergent integrals (Re lambda < 1) are included.
    """
    exponent = lam + upsilon - 1
    return gamma_product([1 - lam, exponent], [upsilon]) * principal_power(
        s, -exponent
    )


class FpiValue(complex):
    """A finite-part value that carries its conditioning warnings."""

    warnings: tuple[str, ...]

    def __new__(cls, value: complex, warnings: tuple[str, ...] = ()) -> "FpiValue":
        obj = super().__new__(cls, value)
        obj.warnings = tuple(warnings)
        return obj


def fpi_branch_infinite(spec: FpiBranchSpec) -> FpiValue:
    """Finite part of int_0^inf (s+x)^-upsilon x^-lambda dx.

    A lambda within the near-integer window gets a warning on the result.
    """
    warnings = ()
    if near_integer(spec.lam):
        warnings = (
            conditioning_warning(
                logger, "lambda", spec.lam, "csc(pi lambda) amplifies error"
            ),
        )
    return FpiValue(branch_value(spec.s, spec.upsilon, spec.lam), warnings)


def fpi_convergent(s: complex, upsilon: complex, lam: complex) -> complex:
    """Value of the convergent integral int_0^inf (s+x)^-upsilon x^-lambda dx."""
    s, upsilon, lam = complex(s), complex(upsilon), complex(lam)
    if lam.real >= 1 or (lam + upsilon).real <= 1:
        raise DomainError(
            f"integral diverges for lambda={lam}, upsilon={upsilon}"
        )
    if on_branch_cut(s):
        raise DomainError("s must satisfy |arg s| < pi")
    return branch_value(s, upsilon, lam)


def pole_coefficient(upsilon: complex, n: int) -> complex:
    """(-1)^n (upsilon)_n / n!, built as a product of ratios so it stays finite for large n."""
    return binomial_complex(-complex(upsilon), n)


def pole_value(
    s: complex, upsilon: complex, n: int, coeff: complex | None = None
) -> complex:
    """Pole finite part without validation.

    (-1)^n (upsilon)_n / (s^(n+upsilon) n!) (ln s + psi(n+1) - psi(n+upsilon))

    Callers walking n upward can pass the running coefficient.
    """
    if coeff is None:
        coeff = pole_coefficient(upsilon, n)
    if coeff == 0:
        return 0j
    bracket = principal_log(s) + digamma(n + 1) - digamma(n + upsilon)
    return coeff * principal_power(s, -(n + upsilon)) * bracket


def fpi_pole_infinite(spec: FpiPoleSpec) -> complex:
    """Finite part of int_0^inf (s+x)^-upsilon x^-(n+1) dx."""
    return pole_value(spec.s, spec.upsilon, spec.n)


def beta_value(sigma: complex, rho: complex) -> complex:
    """Gamma(sigma) Gamma(1-rho) / Gamma(1+sigma-rho); zero when sigma-rho is a negative integer."""
    return gamma_product([sigma, 1 - rho], [1 + sigma - rho])


def beta_fpi(spec: BetaFpiSpec) -> complex:
    """Finite part of int_0^1 y^(sigma-1) (1-y)^-rho dy."""
    return beta_value(spec.sigma, spec.rho)


def beta_log_value(sigma: complex, rho: complex) -> complex:
    """Logarithmic beta finite part without validation."""
    diff = nearest_integer(sigma - rho)
    if diff is not None and diff < 0:
        # removable singularity: psi/Gamma at a pole tends to a finite limit
        j = -diff - 1
        return (-1) ** j * math.factorial(j) * gamma_product([sigma, 1 - rho])
    return beta_value(sigma, rho) * (digamma(sigma) - digamma(sigma - rho + 1))


def beta_fpi_log(spec: BetaFpiSpec) -> complex:
    """Finite part of int_0^1 y^(sigma-1) (1-y)^-rho ln(y) dy."""
    return beta_log_value(spec.sigma, spec.rho)
