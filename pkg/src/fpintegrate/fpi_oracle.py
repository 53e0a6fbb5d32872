"""Finite parts extracted from their definition.

The integral of f(x) x^-lambda (ln x)^delta is cut at x = eps, computed by
adaptive quadrature on a geometric grid of cutoffs, and the eps-dependence is
fitted by linear least squares over exponents known from the Taylor series of
f at the origin. The constant of the fit is the finite part.

The divergent model is written in powers of eps and powers of ln(eps), never
ln(c eps): constants such as ln(c) belong to the finite part. This is the
convention every closed form in the package follows.
"""

import cmath
import math
import warnings
from collections.abc import Callable, Sequence
from enum import Enum
from typing import NamedTuple

import numpy as np
from pydantic import AliasChoices, Field, model_validator
from scipy.integrate import IntegrationWarning, quad

from .config import get_settings
from .errors import DomainError, FitIllConditioned, NonConvergence, QuadratureFailure
from .logging import LoggingMixin
from .params import Complex, ParamSpec
from .series import KahanSum
from .special_core import binomial_complex, near_integer, nearest_integer, principal_power

__all__ = [
    "DivergentTerm",
    "EpsilonExtractor",
    "FpiFamily",
    "OracleProblem",
    "OracleResult",
    "SingularHint",
    "extract_finite_part",
    "extract_finite_part_upper",
    "family_oracle",
    "quadrature",
    "richardson_limit",
    "taylor_coefficients",
]

DEFAULT_LEVELS = 16
MIN_EXTRA_LEVELS = 4
CORRECTION_TERMS = 2
# exponents closer than this (but not equal) make the fit singular
EXPONENT_COLLISION = 1e-3
# smallest eps^(Re lambda - 1) allowed on the grid, bounds cancellation
CANCELLATION_FLOOR = 1e-7
PANEL_EPSREL = 1e-13
FINITE_DIFFERENCE_RADIUS = 1e-2


class SingularHint(NamedTuple):
    """Endpoint exponents of the weight (x - lo)^alpha (hi - x)^beta."""

    alpha: float = 0.0
    beta: float = 0.0
    log_lower: bool = False


class DivergentTerm(NamedTuple):
    """One term coefficient * eps^exponent * ln(eps)^log_power of the divergent model."""

    exponent: complex
    log_power: int
    coefficient: complex

    def at(self, eps: float) -> complex:
        """Value of the term at a cutoff."""
        log_eps = math.log(eps)
        return self.coefficient * cmath.exp(self.exponent * log_eps) * log_eps**self.log_power


class OracleResult(NamedTuple):
    """Finite part with its uncertainty and the divergent terms dropped."""

    finite_part: complex
    error_estimate: float
    dropped_terms: tuple[DivergentTerm, ...] = ()


class OracleProblem(ParamSpec):
    """FP int_0^upper_limit f(x) x^-lambda (ln x)^log_factor dx.

    Attributes:
        integrand: The regular factor f, analytic at the origin
        lam: Exponent of the singularity at the origin (alias ``lambda``)
        log_factor: Whether the integrand carries ln(x)
        upper_limit: Upper integration limit, may be infinite
        taylor_coeffs: Taylor coefficients a_k of f at 0, estimated if absent
        scale: Distance from the origin to the nearest singularity of f
    """

    integrand: Callable[[float], complex]
    lam: Complex = Field(validation_alias=AliasChoices("lam", "lambda"))
    log_factor: bool = False
    upper_limit: float = math.inf
    taylor_coeffs: tuple[Complex, ...] | None = None
    scale: float = 1.0

    @model_validator(mode="after")
    def check_domain(self) -> "OracleProblem":
        """Re lambda > 0, positive upper limit and scale."""
        if self.lam.real <= 0:
            raise ValueError("Re(lambda) must be positive")
        if not self.upper_limit > 0:
            raise ValueError("upper_limit must be positive")
        if not self.scale > 0:
            raise ValueError("scale must be positive")
        return self

    def exponent(self, p: int) -> complex:
        """Exponent p + 1 - lambda of the p-th Taylor term after integration."""
        return p + 1 - self.lam

    def weight(self, x: float) -> complex:
        """x^-lambda (ln x)^delta for x > 0."""
        if self.lam.imag == 0.0:
            value: complex = x ** (-self.lam.real)
        else:
            value = cmath.exp(-self.lam * math.log(x))
        if self.log_factor:
            value *= math.log(x)
        return value


def _quad_part(func, lo, hi, epsabs, epsrel, limit, **kwargs) -> tuple[float, float]:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        result = quad(
            func, lo, hi, epsabs=epsabs, epsrel=epsrel, limit=limit, full_output=1,
            **kwargs,
        )
    value, abserr = result[0], result[1]
    if len(result) > 3 and abserr > max(1e-10, 1e-8 * abs(value)):
        raise NonConvergence(
            f"quadrature on [{lo}, {hi}] failed: {result[3].splitlines()[0]}"
        )
    return value, abserr


def quadrature(
    f: Callable[[float], complex],
    interval: tuple[float, float],
    singular_hint: SingularHint | None = None,
    *,
    epsrel: float | None = None,
    epsabs: float = 1e-14,
    with_error: bool = False,
) -> complex | tuple[complex, float]:
    """Adaptive Gauss-Kronrod quadrature of a complex-valued function.

    With a ``singular_hint`` the integral is of f times the algebraic endpoint
    weight (optionally times ln(x - lo)), integrated exactly by QUADPACK's
    QAWS rule; the interval must then be finite. An infinite upper limit uses
    the QAGI transformation. Real and imaginary parts are integrated apart.
    """
    settings = get_settings()
    epsrel = settings.quad_epsrel if epsrel is None else epsrel
    lo, hi = (float(v) for v in interval)
    if not hi > lo:
        raise DomainError(f"empty interval [{lo}, {hi}]")
    kwargs: dict = {}
    if singular_hint is not None:
        if math.isinf(hi):
            raise DomainError("endpoint weights need a finite interval")
        if singular_hint.alpha <= -1 or singular_hint.beta <= -1:
            raise DomainError(f"weight exponents must exceed -1: {singular_hint}")
        kwargs["weight"] = "alg-loga" if singular_hint.log_lower else "alg"
        kwargs["wvar"] = (singular_hint.alpha, singular_hint.beta)

    probe = f(lo + 0.5 * min(hi - lo, 1.0))
    real, real_err = _quad_part(
        lambda x: complex(f(x)).real, lo, hi, epsabs, epsrel, settings.quad_limit,
        **kwargs,
    )
    imag, imag_err = 0.0, 0.0
    if isinstance(probe, complex):
        imag, imag_err = _quad_part(
            lambda x: complex(f(x)).imag, lo, hi, max(epsabs, epsrel * abs(real)),
            epsrel, settings.quad_limit, **kwargs,
        )
    value = complex(real, imag)
    if with_error:
        return value, math.hypot(real_err, imag_err)
    return value


def richardson_limit(
    step_ratio: float, values: Sequence[complex], orders: Sequence[int] | None = None
) -> complex:
    """Extrapolate values computed at steps h, h/r, h/r^2, ... to h -> 0.

    ``orders`` lists the powers of h in the error expansion, eliminated one per
    column of the table (1, 2, 3, ... by default).
    """
    n = len(values)
    orders = list(range(1, n)) if orders is None else list(orders)
    table = np.asarray(values, dtype=complex)
    for order in orders[: n - 1]:
        mult = step_ratio**order
        table = (mult * table[1:] - table[:-1]) / (mult - 1)
    return complex(table[0])


def _central_weights(order: int, half_width: int) -> np.ndarray:
    """Stencil weights w_j, j = -m..m, with sum w_j f(j h) = h^order f^(order)(0)."""
    nodes = np.arange(-half_width, half_width + 1, dtype=float)
    degree = 2 * half_width + 1
    vandermonde = np.array(
        [nodes**k / math.factorial(k) for k in range(degree)], dtype=float
    )
    rhs = np.zeros(degree)
    rhs[order] = 1.0
    return np.linalg.solve(vandermonde, rhs)


def taylor_coefficients(
    f: Callable[[float], complex], count: int, radius: float = FINITE_DIFFERENCE_RADIUS
) -> list[complex]:
    """Taylor coefficients a_0..a_{count-1} of f at 0 by central differences.

    Each derivative is taken at steps radius, radius/2 and radius/4 and
    Richardson-extrapolated over the two leading (even) error orders.
    """
    coeffs = []
    for p in range(count):
        half_width = p // 2 + 1
        weights = _central_weights(p, half_width)
        # symmetric stencil: error terms h^q, h^(q+2), ... with q even
        leading = 2 * half_width + 1 - p
        if leading % 2:
            leading += 1
        estimates = []
        for level in range(3):
            h = radius / (half_width * 2**level)
            samples = [complex(f(j * h)) for j in range(-half_width, half_width + 1)]
            estimates.append(np.dot(weights, samples) / h**p)
        derivative = richardson_limit(2.0, estimates, [leading, leading + 2])
        coeffs.append(derivative / math.factorial(p))
    return coeffs


class EpsilonExtractor(LoggingMixin):
    """Cutoff-and-extrapolate evaluator for one OracleProblem.

    Attributes:
        problem: The integral to regularise
        eps0: Largest cutoff of the grid
        levels: Number of cutoffs
        split: Interior point splitting the fixed part of the integral
        fit_divergent: Also fit the divergent exponents instead of trusting
            the Taylor coefficients
    """

    def __init__(
        self,
        problem: OracleProblem,
        eps0: float | None = None,
        levels: int = DEFAULT_LEVELS,
        split: float | None = None,
        fit_divergent: bool = False,
    ) -> None:
        self.problem = problem
        self.eps0 = (
            FINITE_DIFFERENCE_RADIUS * min(1.0, problem.scale) if eps0 is None else eps0
        )
        if not 0 < self.eps0 < problem.upper_limit:
            raise DomainError(
                f"eps0={self.eps0} must lie inside (0, {problem.upper_limit})"
            )
        if levels < MIN_EXTRA_LEVELS:
            raise FitIllConditioned(f"{levels} levels are too few to fit anything")
        self.levels = levels
        self.split = split
        self.fit_divergent = fit_divergent

    # ------------------------------------------------------------------ model

    @property
    def divergent_orders(self) -> list[int]:
        """Taylor orders p whose integrated term does not vanish as eps -> 0."""
        orders = []
        p = 0
        while True:
            e = self.problem.exponent(p)
            if e.real < 0 or nearest_integer(e) == 0:
                orders.append(p)
                p += 1
            else:
                return orders

    def coefficients(self) -> tuple[list[complex], bool]:
        """Taylor coefficients to subtract and whether they were estimated."""
        needed = len(self.divergent_orders)
        supplied = self.problem.taylor_coeffs
        if supplied is not None:
            if len(supplied) < needed:
                raise DomainError(
                    f"{needed} Taylor coefficients needed for lambda={self.problem.lam},"
                    f" got {len(supplied)}"
                )
            return list(supplied[: needed + 3]), False
        radius = FINITE_DIFFERENCE_RADIUS * self.problem.scale
        coeffs = taylor_coefficients(self.problem.integrand, needed + 1, radius)
        self.log_debug("Estimated Taylor coefficients %s", coeffs)
        return coeffs, True

    def _integrated_term(self, p: int, a: complex) -> list[DivergentTerm]:
        """eps-dependent part of int_eps a x^(e-1) (ln x)^delta dx."""
        e = self.problem.exponent(p)
        zero = nearest_integer(e) == 0
        if not self.problem.log_factor:
            if zero:
                return [DivergentTerm(0j, 1, -a)]
            return [DivergentTerm(e, 0, -a / e)]
        if zero:
            return [DivergentTerm(0j, 2, -a / 2)]
        return [DivergentTerm(e, 1, -a / e), DivergentTerm(e, 0, a / e**2)]

    def _basis_for(self, p: int) -> list[tuple[complex, int]]:
        e = self.problem.exponent(p)
        if nearest_integer(e) == 0:
            e = 0j
        if self.problem.log_factor:
            if e == 0:
                return [(0j, 1), (0j, 2)]
            return [(e, 0), (e, 1)]
        return [(0j, 1)] if e == 0 else [(e, 0)]

    def basis(
        self, known: int, estimated: bool, extra_corrections: int = 0,
        fit_divergent: bool = False,
    ) -> list[tuple[complex, int]]:
        """Exponent/log-power pairs fitted besides the constant."""
        pairs: list[tuple[complex, int]] = []
        for p in range(known):
            e = self.problem.exponent(p)
            divergent = p in self.divergent_orders
            if (estimated and e.real < 1) or (fit_divergent and divergent):
                pairs += self._basis_for(p)
        for p in range(known, known + CORRECTION_TERMS + extra_corrections):
            pairs += self._basis_for(p)
        return pairs

    @staticmethod
    def _check_collisions(pairs: list[tuple[complex, int]]) -> None:
        exponents = [(0j, 0)] + pairs
        for i, (e1, k1) in enumerate(exponents):
            for e2, k2 in exponents[i + 1 :]:
                gap = abs(e1 - e2)
                if (0 < gap < EXPONENT_COLLISION) or (gap == 0 and k1 == k2):
                    raise FitIllConditioned(
                        f"fit exponents {e1} and {e2} nearly collide"
                    )

    # ------------------------------------------------------------- integrals

    def grid(self) -> np.ndarray:
        """Geometric cutoffs eps0 * r^j, with r = 1/2 unless cancellation forbids."""
        ratio = 0.5
        lam = self.problem.lam.real
        if lam > 1:
            eps_min = self.problem.scale * CANCELLATION_FLOOR ** (1.0 / (lam - 1))
            if self.eps0 * ratio ** (self.levels - 1) < eps_min:
                ratio = (eps_min / self.eps0) ** (1.0 / (self.levels - 1))
                if ratio >= 1:
                    raise FitIllConditioned(
                        f"eps0={self.eps0} leaves no room above eps_min={eps_min:.3e}"
                    )
        return self.eps0 * ratio ** np.arange(self.levels)

    def _integrand(self, x: float) -> complex:
        return complex(self.problem.integrand(x)) * self.problem.weight(x)

    def _quad(self, lo: float, hi: float) -> complex:
        try:
            return quadrature(self._integrand, (lo, hi), epsrel=PANEL_EPSREL, epsabs=0.0)
        except NonConvergence as exc:
            raise QuadratureFailure(str(exc)) from exc

    def fixed_part(self) -> complex:
        """Integral from eps0 to the upper limit."""
        upper = self.problem.upper_limit
        split = self.problem.scale if self.split is None else self.split
        if not self.eps0 < split < upper:
            if math.isinf(upper):
                split = max(1.0, 2 * self.eps0)
            else:
                split = 0.5 * (self.eps0 + upper)
        return self._quad(self.eps0, split) + self._quad(split, upper)

    def cutoff_integrals(self, grid: np.ndarray) -> np.ndarray:
        """I(eps_j) for every cutoff, accumulated panel by panel."""
        total = KahanSum()
        total.add(self.fixed_part())
        values = [total.value]
        for hi, lo in zip(grid[:-1], grid[1:], strict=True):
            total.add(self._quad(float(lo), float(hi)))
            values.append(total.value)
        return np.array(values, dtype=complex)

    # -------------------------------------------------------------------- fit

    def _fit(
        self, grid: np.ndarray, residual: np.ndarray, weights: np.ndarray,
        pairs: list[tuple[complex, int]],
    ) -> np.ndarray:
        if len(grid) < len(pairs) + 1 + MIN_EXTRA_LEVELS:
            raise FitIllConditioned(
                f"{len(grid)} levels cannot fit {len(pairs) + 1} unknowns"
            )
        log_eps = np.log(grid)
        columns = [np.ones_like(grid, dtype=complex)]
        for e, k in pairs:
            columns.append(np.exp(e * log_eps) * log_eps**k)
        matrix = np.stack(columns, axis=1)
        col_scale = np.max(np.abs(matrix), axis=0)
        matrix = matrix / col_scale * weights[:, None]
        solution, _, rank, _ = np.linalg.lstsq(matrix, residual * weights, rcond=None)
        if rank < len(columns):
            raise FitIllConditioned(f"fit matrix has rank {rank} < {len(columns)}")
        return solution / col_scale

    def extract(self) -> OracleResult:
        """Return the finite part, an error estimate and the dropped terms."""
        problem = self.problem
        self.log_debug_section("Extracting finite part, lambda=%s", problem.lam)
        if near_integer(problem.lam):
            self.warn_near_integer("lambda", problem.lam)
        if not self.divergent_orders:
            direct = self._convergent()
            if direct is not None:
                return direct

        coeffs, estimated = self.coefficients()
        known = len(coeffs)
        subtracted: list[DivergentTerm] = []
        dropped: list[DivergentTerm] = []
        for p, a in enumerate(coeffs):
            terms = self._integrated_term(p, a)
            subtracted += terms
            if p in self.divergent_orders:
                dropped += terms

        grid = self.grid()
        integrals = self.cutoff_integrals(grid)
        model = np.array([sum(t.at(float(eps)) for t in subtracted) for eps in grid])
        residual = integrals - model
        weights = 1.0 / (1.0 + np.abs(integrals))
        self.log_trace("I(eps)=%s", integrals)

        pairs = self.basis(known, estimated, fit_divergent=self.fit_divergent)
        self._check_collisions(pairs)
        solution = self._fit(grid, residual, weights, pairs)
        finite_part = complex(solution[0])

        # fitted corrections to the divergent exponents refine dropped_terms
        corrections = dict(zip(pairs, solution[1:], strict=True))
        refined = []
        for term in dropped:
            exponent = 0j if nearest_integer(term.exponent) == 0 else term.exponent
            key = (exponent, term.log_power)
            refined.append(term._replace(
                coefficient=term.coefficient + complex(corrections.pop(key, 0.0))
            ))

        alternates = []
        if len(grid) - 3 >= len(pairs) + 1 + MIN_EXTRA_LEVELS:
            alternates.append(self._fit(grid[3:], residual[3:], weights[3:], pairs))
        for alt_pairs in (
            self.basis(known, estimated, extra_corrections=1, fit_divergent=self.fit_divergent),
            self.basis(known, estimated, fit_divergent=not self.fit_divergent),
        ):
            try:
                self._check_collisions(alt_pairs)
                alternates.append(self._fit(grid, residual, weights, alt_pairs))
            except FitIllConditioned as exc:
                self.log_debug("Skipping alternate fit: %s", exc)
        spread = max((abs(complex(alt[0]) - finite_part) for alt in alternates), default=0.0)
        error = max(spread, 1e-10 * max(1.0, abs(finite_part)))
        self.log_debug("Finite part %s +- %.2e", finite_part, error)
        return OracleResult(finite_part, error, tuple(refined))

    def _convergent(self) -> OracleResult | None:
        """Plain quadrature when the integral converges and lambda is real."""
        problem = self.problem
        if problem.lam.imag != 0.0:
            return None
        hint = SingularHint(alpha=-problem.lam.real, log_lower=problem.log_factor)
        inner = min(problem.scale, problem.upper_limit)
        try:
            head, head_err = quadrature(
                problem.integrand, (0.0, inner), hint, epsabs=0.0, with_error=True
            )
            tail, tail_err = 0j, 0.0
            if inner < problem.upper_limit:
                tail, tail_err = quadrature(
                    self._integrand, (inner, problem.upper_limit), epsabs=0.0,
                    with_error=True,
                )
        except NonConvergence as exc:
            raise QuadratureFailure(str(exc)) from exc
        value = head + tail
        self.log_debug("Convergent integral %s", value)
        return OracleResult(value, max(head_err + tail_err, 1e-14 * abs(value)), ())


def extract_finite_part(
    problem: OracleProblem,
    eps0: float | None = None,
    levels: int = DEFAULT_LEVELS,
    *,
    split: float | None = None,
    fit_divergent: bool = False,
) -> OracleResult:
    """Finite part of int_0^a f(x) x^-lambda (ln x)^delta dx by cutoff extrapolation."""
    return EpsilonExtractor(problem, eps0, levels, split, fit_divergent).extract()


def extract_finite_part_upper(
    h: Callable[[float], complex],
    sigma: complex,
    d: float,
    *,
    lower: float = 0.0,
    taylor_coeffs: Sequence[complex] | None = None,
    scale: float | None = None,
    eps0: float | None = None,
    levels: int = DEFAULT_LEVELS,
) -> OracleResult:
    """Finite part of int_lower^d h(x) (d - x)^-sigma dx.

    The substitution x' = d - x moves the singularity to the origin. h is
    assumed analytic at d and defined a little beyond it; ``scale`` defaults to
    d - lower.
    """
    if not d > lower:
        raise DomainError(f"upper endpoint {d} must exceed {lower}")
    problem = OracleProblem(
        integrand=lambda x: h(d - x),
        lam=sigma,
        upper_limit=d - lower,
        taylor_coeffs=None if taylor_coeffs is None else tuple(taylor_coeffs),
        scale=d - lower if scale is None else scale,
    )
    return extract_finite_part(problem, eps0, levels)


class FpiFamily(Enum):
    """Closed-form finite-part families the oracle can reproduce."""

    BRANCH = "branch"
    POLE = "pole"
    BETA = "beta"
    BETA_LOG = "beta-log"


TAYLOR_TERMS = 12


def _binomial_taylor(s: complex, upsilon: complex) -> tuple[complex, ...]:
    # (s+x)^-upsilon = sum C(-upsilon, k) s^(-upsilon-k) x^k
    return tuple(
        binomial_complex(-upsilon, k) * principal_power(s, -upsilon - k)
        for k in range(TAYLOR_TERMS)
    )


def _reflected_taylor(sigma: complex, log_factor: bool) -> tuple[complex, ...]:
    # (1-x)^(sigma-1), times ln(1-x) = -sum x^j / j when log_factor
    power = np.array(
        [binomial_complex(sigma - 1, k) * (-1) ** k for k in range(TAYLOR_TERMS)]
    )
    if not log_factor:
        return tuple(complex(c) for c in power)
    log = np.array([0.0] + [-1.0 / j for j in range(1, TAYLOR_TERMS)])
    return tuple(complex(c) for c in np.convolve(power, log)[:TAYLOR_TERMS])


def family_oracle(family: FpiFamily, **params: complex) -> OracleResult:
    """Extract the finite part of one closed-form family from its definition.

    branch takes s, upsilon and lambda; pole takes s, upsilon and n; beta and
    beta-log take sigma and rho. Taylor coefficients are supplied exactly.
    """
    if family in (FpiFamily.BRANCH, FpiFamily.POLE):
        s, upsilon = complex(params["s"]), complex(params["upsilon"])
        if family is FpiFamily.BRANCH:
            lam = complex(params.get("lambda", params.get("lam")))
        else:
            lam = int(params["n"]) + 1
        problem = OracleProblem(
            integrand=lambda x: principal_power(s + x, -upsilon),
            lam=lam,
            taylor_coeffs=_binomial_taylor(s, upsilon),
            scale=abs(s),
        )
        return extract_finite_part(problem)

    sigma, rho = complex(params["sigma"]), complex(params["rho"])
    log_factor = family is FpiFamily.BETA_LOG

    def h(y: float) -> complex:
        value = principal_power(y, sigma - 1)
        return value * math.log(y) if log_factor else value

    return extract_finite_part_upper(
        h, rho, 1.0, taylor_coeffs=_reflected_taylor(sigma, log_factor)
    )
