"""Complex special-function primitives.

Gamma uses a Lanczos approximation (g=7, nine coefficients) on the right
half-plane and the reflection formula on the left; digamma shifts the argument
past Re z = 10 and sums the asymptotic Bernoulli series. All powers and
logarithms take principal values with the argument in (-pi, pi].
"""

import cmath
import math
from collections.abc import Iterable

from .config import get_settings
from .errors import PoleAtNonpositiveInteger, ZeroToNonpositivePower

__all__ = [
    "ComplexScalar",
    "binomial_complex",
    "cos_pi",
    "digamma",
    "digamma_over_gamma_limit",
    "gamma",
    "gamma_product",
    "is_integer",
    "log_gamma",
    "near_integer",
    "nearest_integer",
    "pochhammer",
    "principal_log",
    "principal_power",
    "reciprocal_gamma",
    "sin_pi",
]

ComplexScalar = complex

_LANCZOS_G = 7
_LANCZOS_COEFFS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_TWO_PI = 0.5 * math.log(2.0 * math.pi)
_LOG_PI = math.log(math.pi)

# B_2k / (2k) for the digamma asymptotic series
_DIGAMMA_ASYMPTOTIC = (
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
)
_DIGAMMA_SHIFT = 10.0


def nearest_integer(z: ComplexScalar, tol: float | None = None) -> int | None:
    """Return the integer n with |z - n| <= tol, or None."""
    tol = get_settings().integer_tol if tol is None else tol
    z = complex(z)
    n = round(z.real)
    if abs(z - n) <= tol:
        return int(n)
    return None


def is_integer(z: ComplexScalar, tol: float | None = None) -> bool:
    """Whether z counts as an integer under the detection tolerance."""
    return nearest_integer(z, tol) is not None


def near_integer(z: ComplexScalar) -> bool:
    """Whether z is not an integer but close enough to one to be ill-conditioned."""
    settings = get_settings()
    z = complex(z)
    distance = abs(z - round(z.real))
    return settings.integer_tol < distance <= settings.near_integer_warn


def _is_pole(z: complex) -> bool:
    n = nearest_integer(z)
    return n is not None and n <= 0


def principal_log(z: ComplexScalar) -> complex:
    """Principal logarithm; a negative real axis maps to arg = +pi."""
    z = complex(z)
    # -0.0 imaginary parts would select arg = -pi
    return cmath.log(complex(z.real, z.imag + 0.0))


def principal_power(base: ComplexScalar, exponent: ComplexScalar) -> complex:
    """Return exp(exponent * Log(base)) with the principal logarithm."""
    base = complex(base)
    exponent = complex(exponent)
    if base == 0:
        if exponent.real > 0:
            return 0j
        raise ZeroToNonpositivePower(exponent)
    if exponent == 0:
        return 1 + 0j
    if base.imag == 0.0 and base.real > 0 and exponent.imag == 0.0:
        return complex(base.real**exponent.real)
    return cmath.exp(exponent * principal_log(base))


def sin_pi(z: ComplexScalar) -> complex:
    """sin(pi z) with argument reduction; exactly zero at detected integers."""
    z = complex(z)
    if nearest_integer(z) is not None:
        return 0j
    sin_x, cos_x = _sin_cos_pi_real(z.real)
    y = math.pi * z.imag
    return complex(sin_x * math.cosh(y), cos_x * math.sinh(y))


def cos_pi(z: ComplexScalar) -> complex:
    """cos(pi z) with argument reduction."""
    z = complex(z)
    sin_x, cos_x = _sin_cos_pi_real(z.real)
    y = math.pi * z.imag
    return complex(cos_x * math.cosh(y), -sin_x * math.sinh(y))


def _sin_cos_pi_real(x: float) -> tuple[float, float]:
    """Return (sin(pi x), cos(pi x)) after reducing x to [-1/4, 1/4]."""
    half_turns = round(2.0 * x)
    r = math.pi * (x - 0.5 * half_turns)
    s, c = math.sin(r), math.cos(r)
    quadrant = half_turns % 4
    if quadrant == 0:
        return s, c
    if quadrant == 1:
        return c, -s
    if quadrant == 2:
        return -s, -c
    return -c, s


def log_gamma(z: ComplexScalar) -> complex:
    """Logarithm of the gamma function.

    The principal branch: analytic off the negative real axis and real on the
    positive one. Left of Re z = 1/2 the reflection formula carries a
    2*pi*i*floor(Re z / 2 + 1/4) correction that keeps the branch continuous.
    On the negative real axis itself the imaginary part is an odd multiple of pi.
    """
    z = complex(z)
    if _is_pole(z):
        raise PoleAtNonpositiveInteger(z, "log_gamma")
    if z.real < 0.5:
        turns = math.floor(0.5 * z.real + 0.25)
        shift = complex(_LOG_PI, math.copysign(2.0 * math.pi, z.imag) * turns)
        return shift - principal_log(sin_pi(z)) - log_gamma(1.0 - z)
    z -= 1.0
    series = _LANCZOS_COEFFS[0]
    for i, coeff in enumerate(_LANCZOS_COEFFS[1:], start=1):
        series += coeff / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_TWO_PI + (z + 0.5) * principal_log(t) - t + principal_log(series)


def gamma(z: ComplexScalar) -> complex:
    """Gamma function."""
    z = complex(z)
    n = nearest_integer(z)
    if n is not None and 0 < n <= 20:
        return complex(math.factorial(n - 1))
    return cmath.exp(log_gamma(z))


def reciprocal_gamma(z: ComplexScalar) -> complex:
    """1/Gamma(z), exactly zero at the nonpositive integers."""
    z = complex(z)
    if _is_pole(z):
        return 0j
    return cmath.exp(-log_gamma(z))


def gamma_product(
    numer: Iterable[ComplexScalar], denom: Iterable[ComplexScalar] = ()
) -> complex:
    """Return prod Gamma(numer) / prod Gamma(denom), accumulated in log space.

    A pole in the denominator makes the product vanish; a pole in the
    numerator raises.
    """
    total = 0j
    for z in denom:
        if _is_pole(complex(z)):
            return 0j
        total -= log_gamma(z)
    for z in numer:
        total += log_gamma(z)
    return cmath.exp(total)


def digamma(z: ComplexScalar) -> complex:
    """Digamma function psi(z)."""
    z = complex(z)
    if _is_pole(z):
        raise PoleAtNonpositiveInteger(z, "digamma")
    if z.real < 0.5:
        # psi(z) = psi(1 - z) - pi cot(pi z)
        return digamma(1.0 - z) - math.pi * cos_pi(z) / sin_pi(z)
    result = 0j
    while z.real < _DIGAMMA_SHIFT:
        result -= 1.0 / z
        z += 1.0
    inv2 = 1.0 / (z * z)
    power = inv2
    series = 0j
    for coeff in _DIGAMMA_ASYMPTOTIC:
        series += coeff * power
        power *= inv2
    return result + principal_log(z) - 0.5 / z - series


def digamma_over_gamma_limit(n: int) -> float:
    """Limit of psi(z)/Gamma(z) as z -> -n."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return float((-1) ** (n + 1) * math.factorial(n))


def pochhammer(a: ComplexScalar, k: int) -> complex:
    """Rising factorial (a)_k as a product."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    a = complex(a)
    result = 1 + 0j
    for j in range(k):
        result *= a + j
    return result


def binomial_complex(alpha: ComplexScalar, k: int) -> complex:
    """Generalised binomial coefficient C(alpha, k)."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    alpha = complex(alpha)
    result = 1 + 0j
    for j in range(k):
        result *= (alpha - j) / (j + 1)
    return result
