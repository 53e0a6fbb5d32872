"""fpintegrate exceptions."""

__all__ = [
    "DegenerateParameters",
    "DomainError",
    "EvaluatorFailure",
    "FinitePartError",
    "FitIllConditioned",
    "NonConvergence",
    "PoleAtNonpositiveInteger",
    "QuadratureFailure",
    "UnsupportedCase",
    "WrongCase",
    "ZeroToNonpositivePower",
]


class FinitePartError(Exception):
    """Base exception for finite-part integration errors."""


class DomainError(FinitePartError):
    """Parameters outside the validity domain of an operation."""


class PoleAtNonpositiveInteger(DomainError):
    """Gamma or digamma evaluated at a nonpositive integer."""

    def __init__(self, z: complex, function: str = "gamma") -> None:
        self.z = z
        self.function = function
        super().__init__(f"{function} has a pole at z={z}")


class ZeroToNonpositivePower(DomainError):
    """Zero raised to a power with nonpositive real part."""

    def __init__(self, exponent: complex) -> None:
        self.exponent = exponent
        super().__init__(f"0 raised to power {exponent} is undefined")


class UnsupportedCase(DomainError):
    """No implemented case covers the given parameters."""


class WrongCase(DomainError):
    """Case-specific evaluator called with parameters of another case."""


class DegenerateParameters(DomainError):
    """A closed form has a vanishing normalising factor."""


class NonConvergence(FinitePartError):
    """Series or quadrature did not converge."""

    def __init__(
        self, message: str, terms: int | None = None, last_term: float | None = None
    ) -> None:
        self.terms = terms
        self.last_term = last_term
        super().__init__(message)


class QuadratureFailure(FinitePartError):
    """Quadrature of an oracle panel failed."""


class FitIllConditioned(FinitePartError):
    """The cutoff extrapolation fit is singular or too short."""


class EvaluatorFailure(FinitePartError):
    """One side of an identity could not be evaluated."""

    def __init__(self, side: str, cause: Exception) -> None:
        self.side = side
        self.cause = cause
        super().__init__(f"Failed to evaluate {side}: {cause}")
