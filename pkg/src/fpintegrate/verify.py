"""Numerical verification of the transformation and evaluation identities.

Every identity pairs two independent evaluations of the same quantity, for
example a canonical series against a connection formula or a quadrature
against a finite-part series. Parameters are drawn inside the identity's
domain, kept at least ``MARGIN`` away from the integer lines it excludes.
"""

import csv
import io
import json
import math
from collections.abc import Callable, Iterable, Sequence
from enum import Enum
from typing import Any, NamedTuple

import numpy as np

from .errors import DomainError, EvaluatorFailure, FinitePartError
from .fpi_closed import (
    BetaFpiSpec,
    FpiBranchSpec,
    FpiPoleSpec,
    beta_fpi,
    beta_fpi_log,
    fpi_branch_infinite,
    fpi_pole_infinite,
)
from .fpi_oracle import FpiFamily, family_oracle
from .hyp2f1 import (
    Gauss2F1Params,
    gauss_2f1_near_one,
    gauss_2f1_nu1_n,
    gauss_series,
    gauss_value,
    mainresult1_rhs,
    mainresult3_rhs,
    repcase4bx_rhs,
    resultx_rhs,
    xxx12_sum,
)
from .hyp3f2 import (
    ThreeF2Params,
    bebebe_rhs,
    bebebex_rhs,
    keyx_closed,
    keyx_fpi,
    keyx_integral,
    normalization,
    res2_rhs,
    res2x_rhs,
    threef2_iden_rhs,
    threef2_series,
    threef2_transform_general,
)
from .logging import LoggingMixin
from .special_core import gamma_product, principal_power
from .stieltjes_eval import (
    StieltjesEvaluator,
    StieltjesGaussSpec,
    convergent_head,
    stieltjes_direct,
    stieltjes_fpi_series,
)

__all__ = [
    "FPI_SPECS",
    "IDENTITIES",
    "Identity",
    "IdentityTag",
    "ParamSampler",
    "SweepReport",
    "VerificationReport",
    "Verifier",
    "closed_form",
    "encode_complex",
    "reports_to_csv",
    "reports_to_json",
    "sweep",
    "sweep_all",
    "verify_fpi_closed_vs_oracle",
    "verify_identity",
]

MARGIN = 0.05
TOL_2F1 = 1e-9
TOL_3F2 = 1e-8
TOL_QUADRATURE = 1e-7
TOL_ORACLE = 1e-5
TOL_ORACLE_LOG = 1e-4

Params = dict[str, Any]


class IdentityTag(Enum):
    """Identities the harness can check."""

    MAIN_RESULT3 = "mainresult3"
    MAIN_RESULT4X = "mainresult4x"
    MAIN_RESULT1 = "mainresult1"
    REPCASE4BX = "repcase4bx"
    REPCASE4B_SHIFT = "repcase4bshift"
    RESULTX = "resultx"
    REPCASE4D = "repcase4d"
    REPCASE4C = "repcase4c"
    KEYKEY = "keykey"
    XXX12 = "xxx12"
    IDEN3F2 = "iden3f2"
    GENERAL3F2 = "general3f2"
    RES2 = "res2"
    RES2X = "res2x"
    BEBEBE = "bebebe"
    BEBEBEX = "bebebex"
    MAIN_LEMMA = "mainlemma"
    SESE = "sese"
    REPRESENTATION1A = "representation1a"
    MAY = "may"
    CASE4B = "case4b"
    CASE4C = "case4c"
    KEYX = "keyx"
    FULLINT = "fullint"
    KEYXXX = "keyxxx"


class Identity(NamedTuple):
    """One identity: a sampler, a domain check and its two sides."""

    description: str
    sample: Callable[[np.random.Generator], Params]
    domain: Callable[[Params], object]
    lhs: Callable[[Params], complex]
    rhs: Callable[[Params], complex]
    tolerance: float


class VerificationReport(NamedTuple):
    """Both sides of one identity at one parameter set."""

    tag: Enum
    params: Params
    lhs: complex
    rhs: complex
    abs_residual: float
    rel_residual: float
    passed: bool
    error: str | None = None

    def to_record(self) -> dict[str, Any]:
        """JSON-ready mapping; complex numbers become {re, im}."""
        record = {
            "tag": self.tag.value,
            "params": {k: _encode_scalar(v) for k, v in self.params.items()},
            "lhs": encode_complex(self.lhs),
            "rhs": encode_complex(self.rhs),
            "abs_residual": _finite_or_none(self.abs_residual),
            "rel_residual": _finite_or_none(self.rel_residual),
            "pass": self.passed,
        }
        if self.error is not None:
            record["error"] = self.error
        return record


class SweepReport(NamedTuple):
    """Residual statistics of one identity over many samples."""

    tag: Enum
    count: int
    max_rel_residual: float
    median_rel_residual: float
    tolerance: float
    reports: tuple[VerificationReport, ...]

    @property
    def failures(self) -> tuple[VerificationReport, ...]:
        """Samples that failed or could not be evaluated."""
        return tuple(r for r in self.reports if not r.passed)

    def to_record(self) -> dict[str, Any]:
        """JSON-ready summary with the individual samples."""
        return {
            "tag": self.tag.value,
            "count": self.count,
            "max_rel_residual": _finite_or_none(self.max_rel_residual),
            "median_rel_residual": _finite_or_none(self.median_rel_residual),
            "tolerance": self.tolerance,
            "failures": len(self.failures),
            "samples": [r.to_record() for r in self.reports],
        }


def _finite_or_none(value: float) -> float | None:
    return value if math.isfinite(value) else None


def encode_complex(value: complex) -> dict[str, float | None]:
    """{re, im} with non-finite parts as null."""
    value = complex(value)
    return {"re": _finite_or_none(value.real), "im": _finite_or_none(value.imag)}


def _encode_scalar(value: Any) -> Any:
    if isinstance(value, complex):
        return encode_complex(value)
    return value


# ---------------------------------------------------------------- sampling


def _off_integer(
    rng: np.random.Generator, lo: float, hi: float, *shifts: float
) -> float:
    """Uniform draw from [lo, hi] with x + shift at least MARGIN from every integer."""
    shifts = shifts or (0.0,)
    while True:
        x = float(rng.uniform(lo, hi))
        if all(abs(x + s - round(x + s)) >= MARGIN for s in shifts):
            return x


def _choice(rng: np.random.Generator, values: Sequence[int]) -> int:
    return int(values[int(rng.integers(len(values)))])


def _z(rng: np.random.Generator, lo: float = 0.45, hi: float = 0.7) -> float:
    return float(rng.uniform(lo, hi))


def _sample_mainresult3(rng) -> Params:
    mu = float(rng.uniform(0.2, 1.5))
    nu = _off_integer(rng, 0.2, 1.5)
    rho = _off_integer(rng, 0.3, 2.0, 0.0, -nu, mu - nu)
    return {"mu": mu, "nu": nu, "rho": rho, "z": _z(rng, 0.3, 0.45)}


def _sample_generic_2f1(rng) -> Params:
    mu = float(rng.uniform(0.2, 1.5))
    nu = float(rng.uniform(0.2, 1.5))
    sigma = _off_integer(rng, 0.5, 3.0, -mu - nu)
    return {"mu": mu, "nu": nu, "sigma": sigma, "z": _z(rng)}


def _sample_mainresult1(rng) -> Params:
    n = _choice(rng, (1, 2, 3))
    nu = _off_integer(rng, 0.2, 2.5)
    mu = _off_integer(rng, 0.3, 1.5, -nu)
    return {"mu": mu, "nu": nu, "n": n, "z": _z(rng)}


def _sample_repcase4bx(rng) -> Params:
    n = _choice(rng, (1, 2, 3))
    rho = _off_integer(rng, 0.3, 1.5)
    mu = _off_integer(rng, 0.3, 1.5)
    return {"mu": mu, "nu": rho + n, "rho": rho, "z": _z(rng)}


def _sample_repcase4b_shift(rng) -> Params:
    n = _choice(rng, (1, 2, 3))
    mu = _off_integer(rng, 0.2, 1.5)
    nu = _off_integer(rng, n + 0.2, n + 1.5)
    return {"mu": mu, "nu": nu, "sigma": mu + nu - n, "z": _z(rng)}


def _sample_resultx(rng) -> Params:
    m = _choice(rng, (0, 1, 2))
    nu = _off_integer(rng, 0.2, 1.5)
    mu = _off_integer(rng, 0.3, 1.5)
    return {"mu": mu, "nu": nu, "rho": nu + m, "z": _z(rng)}


def _sample_repcase4d(rng) -> Params:
    m = _choice(rng, (1, 2, 3))
    mu = _off_integer(rng, 0.2, 1.5)
    nu = _off_integer(rng, 0.2, 1.5)
    return {"mu": mu, "nu": nu, "sigma": mu + nu + m, "z": _z(rng)}


def _sample_repcase4c(rng) -> Params:
    mu = _off_integer(rng, 0.2, 1.5)
    nu = _off_integer(rng, 0.2, 1.5)
    return {"mu": mu, "nu": nu, "sigma": mu + nu, "z": _z(rng)}


def _sample_keykey(rng) -> Params:
    n = _choice(rng, (1, 2, 3, 4, 5, 6))
    return {"nu": _off_integer(rng, 0.2, 2.5), "n": n, "z": _z(rng, 0.5, 0.8)}


def _sample_xxx12(rng) -> Params:
    n = _choice(rng, (1, 2, 3))
    mu = float(rng.uniform(0.2, 1.5))
    nu = _off_integer(rng, 0.2, 2.5)
    return {"mu": mu, "nu": nu, "n": n, "z": _z(rng, 0.3, 0.45)}


def _sample_threef2_generic(rng) -> Params:
    n = _choice(rng, (1, 2, 3))
    while True:
        nu = _off_integer(rng, 0.2, 2.0)
        sigma = _off_integer(rng, 0.3, 2.0, -nu)
        beta = _off_integer(rng, n - 0.7, n + 1.5, 0.0, sigma - nu)
        if beta + sigma - nu >= 0.3:
            return {"beta": beta, "nu": nu, "n": n, "sigma": sigma, "z": _z(rng)}


def _sample_threef2_pole_pos(rng) -> Params:
    n = _choice(rng, (1, 2, 3))
    m = _choice(rng, (1, 2, 3))
    while True:
        nu = _off_integer(rng, 0.2, 2.0)
        beta = _off_integer(rng, n - 0.7, n + 1.5)
        if m - n + nu >= 0.2 and beta + m - n >= 0.3:
            return {"beta": beta, "nu": nu, "n": n, "m": m, "z": _z(rng)}


def _sample_threef2_pole_neg(rng) -> Params:
    n = _choice(rng, (1, 2))
    m = _choice(rng, (0, 1, 2))
    nu = _off_integer(rng, m + n + 0.2, m + n + 1.5)
    beta = _off_integer(rng, m + n + 0.2, m + n + 1.5)
    return {"beta": beta, "nu": nu, "n": n, "m": m, "z": _z(rng)}


def _with_sigma(sampler: Callable, pole_pos: bool) -> Callable:
    """Sampler over sigma instead of the integer m."""

    def sample(rng) -> Params:
        params = sampler(rng)
        m = params.pop("m")
        if pole_pos:
            params["sigma"] = m - params["n"] + params["nu"]
        else:
            params["sigma"] = params["nu"] - m - params["n"]
        return params

    return sample


def _sample_stieltjes(kind: str) -> Callable[[np.random.Generator], Params]:
    """Real samples with 0 < b < 0.9 a for one Stieltjes case."""

    def sample(rng) -> Params:
        a = float(rng.uniform(1.0, 2.0))
        b = a * float(rng.uniform(0.05, 0.89))
        while True:
            if kind == "branch":
                nu = _off_integer(rng, 0.3, 1.8)
                rho = _off_integer(rng, 0.3, 2.5, 0.0, -nu)
                mu = float(rng.uniform(0.3, 1.8))
            elif kind == "pole_kernel":
                nu = _off_integer(rng, 0.3, 1.8)
                rho = float(_choice(rng, (1, 2, 3)))
                mu = float(rng.uniform(0.3, 1.8))
            elif kind == "pole_origin_pos":
                m = _choice(rng, (1, 2))
                rho = _off_integer(rng, 0.3, 1.5)
                nu = rho + m
                mu = float(rng.uniform(m + 0.3, m + 1.5))
            else:
                m = _choice(rng, (0, 1, 2))
                nu = _off_integer(rng, 0.3, 1.5)
                rho = nu + m
                mu = float(rng.uniform(0.3, 1.8))
            if rho + mu - nu >= 0.3:
                return {"a": a, "b": b, "mu": mu, "nu": nu, "rho": rho}

    return sample


def _sample_mainlemma(rng) -> Params:
    a = float(rng.uniform(1.0, 2.0))
    b = a * float(rng.uniform(0.4, 0.6))
    while True:
        mu = float(rng.uniform(0.3, 1.5))
        nu = float(rng.uniform(0.3, 1.5))
        rho = float(rng.uniform(0.3, 2.0))
        if rho + mu - nu >= 0.3:
            return {"a": a, "b": b, "mu": mu, "nu": nu, "rho": rho}


# ----------------------------------------------------------------- domains


def _gauss_domain(params: Params) -> Gauss2F1Params:
    return Gauss2F1Params(
        mu=params["mu"], nu=params["nu"], sigma=params["sigma"], z=params["z"]
    )


def _argument_domain(params: Params) -> Params:
    """Domain of the identities for 2F1(mu, nu; mu+rho; 1-z) and friends."""
    z = params["z"]
    if not 0 < z < 1:
        raise DomainError(f"z={z} must lie in (0, 1)")
    if "n" in params and params["n"] < 1:
        raise DomainError(f"n={params['n']} must be a positive integer")
    return params


def _threef2(params: Params) -> ThreeF2Params:
    return ThreeF2Params(**params)


def _threef2_from_m(pole_pos: bool) -> Callable[[Params], ThreeF2Params]:
    def build(params: Params) -> ThreeF2Params:
        m, n, nu = params["m"], params["n"], params["nu"]
        sigma = m - n + nu if pole_pos else nu - m - n
        return ThreeF2Params(beta=params["beta"], nu=nu, n=n, sigma=sigma, z=params["z"])

    return build


def _stieltjes(params: Params) -> StieltjesGaussSpec:
    return StieltjesGaussSpec(**params)


# ------------------------------------------------------------------- sides


def _normalized_series(p: ThreeF2Params) -> complex:
    return normalization(p) * threef2_series(p).value


def _head_by_terms(spec: StieltjesGaussSpec) -> complex:
    evaluator = StieltjesEvaluator(spec)
    terms = evaluator.fundamental_terms()
    return sum((next(terms) for _ in range(evaluator.offset)), start=0j)


def _mainlemma_rhs(params: Params) -> complex:
    spec = _stieltjes(params)
    a, b, mu, nu, rho = spec.a, spec.b, spec.mu, spec.nu, spec.rho
    return (
        gamma_product([mu + rho], [nu, mu - nu + rho])
        * principal_power(a, mu)
        * principal_power(b, rho - nu)
        * stieltjes_direct(spec)
    )


_pos = _threef2_from_m(True)
_neg = _threef2_from_m(False)

IDENTITIES: dict[IdentityTag, Identity] = {
    IdentityTag.MAIN_RESULT3: Identity(
        "2F1(mu, nu; mu+rho; 1-z) from the branch-branch Stieltjes integral",
        _sample_mainresult3,
        _argument_domain,
        lambda p: gauss_value(p["mu"], p["nu"], p["mu"] + p["rho"], 1 - p["z"]),
        lambda p: mainresult3_rhs(p["mu"], p["nu"], p["rho"], p["z"]),
        TOL_2F1,
    ),
    IdentityTag.MAIN_RESULT4X: Identity(
        "2F1(mu, nu; sigma; z) in powers of 1-z, sigma-mu-nu not an integer",
        _sample_generic_2f1,
        _gauss_domain,
        lambda p: gauss_series(_gauss_domain(p)).value,
        lambda p: gauss_2f1_near_one(_gauss_domain(p)).value,
        TOL_2F1,
    ),
    IdentityTag.MAIN_RESULT1: Identity(
        "2F1(mu, nu; mu+n; 1-z) from the pole-kernel Stieltjes integral",
        _sample_mainresult1,
        _argument_domain,
        lambda p: gauss_value(p["mu"], p["nu"], p["mu"] + p["n"], 1 - p["z"]),
        lambda p: mainresult1_rhs(p["mu"], p["nu"], p["n"], p["z"]),
        TOL_2F1,
    ),
    IdentityTag.REPCASE4BX: Identity(
        "2F1(mu, nu; mu+rho; 1-z) for nu-rho a positive integer",
        _sample_repcase4bx,
        _argument_domain,
        lambda p: gauss_value(p["mu"], p["nu"], p["mu"] + p["rho"], 1 - p["z"]),
        lambda p: repcase4bx_rhs(p["mu"], p["nu"], p["rho"], p["z"]),
        TOL_2F1,
    ),
    IdentityTag.REPCASE4B_SHIFT: Identity(
        "2F1(mu, nu; mu+nu-n; z) in powers of 1-z",
        _sample_repcase4b_shift,
        _gauss_domain,
        lambda p: gauss_series(_gauss_domain(p)).value,
        lambda p: gauss_2f1_near_one(_gauss_domain(p)).value,
        TOL_2F1,
    ),
    IdentityTag.RESULTX: Identity(
        "2F1(mu, nu; mu+rho; 1-z) for rho-nu a nonnegative integer",
        _sample_resultx,
        _argument_domain,
        lambda p: gauss_value(p["mu"], p["nu"], p["mu"] + p["rho"], 1 - p["z"]),
        lambda p: resultx_rhs(p["mu"], p["nu"], p["rho"], p["z"]),
        TOL_2F1,
    ),
    IdentityTag.REPCASE4D: Identity(
        "2F1(mu, nu; mu+nu+m; z) in powers of 1-z",
        _sample_repcase4d,
        _gauss_domain,
        lambda p: gauss_series(_gauss_domain(p)).value,
        lambda p: gauss_2f1_near_one(_gauss_domain(p)).value,
        TOL_2F1,
    ),
    IdentityTag.REPCASE4C: Identity(
        "2F1(mu, nu; mu+nu; z) in powers of 1-z",
        _sample_repcase4c,
        _gauss_domain,
        lambda p: gauss_series(_gauss_domain(p)).value,
        lambda p: gauss_2f1_near_one(_gauss_domain(p)).value,
        TOL_2F1,
    ),
    IdentityTag.KEYKEY: Identity(
        "closed form of 2F1(nu, 1; n; z)",
        _sample_keykey,
        _argument_domain,
        lambda p: gauss_value(p["nu"], 1, p["n"], p["z"]),
        lambda p: gauss_2f1_nu1_n(p["nu"], p["n"], p["z"]),
        1e-10,
    ),
    IdentityTag.XXX12: Identity(
        "Gamma(nu)/Gamma(nu-n+1) 2F1(mu, nu; nu-n+1; z) as a finite sum",
        _sample_xxx12,
        _argument_domain,
        lambda p: gamma_product([p["nu"]], [p["nu"] - p["n"] + 1])
        * gauss_value(p["mu"], p["nu"], p["nu"] - p["n"] + 1, p["z"]),
        lambda p: xxx12_sum(p["mu"], p["nu"], p["n"], p["z"]),
        TOL_2F1,
    ),
    IdentityTag.IDEN3F2: Identity(
        "normalised 3F2 from the two 2F1 pieces, tail in powers of z",
        _sample_threef2_generic,
        _threef2,
        lambda p: _normalized_series(_threef2(p)),
        lambda p: threef2_iden_rhs(_threef2(p)),
        TOL_3F2,
    ),
    IdentityTag.GENERAL3F2: Identity(
        "3F2(beta, nu, 1; beta+sigma, n; z) in powers of 1-z, sigma-nu not an integer",
        _sample_threef2_generic,
        _threef2,
        lambda p: threef2_series(_threef2(p)).value,
        lambda p: threef2_transform_general(_threef2(p)).value,
        TOL_3F2,
    ),
    IdentityTag.RES2: Identity(
        "normalised 3F2 for n+sigma-nu a positive integer",
        _with_sigma(_sample_threef2_pole_pos, pole_pos=True),
        _threef2,
        lambda p: _normalized_series(_threef2(p)),
        lambda p: res2_rhs(_threef2(p)),
        TOL_3F2,
    ),
    IdentityTag.RES2X: Identity(
        "normalised 3F2 with sigma = m-n+nu eliminated",
        _sample_threef2_pole_pos,
        _pos,
        lambda p: _normalized_series(_pos(p)),
        lambda p: res2x_rhs(**p),
        TOL_3F2,
    ),
    IdentityTag.BEBEBE: Identity(
        "normalised 3F2 for nu-sigma-n a nonnegative integer",
        _with_sigma(_sample_threef2_pole_neg, pole_pos=False),
        _threef2,
        lambda p: _normalized_series(_threef2(p)),
        lambda p: bebebe_rhs(_threef2(p)),
        TOL_3F2,
    ),
    IdentityTag.BEBEBEX: Identity(
        "normalised 3F2 with sigma = nu-m-n eliminated",
        _sample_threef2_pole_neg,
        _neg,
        lambda p: _normalized_series(_neg(p)),
        lambda p: bebebex_rhs(**p),
        TOL_3F2,
    ),
    IdentityTag.MAIN_LEMMA: Identity(
        "2F1(mu, nu; mu+rho; 1-b/a) as a gamma-weighted Stieltjes integral",
        _sample_mainlemma,
        _stieltjes,
        lambda p: gauss_value(
            p["mu"], p["nu"], p["mu"] + p["rho"], 1 - p["b"] / p["a"]
        ),
        _mainlemma_rhs,
        TOL_3F2,
    ),
    IdentityTag.SESE: Identity(
        "Stieltjes integral, branch point at -b",
        _sample_stieltjes("branch"),
        _stieltjes,
        lambda p: stieltjes_direct(_stieltjes(p)),
        lambda p: stieltjes_fpi_series(_stieltjes(p)).value,
        TOL_QUADRATURE,
    ),
    IdentityTag.REPRESENTATION1A: Identity(
        "Stieltjes integral, pole kernel rho = n",
        _sample_stieltjes("pole_kernel"),
        _stieltjes,
        lambda p: stieltjes_direct(_stieltjes(p)),
        lambda p: stieltjes_fpi_series(_stieltjes(p)).value,
        TOL_QUADRATURE,
    ),
    IdentityTag.MAY: Identity(
        "Stieltjes integral, nu-rho a positive integer",
        _sample_stieltjes("pole_origin_pos"),
        _stieltjes,
        lambda p: stieltjes_direct(_stieltjes(p)),
        lambda p: stieltjes_fpi_series(_stieltjes(p)).value,
        TOL_QUADRATURE,
    ),
    IdentityTag.CASE4B: Identity(
        "convergent leading terms for nu-rho a positive integer",
        _sample_stieltjes("pole_origin_pos"),
        _stieltjes,
        lambda p: _head_by_terms(_stieltjes(p)),
        lambda p: convergent_head(_stieltjes(p)),
        TOL_2F1,
    ),
    IdentityTag.CASE4C: Identity(
        "Stieltjes integral, rho-nu a nonnegative integer",
        _sample_stieltjes("pole_origin_neg"),
        _stieltjes,
        lambda p: stieltjes_direct(_stieltjes(p)),
        lambda p: stieltjes_fpi_series(_stieltjes(p)).value,
        TOL_QUADRATURE,
    ),
    IdentityTag.KEYX: Identity(
        "the 3F2 Stieltjes integral from two 2F1 pieces",
        _sample_threef2_generic,
        _threef2,
        lambda p: keyx_integral(_threef2(p)),
        lambda p: keyx_closed(_threef2(p)).value,
        TOL_3F2,
    ),
    IdentityTag.FULLINT: Identity(
        "the 3F2 Stieltjes integral by finite parts, sigma-nu an integer",
        _with_sigma(_sample_threef2_pole_pos, pole_pos=True),
        _threef2,
        lambda p: keyx_integral(_threef2(p)),
        lambda p: keyx_fpi(_threef2(p)).value,
        TOL_QUADRATURE,
    ),
    IdentityTag.KEYXXX: Identity(
        "the 3F2 Stieltjes integral for nu-sigma-n a nonnegative integer",
        _with_sigma(_sample_threef2_pole_neg, pole_pos=False),
        _threef2,
        lambda p: keyx_integral(_threef2(p)),
        lambda p: keyx_closed(_threef2(p)).value,
        TOL_3F2,
    ),
}


class ParamSampler:
    """Deterministic parameter draws per identity.

    Each tag gets its own generator seeded from (seed, tag position), so the
    samples of one tag do not depend on which other tags are swept.
    """

    def __init__(self, seed: int = 42) -> None:
        if not 0 <= seed < 2**64:
            raise DomainError(f"seed {seed} does not fit in 64 bits")
        self.seed = seed

    def draw(self, tag: IdentityTag, count: int) -> list[Params]:
        """``count`` parameter sets inside the tag's domain."""
        index = list(IdentityTag).index(tag)
        rng = np.random.default_rng([self.seed, index])
        return [IDENTITIES[tag].sample(rng) for _ in range(count)]


# -------------------------------------------------------------- evaluation


def _evaluate(side: str, func: Callable[[Params], complex], params: Params) -> complex:
    try:
        return complex(func(params))
    except (FinitePartError, ArithmeticError, ValueError) as exc:
        raise EvaluatorFailure(side, exc) from exc


def _report(
    tag: Enum, params: Params, lhs: complex, rhs: complex, tolerance: float
) -> VerificationReport:
    abs_residual = abs(lhs - rhs)
    rel_residual = abs_residual / max(abs(lhs), abs(rhs), 1e-300)
    return VerificationReport(
        tag, params, lhs, rhs, abs_residual, rel_residual, rel_residual <= tolerance
    )


def _failed(tag: Enum, params: Params, exc: Exception) -> VerificationReport:
    nan = complex(math.nan, math.nan)
    return VerificationReport(tag, params, nan, nan, math.inf, math.inf, False, str(exc))


def verify_identity(
    tag: IdentityTag, params: Params, tol: float | None = None
) -> VerificationReport:
    """Evaluate both sides of an identity at one parameter set."""
    identity = IDENTITIES[tag]
    identity.domain(params)
    lhs = _evaluate("lhs", identity.lhs, params)
    rhs = _evaluate("rhs", identity.rhs, params)
    return _report(tag, params, lhs, rhs, identity.tolerance if tol is None else tol)


def _summarize(
    tag: Enum, reports: Sequence[VerificationReport], tolerance: float
) -> SweepReport:
    residuals = np.array([r.rel_residual for r in reports], dtype=float)
    finite = residuals[np.isfinite(residuals)]
    if len(finite) < len(residuals):
        max_rel = math.inf
    else:
        max_rel = float(np.max(finite)) if len(finite) else 0.0
    median_rel = float(np.median(residuals)) if len(residuals) else 0.0
    return SweepReport(tag, len(reports), max_rel, median_rel, tolerance, tuple(reports))


class Verifier(LoggingMixin):
    """Sweeps identities over seeded samples."""

    def __init__(self, sampler: ParamSampler | None = None, tol: float | None = None):
        self.sampler = sampler or ParamSampler()
        self.tol = tol

    def tolerance(self, tag: IdentityTag) -> float:
        """Tolerance applied to a tag."""
        return IDENTITIES[tag].tolerance if self.tol is None else self.tol

    def verify(self, tag: IdentityTag, params: Params) -> VerificationReport:
        """One sample; failures to evaluate are recorded in the report."""
        try:
            report = verify_identity(tag, params, self.tolerance(tag))
        except (EvaluatorFailure, DomainError) as exc:
            self.log_warning("%s failed at %s: %s", tag.value, params, exc)
            return _failed(tag, params, exc)
        if not report.passed:
            self.log_warning(
                "%s residual %.2e exceeds %.0e at %s",
                tag.value, report.rel_residual, self.tolerance(tag), params,
            )
        return report

    def sweep(self, tag: IdentityTag, count: int) -> SweepReport:
        """``count`` samples of one identity, in sample order."""
        if count < 1:
            raise DomainError(f"count must be positive, got {count}")
        self.log_debug_section("Sweeping %s (%d samples)", tag.value, count)
        reports = [self.verify(tag, params) for params in self.sampler.draw(tag, count)]
        summary = _summarize(tag, reports, self.tolerance(tag))
        self.log_debug(
            "%s: max %.2e, median %.2e, %d failures",
            tag.value, summary.max_rel_residual, summary.median_rel_residual,
            len(summary.failures),
        )
        return summary

    def sweep_all(
        self, count: int, tags: Iterable[IdentityTag] | None = None
    ) -> list[SweepReport]:
        """Sweep every identity (or the given ones) in declaration order."""
        return [self.sweep(tag, count) for tag in (tags or IdentityTag)]


def sweep(
    tag: IdentityTag, sampler: ParamSampler, count: int, tol: float | None = None
) -> SweepReport:
    """Residual statistics of one identity over ``count`` seeded samples."""
    return Verifier(sampler, tol).sweep(tag, count)


def sweep_all(
    sampler: ParamSampler,
    count: int,
    tags: Iterable[IdentityTag] | None = None,
    tol: float | None = None,
) -> list[SweepReport]:
    """Sweeps of every identity, or of the given ones."""
    return Verifier(sampler, tol).sweep_all(count, tags)


# ------------------------------------------------------- closed vs oracle

DEFAULT_GRIDS: dict[FpiFamily, list[Params]] = {
    FpiFamily.BRANCH: [
        {"s": s, "upsilon": upsilon, "lambda": lam}
        for s in (1.0, 2.0)
        for upsilon in (1.0, 1.5)
        for lam in (0.6, 1.3, 1.7, 2.2, 2.4)
    ],
    FpiFamily.POLE: [
        {"s": s, "upsilon": upsilon, "n": n}
        for s in (0.5, 1.0, 2.0, 3.0, 4.0)
        for upsilon in (0.5, 1.5)
        for n in (0, 1)
    ],
    FpiFamily.BETA: [
        {"sigma": sigma, "rho": rho}
        for sigma in (0.7, 1.5)
        for rho in (0.4, 1.3, 1.6, 2.2, 2.4)
    ],
    FpiFamily.BETA_LOG: [
        {"sigma": sigma, "rho": rho}
        for sigma in (0.7, 1.5)
        for rho in (0.4, 1.3, 1.6, 2.2, 2.4)
    ],
}


FPI_SPECS = {
    FpiFamily.BRANCH: FpiBranchSpec,
    FpiFamily.POLE: FpiPoleSpec,
    FpiFamily.BETA: BetaFpiSpec,
    FpiFamily.BETA_LOG: BetaFpiSpec,
}
_CLOSED_FORMS = {
    FpiFamily.BRANCH: fpi_branch_infinite,
    FpiFamily.POLE: fpi_pole_infinite,
    FpiFamily.BETA: beta_fpi,
    FpiFamily.BETA_LOG: beta_fpi_log,
}


def closed_form(family: FpiFamily, params: Params) -> complex:
    """Closed-form value of one finite-part family."""
    return _CLOSED_FORMS[family](FPI_SPECS[family](**params))


def verify_fpi_closed_vs_oracle(
    family: FpiFamily, grid: Sequence[Params] | None = None, tol: float | None = None
) -> SweepReport:
    """Compare a closed-form family with the eps-extraction oracle on a grid."""
    grid = DEFAULT_GRIDS[family] if grid is None else grid
    if tol is None:
        tol = TOL_ORACLE_LOG if family is FpiFamily.BETA_LOG else TOL_ORACLE
    reports = []
    for params in grid:
        try:
            lhs = _evaluate("closed form", lambda p: closed_form(family, p), params)
            rhs = _evaluate(
                "oracle", lambda p: family_oracle(family, **p).finite_part, params
            )
        except (EvaluatorFailure, DomainError) as exc:
            reports.append(_failed(family, params, exc))
            continue
        reports.append(_report(family, params, lhs, rhs, tol))
    return _summarize(family, reports, tol)


# ----------------------------------------------------------- serialisation


def reports_to_json(reports: Sequence[SweepReport]) -> str:
    """Sweep reports as a JSON document with stable key order."""
    return json.dumps([r.to_record() for r in reports], indent=2)


def reports_to_csv(reports: Sequence[SweepReport]) -> str:
    """One CSV row per sample, parameters flattened into columns."""
    rows = []
    param_names: list[str] = []
    for sweep_report in reports:
        for report in sweep_report.reports:
            for name in report.params:
                if name not in param_names:
                    param_names.append(name)
            rows.append(report)
    fields = ["tag", *param_names, "lhs_re", "lhs_im", "rhs_re", "rhs_im",
              "abs_residual", "rel_residual", "pass", "error"]
    stream = io.StringIO()
    writer = csv.DictWriter(stream, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    for report in rows:
        row = {"tag": report.tag.value, **report.params}
        row.update(
            lhs_re=report.lhs.real, lhs_im=report.lhs.imag,
            rhs_re=report.rhs.real, rhs_im=report.rhs.imag,
            abs_residual=report.abs_residual, rel_residual=report.rel_residual,
            error=report.error or "",
        )
        row["pass"] = report.passed
        writer.writerow(row)
    return stream.getvalue()
