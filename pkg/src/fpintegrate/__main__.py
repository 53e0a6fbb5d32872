"""Main entry point for fpintegrate (CLI)."""

import csv
import io
import json
import logging
import sys
from collections.abc import Iterator
from contextlib import contextmanager
from pathlib import Path
from typing import Any

import rich_click as click
from pydantic import ValidationError

from fpintegrate import __version__
from fpintegrate.config import MAX_TERMS_ENV, use_settings
from fpintegrate.config.cli import CliConfig, OutputFormat
from fpintegrate.console import HELP_CONFIG, build_sweep_panel, stderr_console
from fpintegrate.errors import DomainError, FinitePartError, UnsupportedCase
from fpintegrate.fpi_oracle import FpiFamily, family_oracle
from fpintegrate.hyp2f1 import Gauss2F1Params, gauss_2f1_near_one, gauss_series
from fpintegrate.hyp3f2 import (
    ThreeF2Params,
    threef2_fpi,
    threef2_integral_direct,
    threef2_series,
    threef2_transform,
)
from fpintegrate.logging import setup_logging
from fpintegrate.params import parse_complex
from fpintegrate.series import SeriesResult
from fpintegrate.stieltjes_eval import (
    StieltjesGaussSpec,
    classify_case,
    gauss_as_stieltjes,
    stieltjes_direct,
    stieltjes_fpi_series,
)
from fpintegrate.verify import (
    FPI_SPECS,
    IDENTITIES,
    IdentityTag,
    ParamSampler,
    Verifier,
    closed_form,
    encode_complex,
    reports_to_csv,
    reports_to_json,
    verify_fpi_closed_vs_oracle,
)

# Named explicitly: under "python -m" __name__ is "__main__"
logger = logging.getLogger("fpintegrate.__main__")


class ComplexParamType(click.ParamType):
    """Complex number given as '1.5', '2i' or '1.5-0.5i'."""

    name = "complex"

    def convert(self, value: Any, param, ctx) -> complex:
        if isinstance(value, complex):
            return value
        try:
            return parse_complex(str(value))
        except ValueError as exc:
            self.fail(str(exc), param, ctx)


COMPLEX = ComplexParamType()
METHODS = ["series", "transform", "integral", "fpi"]


def _encode(value: Any) -> Any:
    if isinstance(value, complex):
        return encode_complex(value)
    if isinstance(value, dict):
        return {k: _encode(v) for k, v in value.items()}
    return value


def _flatten(record: dict[str, Any], prefix: str = "") -> dict[str, Any]:
    """One level per key; {re, im} pairs become key_re and key_im."""
    flat: dict[str, Any] = {}
    for key, value in record.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            flat.update(_flatten(value, f"{name}_"))
        elif isinstance(value, list | tuple):
            flat[name] = "; ".join(str(v) for v in value)
        else:
            flat[name] = value
    return flat


def _emit(config: CliConfig, record: dict[str, Any]) -> None:
    """Write one evaluation record to stdout in the chosen format."""
    record = _encode(record)
    if config.output_format is OutputFormat.JSON:
        click.echo(json.dumps(record, indent=2))
        return
    row = _flatten(record)
    stream = io.StringIO()
    writer = csv.DictWriter(stream, fieldnames=list(row), lineterminator="\n")
    writer.writeheader()
    writer.writerow(row)
    click.echo(stream.getvalue(), nl=False)


def _series_record(result: SeriesResult) -> dict[str, Any]:
    return {
        "value": result.value,
        "terms_used": result.terms_used,
        "tail_estimate": result.tail_estimate,
        "status": result.status.value,
        "warnings": list(result.warnings),
    }


@contextmanager
def _reporting(config: CliConfig) -> Iterator[None]:
    """Apply the numeric settings and map package errors to exit codes."""
    try:
        with use_settings(**config.numeric_settings().model_dump()):
            yield
    except DomainError as exc:
        logger.error("❌ %s", str(exc))
        sys.exit(2)
    except FinitePartError as exc:
        logger.error("❌ %s", str(exc))
        sys.exit(1)
    except ArithmeticError as exc:
        # overflow or a zero division that escaped the domain checks
        logger.error("❌ %s: %s", type(exc).__name__, str(exc))
        sys.exit(1)


@click.group()
@click.version_option(version=__version__, prog_name="fpintegrate")
@click.option("-q", "--quiet", is_flag=True, help="Show errors only.")
@click.option("-v", "--verbose", is_flag=True, help="Show debug information.")
@click.option(
    "-t",
    "--trace",
    is_flag=True,
    help="Show trace information (maximum details).",
)
@click.option("--tol", type=float, help="Relative tolerance of identity checks.")
@click.option(
    "--max-terms",
    type=int,
    envvar=MAX_TERMS_ENV,
    help="Maximum number of series terms.",
)
@click.option("--seed", type=int, help="Seed of the parameter sampler.")
@click.option(
    "--output",
    type=click.Choice([f.value for f in OutputFormat]),
    help="Report format on stdout.",
)
@click.option("--int-tol", type=float, help="Integer-detection tolerance.")
@click.option(
    "--config",
    "config_file",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    help="YAML file with defaults for these options.",
)
@click.rich_config(help_config=HELP_CONFIG)
@click.pass_context
# pylint: disable=too-many-arguments,too-many-positional-arguments
def cli(
    ctx: click.Context,
    quiet: bool,
    verbose: bool,
    trace: bool,
    tol: float | None,
    max_terms: int | None,
    seed: int | None,
    output: str | None,
    int_tol: float | None,
    config_file: Path | None,
) -> None:
    """Finite-part integration of Stieltjes transforms and hypergeometric identities.

    Reports go to stdout, diagnostics to stderr.
    """
    setup_logging(quiet=quiet, trace=trace, verbose=verbose)
    options = {
        "tolerance": tol,
        "max_terms": max_terms,
        "seed": seed,
        "output_format": output,
        "integer_detection_tol": int_tol,
        "config_file": config_file,
    }
    try:
        ctx.obj = CliConfig(**{k: v for k, v in options.items() if v is not None})
    except (ValidationError, OSError) as exc:
        logger.error("❌ %s", str(exc))
        sys.exit(2)
    ctx.meta["fpintegrate.quiet"] = quiet
    logger.debug("Configuration:\n%s", ctx.obj.readable())


# ------------------------------------------------------------------ fpi


@cli.group()
def fpi() -> None:
    """Fundamental and beta-type finite-part integrals."""


def _fpi_command(config: CliConfig, family: FpiFamily, params: dict, method: str):
    with _reporting(config):
        FPI_SPECS[family](**params)
        if method == "oracle":
            result = family_oracle(family, **params)
            value, error = result.finite_part, result.error_estimate
        else:
            value, error = closed_form(family, params), None
        record = {
            "family": family.value,
            "params": params,
            "method": method,
            "value": complex(value),
            "error_estimate": error,
        }
        if getattr(value, "warnings", ()):
            record["warnings"] = list(value.warnings)
        _emit(config, record)


_method_option = click.option(
    "--method",
    type=click.Choice(["closed", "oracle"]),
    default="closed",
    show_default=True,
    help="Closed form or extraction from the definition.",
)


@fpi.command()
@click.option("--s", "s", type=COMPLEX, required=True, help="Kernel shift, |arg s| < pi.")
@click.option("--upsilon", type=COMPLEX, required=True, help="Kernel exponent.")
@click.option("--lambda", "lam", type=COMPLEX, required=True, help="Origin exponent.")
@_method_option
@click.pass_obj
def branch(config: CliConfig, s: complex, upsilon: complex, lam: complex, method: str):
    """FP int_0^inf (s+x)^-upsilon x^-lambda dx."""
    params = {"s": s, "upsilon": upsilon, "lambda": lam}
    _fpi_command(config, FpiFamily.BRANCH, params, method)


@fpi.command()
@click.option("--s", "s", type=COMPLEX, required=True, help="Kernel shift, |arg s| < pi.")
@click.option("--upsilon", type=COMPLEX, required=True, help="Kernel exponent.")
@click.option("--n", "n", type=click.IntRange(min=0), required=True, help="Pole order - 1.")
@_method_option
@click.pass_obj
def pole(config: CliConfig, s: complex, upsilon: complex, n: int, method: str):
    """FP int_0^inf (s+x)^-upsilon x^-(n+1) dx."""
    _fpi_command(config, FpiFamily.POLE, {"s": s, "upsilon": upsilon, "n": n}, method)


@fpi.command()
@click.option("--sigma", type=COMPLEX, required=True, help="Exponent at 0 (plus one).")
@click.option("--rho", type=COMPLEX, required=True, help="Exponent at 1.")
@_method_option
@click.pass_obj
def beta(config: CliConfig, sigma: complex, rho: complex, method: str):
    """FP int_0^1 y^(sigma-1) (1-y)^-rho dy."""
    _fpi_command(config, FpiFamily.BETA, {"sigma": sigma, "rho": rho}, method)


@fpi.command("beta-log")
@click.option("--sigma", type=COMPLEX, required=True, help="Exponent at 0 (plus one).")
@click.option("--rho", type=COMPLEX, required=True, help="Exponent at 1.")
@_method_option
@click.pass_obj
def beta_log(config: CliConfig, sigma: complex, rho: complex, method: str):
    """FP int_0^1 y^(sigma-1) (1-y)^-rho ln(y) dy."""
    _fpi_command(config, FpiFamily.BETA_LOG, {"sigma": sigma, "rho": rho}, method)


@fpi.command()
@click.option(
    "--family",
    type=click.Choice([f.value for f in FpiFamily]),
    required=True,
    help="Which finite-part family to extract.",
)
@click.option("--s", "s", type=COMPLEX)
@click.option("--upsilon", type=COMPLEX)
@click.option("--lambda", "lam", type=COMPLEX)
@click.option("--n", "n", type=click.IntRange(min=0))
@click.option("--sigma", type=COMPLEX)
@click.option("--rho", type=COMPLEX)
@click.pass_obj
# pylint: disable=too-many-arguments,too-many-positional-arguments
def oracle(config: CliConfig, family: str, s, upsilon, lam, n, sigma, rho):
    """Extract a finite part from its definition by cutoff extrapolation."""
    given = {"s": s, "upsilon": upsilon, "lambda": lam, "n": n, "sigma": sigma, "rho": rho}
    params = {k: v for k, v in given.items() if v is not None}
    _fpi_command(config, FpiFamily(family), params, "oracle")


# ------------------------------------------------------------ stieltjes


@cli.command()
@click.option("--a", "a", type=COMPLEX, required=True, help="Outer shift.")
@click.option("--b", "b", type=COMPLEX, required=True, help="Kernel shift, |b| < |a|.")
@click.option("--mu", type=COMPLEX, required=True)
@click.option("--nu", type=COMPLEX, required=True)
@click.option("--rho", type=COMPLEX, required=True, help="Kernel exponent.")
@click.pass_obj
# pylint: disable=too-many-arguments,too-many-positional-arguments
def stieltjes(config: CliConfig, a, b, mu, nu, rho) -> None:
    """int_0^inf x^(nu-1) (a+x)^-mu (b+x)^-rho dx by quadrature and finite parts."""
    with _reporting(config):
        spec = StieltjesGaussSpec(a=a, b=b, mu=mu, nu=nu, rho=rho)
        try:
            series = stieltjes_fpi_series(spec)
            case = classify_case(spec).value
        except UnsupportedCase as exc:
            logger.warning("Finite-part series unavailable: %s", exc)
            series, case = None, None
        try:
            direct = stieltjes_direct(spec)
        except DomainError as exc:
            if series is None:
                raise
            logger.info("Quadrature skipped: %s", exc)
            direct = None
        record: dict[str, Any] = {"case": case, "params": spec.as_dict()}
        record["direct"] = direct
        record["series"] = None if series is None else series.value
        if series is not None and direct is not None:
            residual = abs(series.value - direct)
            record["abs_residual"] = residual
            record["rel_residual"] = residual / max(
                abs(series.value), abs(direct), 1e-300
            )
        if series is not None:
            record["terms_used"] = series.terms_used
            record["warnings"] = list(series.warnings)
        _emit(config, record)


# ------------------------------------------------------------------ hyp


@cli.group()
def hyp() -> None:
    """Hypergeometric functions by series, transformation or integral."""


_hyp_method = click.option(
    "--method",
    type=click.Choice(METHODS),
    default="series",
    show_default=True,
    help="Evaluation path.",
)


@hyp.command("2f1")
@click.argument("mu", type=COMPLEX)
@click.argument("nu", type=COMPLEX)
@click.argument("sigma", type=COMPLEX)
@click.argument("z", type=COMPLEX)
@_hyp_method
@click.pass_obj
# pylint: disable=too-many-arguments,too-many-positional-arguments
def hyp_2f1(config: CliConfig, mu, nu, sigma, z, method: str) -> None:
    """2F1(MU, NU; SIGMA; Z).

    integral and fpi evaluate it as a Stieltjes integral with a = 1, b = 1-Z.
    """
    with _reporting(config):
        p = Gauss2F1Params(mu=mu, nu=nu, sigma=sigma, z=z)
        record: dict[str, Any] = {"function": "2F1", "params": p.as_dict()}
        record["method"] = method
        if method == "series":
            record.update(_series_record(gauss_series(p)))
        elif method == "transform":
            record.update(_series_record(gauss_2f1_near_one(p)))
        else:
            factor, spec = gauss_as_stieltjes(mu, nu, sigma, z)
            if method == "integral":
                record["value"] = factor * stieltjes_direct(spec)
            else:
                record.update(
                    _series_record(stieltjes_fpi_series(spec).scaled(factor))
                )
        _emit(config, record)


@hyp.command("3f2")
@click.argument("beta", type=COMPLEX)
@click.argument("nu", type=COMPLEX)
@click.argument("n", type=click.IntRange(min=1))
@click.argument("sigma", type=COMPLEX)
@click.argument("z", type=COMPLEX)
@_hyp_method
@click.pass_obj
# pylint: disable=too-many-arguments,too-many-positional-arguments
def hyp_3f2(config: CliConfig, beta, nu, n: int, sigma, z, method: str) -> None:
    """3F2(BETA, NU, 1; BETA+SIGMA, N; Z)."""
    with _reporting(config):
        p = ThreeF2Params(beta=beta, nu=nu, n=n, sigma=sigma, z=z)
        record: dict[str, Any] = {"function": "3F2", "params": p.as_dict()}
        record["method"] = method
        if method == "integral":
            record["value"] = threef2_integral_direct(p)
        else:
            evaluate = {
                "series": threef2_series,
                "transform": threef2_transform,
                "fpi": threef2_fpi,
            }[method]
            record.update(_series_record(evaluate(p)))
        _emit(config, record)


# --------------------------------------------------------------- verify


@cli.command()
@click.option(
    "--tag",
    "tags",
    multiple=True,
    type=click.Choice([t.value for t in IdentityTag]),
    help="Identity to sweep (repeatable).",
)
@click.option("--all", "all_tags", is_flag=True, help="Sweep every identity.")
@click.option(
    "--oracle",
    "families",
    multiple=True,
    type=click.Choice([f.value for f in FpiFamily]),
    help="Compare a closed-form family with the extraction oracle (repeatable).",
)
@click.option(
    "--count",
    type=click.IntRange(min=1),
    default=25,
    show_default=True,
    help="Samples per identity.",
)
@click.option("--list", "list_tags", is_flag=True, help="List the identities and exit.")
@click.pass_context
# pylint: disable=too-many-arguments,too-many-positional-arguments
def verify(
    ctx: click.Context,
    tags: tuple[str, ...],
    all_tags: bool,
    families: tuple[str, ...],
    count: int,
    list_tags: bool,
) -> None:
    """Check identities on seeded samples; exit 1 if any sample fails."""
    config: CliConfig = ctx.obj
    if list_tags:
        for tag, identity in IDENTITIES.items():
            click.echo(f"{tag.value}\t{identity.description}")
        return
    if not (tags or all_tags or families):
        raise click.UsageError("Give --tag, --all, --oracle or --list.", ctx)

    with _reporting(config):
        verifier = Verifier(ParamSampler(config.seed), config.tolerance)
        selected = list(IdentityTag) if all_tags else [IdentityTag(t) for t in tags]
        reports = verifier.sweep_all(count, selected) if selected else []
        reports += [
            verify_fpi_closed_vs_oracle(FpiFamily(f), tol=config.tolerance)
            for f in families
        ]
        if config.output_format is OutputFormat.JSON:
            click.echo(reports_to_json(reports))
        else:
            click.echo(reports_to_csv(reports), nl=False)
        if not ctx.meta.get("fpintegrate.quiet", False):
            stderr_console.print(build_sweep_panel(reports))
        if any(r.failures for r in reports):
            sys.exit(1)


if __name__ == "__main__":
    cli()  # pylint: disable=no-value-for-parameter
