"""Help styling, the error-stream console and the sweep summary panel."""

import math
from collections.abc import Generator, Sequence
from typing import TYPE_CHECKING

import rich_click as click
from rich.console import Console, group
from rich.panel import Panel
from rich.table import Table
from rich.text import Text
from rich.theme import Theme

if TYPE_CHECKING:
    from .verify import SweepReport

__all__ = [
    "build_sweep_panel",
    "HELP_CONFIG",
    "RICH_THEME",
    "stderr_console",
]


HELP_CONFIG = click.RichHelpConfiguration(
    style_option="bold cyan",
    style_argument="bold cyan",
    style_command="bold cyan",
    style_switch="bold green",
    style_metavar="bold yellow",
    style_usage="bold yellow",
    style_helptext="dim",
    style_option_default="dim",
    style_options_panel_border="dim",
    style_commands_panel_border="dim",
)
RICH_THEME = Theme(
    {
        "logging.level.warning": "bold yellow",
        "logging.level.error": "bold red",
        "logging.level.debug": "dim",
        "logging.level.trace": "dim",
        "repr.number": "bold cyan",
        "repr.number_complex": "bold cyan",
        "sweep.tag": "bold",
        "sweep.tol": "dim",
        "sweep.pass": "green",
        "sweep.fail": "bold red",
    }
)

# stdout is reserved for JSON/CSV reports
stderr_console = Console(stderr=True, theme=RICH_THEME)


def _residual(value: float) -> Text:
    if not math.isfinite(value):  # a sample failed to evaluate
        return Text("n/a", style="sweep.fail")
    return Text(f"{value:.2e}")


@group()
def _get_sweep_items(reports: Sequence["SweepReport"]) -> Generator:
    total = sum(r.count for r in reports)
    failures = sum(len(r.failures) for r in reports)
    plural = "s" if total != 1 else ""
    if failures:
        yield Text(f"{failures} of {total} sample{plural} failed.", style="sweep.fail")
    else:
        yield Text(f"All {total} sample{plural} within tolerance.", style="sweep.pass")

    table = Table(box=None, padding=(0, 1))
    table.add_column("identity", style="sweep.tag")
    table.add_column("samples", justify="right")
    table.add_column("failed", justify="right")
    table.add_column("max rel", justify="right")
    table.add_column("median rel", justify="right")
    table.add_column("tol", justify="right", style="sweep.tol")
    for report in reports:
        failed = len(report.failures)
        table.add_row(
            report.tag.value,
            str(report.count),
            Text(str(failed), style="sweep.fail" if failed else "sweep.pass"),
            _residual(report.max_rel_residual),
            _residual(report.median_rel_residual),
            f"{report.tolerance:.0e}",
        )
    yield table


def build_sweep_panel(reports: Sequence["SweepReport"]) -> Panel:
    """Return a Rich Panel summarizing identity sweeps."""
    if any(r.failures for r in reports):
        emoji, title, border_style = "cross_mark", "Identities failed", "bold red"
    else:
        emoji, title, border_style = "white_check_mark", "Identities verified", "green"
    return Panel(
        _get_sweep_items(reports),
        title=f":{emoji}: {title}",
        title_align="left",
        border_style=border_style,
    )
