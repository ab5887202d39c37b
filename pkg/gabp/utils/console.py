"""Terminal output: logging setup and result tables rendered with rich."""

import logging
from typing import Optional

from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from ..metrics import EvalReport
from ..stats import SeriesSummary

console = Console()
err_console = Console(stderr=True)


def configure_logging(verbose: int = 0, quiet: bool = False) -> None:
    """Route every gabp logger through one RichHandler on stderr"""
    if quiet:
        level = logging.WARNING
    elif verbose:
        level = logging.DEBUG
    else:
        level = logging.INFO

    handler = RichHandler(console=err_console, show_path=verbose > 1, rich_tracebacks=True,
                          markup=False, log_time_format="[%X]")
    root = logging.getLogger("gabp")
    root.handlers = [handler]
    root.setLevel(level)
    root.propagate = False


def _fmt(value: Optional[float]) -> str:
    if value is None:
        return "undefined"
    return f"{value:.6g}"


def summary_table(summary: SeriesSummary, title: str = "Return series") -> Table:
    table = Table(title=title, show_header=True, header_style="bold blue")
    table.add_column("Statistic", style="cyan")
    table.add_column("Value", justify="right")

    rows = [
        ("Obs", str(summary.n_obs)),
        ("Mean", _fmt(summary.mean)),
        ("Max", _fmt(summary.max)),
        ("Min", _fmt(summary.min)),
        ("Std. dev.", _fmt(summary.std_dev)),
        ("Skewness", _fmt(summary.skewness)),
        ("Excess kurtosis", _fmt(summary.excess_kurtosis)),
        (f"Q²({summary.lag})", _fmt(summary.q2_stat)),
        (f"ARCH({summary.lag})", _fmt(summary.arch_stat)),
    ]
    for label, value in rows:
        table.add_row(label, value)

    data = summary.to_dict()
    if 'critical_value_95' in data:
        table.add_row("χ² 5% critical", _fmt(data['critical_value_95']))
    return table


def report_table(report: EvalReport, title: str = "Test-set errors") -> Table:
    table = Table(title=title, show_header=True, header_style="bold blue")
    table.add_column("Metric", style="cyan")
    table.add_column("Value", justify="right")

    table.add_row("n", str(report.n))
    table.add_row("MFE", _fmt(report.mfe))
    table.add_row("RMSE", _fmt(report.rmse))
    table.add_row("MAE", _fmt(report.mae))
    table.add_row("MAPE", _fmt(report.mape))
    table.add_row("MSE (RMSE²)", _fmt(report.mse), style="dim")
    return table
