from rich.console import Console
from rich.table import Table

from .correlations import SETTINGS, CorrelationReport
from .stats import EstimateReport
from .verify import CheckResult


def _fmt(value, digits: int = 6) -> str:
    return "—" if value is None else f"{value:.{digits}f}"


def display_correlation_summary(report: CorrelationReport, console: Console, estimates: EstimateReport | None = None) -> None:
    """
    Render the analytic tables, and the Monte Carlo estimates if given, as one table.

    Args:
        report (CorrelationReport): Analytic values.
        console (Console): Where to render (stderr in the CLI).
        estimates (EstimateReport | None): Simulated values to set beside them.
    """
    table = Table(title="Correlations per setting pair")
    for column in ("(i, j)", "C_ij", "g_ij", "c_ij", "C_ij|cond"):
        table.add_column(column, justify="right")
    if estimates is not None:
        for column in ("Ĉ_ij", "ĉ_ij", "N_ij"):
            table.add_column(column, justify="right")

    for i, j in SETTINGS:
        row = [
            f"({i}, {j})",
            _fmt(report.pair[i][j]),
            _fmt(report.weights[i][j]),
            _fmt(report.complete[i][j]),
            _fmt(report.conditional[i][j]),
        ]
        if estimates is not None:
            row += [
                _fmt(estimates.conditional[i][j]),
                _fmt(estimates.unconditional[i][j]),
                str(estimates.setting_counts[i][j]),
            ]
        table.add_row(*row)
    console.print(table)

    console.print(f"C = {report.chsh_conditional:.12f}    c = {report.chsh_complete:.12f}")
    if estimates is not None:
        console.print(
            f"Ĉ = {_fmt(estimates.chsh_conditional_hat)} ± {_fmt(estimates.chsh_conditional_se)}    "
            f"ĉ = {_fmt(estimates.chsh_complete_hat)} ± {_fmt(estimates.chsh_complete_se)}"
        )


def display_verify_report(results: list[CheckResult], console: Console) -> None:
    """Per-check status table followed by a one-line verdict."""
    table = Table(title="bellcond verify")
    table.add_column("Check")
    table.add_column("Status")
    table.add_column("Detail", overflow="fold")
    for result in results:
        status = "[green]pass[/green]" if result.passed else "[bold red]FAIL[/bold red]"
        table.add_row(result.name, status, result.detail)
    console.print(table)

    failed = [r.name for r in results if not r.passed]
    if failed:
        console.print(f"[bold red]{len(failed)} of {len(results)} checks failed:[/bold red] {', '.join(failed)}")
    else:
        console.print(f"[green]all {len(results)} checks passed[/green]")
