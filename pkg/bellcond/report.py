import io
import json
import logging
from pathlib import Path

import click
import pandas as pd

from .config import VERSION
from .correlations import SETTINGS, CorrelationReport, correlation_report
from .experiment import run_experiment
from .stats import EstimateReport, estimate
from .utils import RunConfig

logger = logging.getLogger(__name__)

CSV_COLUMNS = ["section", "quantity", "i", "j", "value"]


def _record(command: str, run: RunConfig, include_run: bool) -> dict:
    return {
        "bellcond_version": VERSION,
        "command": command,
        "config": run.echo(include_run=include_run),
    }


def analytic_record(run: RunConfig) -> tuple[dict, CorrelationReport]:
    """
    Evaluate the analytic tables of a run configuration.

    Returns:
        tuple: (output record, the CorrelationReport behind it)
    """
    report = correlation_report(run.experiment.state, run.model, run.experiment.angles)
    record = _record("analytic", run, include_run=False)
    record["analytic"] = report.to_dict()
    return record, report


def simulate_record(run: RunConfig) -> tuple[dict, CorrelationReport, EstimateReport]:
    """
    Run the Monte Carlo experiment and set its estimates beside the analytic values.

    Returns:
        tuple: (output record, CorrelationReport, EstimateReport)
    """
    report = correlation_report(run.experiment.state, run.model, run.experiment.angles)
    tally = run_experiment(run.experiment)
    estimates = estimate(tally)
    record = _record("simulate", run, include_run=True)
    record["analytic"] = report.to_dict()
    record["estimates"] = estimates.to_dict()
    logger.info(
        "C_hat = %s, c_hat = %.6f over %d trials",
        estimates.chsh_conditional_hat, estimates.chsh_complete_hat, estimates.total,
    )
    return record, report, estimates


# --- Serialization ---

def to_json(record: dict) -> str:
    """
    Serialize a record deterministically.

    Floats use Python's shortest round-trip representation, so parsing the text and
    serializing it again gives the same bytes.
    """
    return json.dumps(record, indent=2, sort_keys=True, allow_nan=False, ensure_ascii=False) + "\n"


def _table_rows(section: str, tables: dict) -> list[dict]:
    rows = []
    for quantity, value in tables.items():
        if isinstance(value, list) and len(value) == 2 and isinstance(value[0], list):
            for i, j in SETTINGS:
                rows.append({"section": section, "quantity": quantity, "i": i, "j": j, "value": value[i][j]})
        elif isinstance(value, (int, float)) or value is None:
            rows.append({"section": section, "quantity": quantity, "i": None, "j": None, "value": value})
        elif isinstance(value, dict):
            rows.extend(_table_rows(f"{section}.{quantity}", value))
    return rows


def to_csv(record: dict) -> str:
    """Flatten the numeric tables of a record into long-format CSV (one value per row)."""
    rows = []
    for section in ("analytic", "estimates"):
        if section in record:
            rows.extend(_table_rows(section, record[section]))
    frame = pd.DataFrame(rows, columns=CSV_COLUMNS, dtype=object)
    return frame_to_csv(frame)


def frame_to_csv(frame: pd.DataFrame) -> str:
    """Comma-separated, '.' decimals, LF line endings, empty cells for missing values."""
    buffer = io.StringIO()
    frame.to_csv(buffer, index=False, sep=",", decimal=".", lineterminator="\n", na_rep="")
    return buffer.getvalue()


def render(record: dict, fmt: str) -> str:
    if fmt == "json":
        return to_json(record)
    if fmt == "csv":
        return to_csv(record)
    raise ValueError(f"unknown output format '{fmt}'")


def emit(text: str, path: str) -> None:
    """Write to a file, or to standard output when path is '-'."""
    if path == "-":
        click.echo(text, nl=False)
        return
    Path(path).write_text(text, encoding="utf-8", newline="\n")
    logger.info("wrote %s", path)
