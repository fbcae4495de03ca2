import logging
import os
import time
from functools import reduce

import click
from rich.console import Console
from rich.logging import RichHandler

from .config import DEFAULT_LOG_LEVEL, LOG_ENV_VAR, LOG_LEVELS, VERSION
from .display import display_correlation_summary, display_verify_report
from .errors import BellcondError, ConfigError, DensityValidationError, NumericIntegrityError
from .report import analytic_record, emit, frame_to_csv, render, simulate_record, to_json
from .sweep import SWEEP_AXES, SweepSpec, run_sweep
from .utils import load_run_config, to_radians
from .verify import run_verify

logger = logging.getLogger("bellcond")

EXIT_ERROR = 1
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_VERIFY = 4

_LEVELS = {"error": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}


def setup_logging() -> Console:
    """
    Route the package's logs to a rich handler on standard error.

    The level comes from BELLCOND_LOG (error, info or debug).

    Returns:
        Console: The stderr console, reused for summaries.
    """
    console = Console(stderr=True)
    name = os.environ.get(LOG_ENV_VAR, DEFAULT_LOG_LEVEL).strip().lower()
    if name not in LOG_LEVELS:
        console.print(f"[yellow]{LOG_ENV_VAR}={name!r} not in {LOG_LEVELS}, using '{DEFAULT_LOG_LEVEL}'[/yellow]")
        name = DEFAULT_LOG_LEVEL
    handler = RichHandler(console=console, show_path=False, show_time=False)
    logger.handlers[:] = [handler]
    logger.setLevel(_LEVELS[name])
    logger.propagate = False
    return console


class BellcondGroup(click.Group):
    """Maps domain exceptions to the documented exit statuses."""

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except ConfigError as exc:
            click.echo(f"config error: {exc}", err=True)
            ctx.exit(EXIT_CONFIG)
        except (NumericIntegrityError, DensityValidationError) as exc:
            click.echo(f"numeric integrity error: {exc}", err=True)
            ctx.exit(EXIT_NUMERIC)
        except BellcondError as exc:
            click.echo(f"error: {exc}", err=True)
            ctx.exit(EXIT_ERROR)


def run_options(fn):
    """Options shared by analytic, simulate and sweep."""
    options = [
        click.option("--config", "config_path", type=click.Path(dir_okay=False), help="JSON run configuration."),
        click.option("--seed", type=click.IntRange(0, (1 << 64) - 1), help="Override the seed."),
        click.option("--trials", type=click.IntRange(min=1), help="Override the number of trials."),
        click.option("--workers", type=click.IntRange(min=1), help="Override the worker count."),
        click.option("--degrees", is_flag=True, help="Read angles (and a b0-offset sweep range) in degrees."),
        click.option("--output", "output_path", help="Output file, '-' for standard output."),
        click.option("--timing", is_flag=True, help="Add wall-clock duration to the record."),
    ]
    return reduce(lambda f, option: option(f), reversed(options), fn)


def _load(config_path, seed, trials, workers, degrees, output_path, fmt):
    overrides = {"seed": seed, "trials": trials, "workers": workers, "path": output_path, "format": fmt}
    return load_run_config(config_path, overrides, degrees)


@click.group(cls=BellcondGroup)
@click.version_option(VERSION, prog_name="bellcond")
@click.pass_context
def cli(ctx):
    """Conditional and complete CHSH correlations: analytic and Monte Carlo."""
    ctx.obj = setup_logging()


@cli.command()
@run_options
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), help="Output format.")
@click.pass_obj
def analytic(console, config_path, seed, trials, workers, degrees, output_path, timing, fmt):
    """Evaluate C_ij, g_ij, c_ij, C, c and the conditioned correlations."""
    started = time.perf_counter()
    run = _load(config_path, seed, trials, workers, degrees, output_path, fmt)
    record, report = analytic_record(run)
    if logger.isEnabledFor(logging.INFO):
        display_correlation_summary(report, console)
    if timing:
        record["duration_s"] = time.perf_counter() - started
    emit(render(record, run.output_format), run.output_path)


@cli.command()
@run_options
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), help="Output format.")
@click.pass_obj
def simulate(console, config_path, seed, trials, workers, degrees, output_path, timing, fmt):
    """Run the random-generator experiment and compare estimates with the analytic values."""
    started = time.perf_counter()
    run = _load(config_path, seed, trials, workers, degrees, output_path, fmt)
    record, report, estimates = simulate_record(run)
    if logger.isEnabledFor(logging.INFO):
        display_correlation_summary(report, console, estimates)
    if timing:
        record["duration_s"] = time.perf_counter() - started
    emit(render(record, run.output_format), run.output_path)


@cli.command()
@run_options
@click.option("--format", "fmt", type=click.Choice(["csv"]), default="csv", show_default=True, help="Output format.")
@click.option("--axis", type=click.Choice(SWEEP_AXES), required=True, help="Parameter to sweep.")
@click.option("--start", type=float, required=True, help="First grid value.")
@click.option("--stop", type=float, required=True, help="Last grid value.")
@click.option("--steps", type=int, required=True, help="Number of grid points (≥ 2).")
def sweep(config_path, seed, trials, workers, degrees, output_path, timing, fmt, axis, start, stop, steps):
    """Tabulate C, c and c/C over a grid of b0 offsets or generator probabilities."""
    run = _load(config_path, seed, trials, workers, degrees, output_path, None)
    if axis == "b0-offset":
        start, stop = to_radians(start, degrees), to_radians(stop, degrees)
    started = time.perf_counter()
    frame = run_sweep(run, SweepSpec(axis, start, stop, steps))
    if timing:
        logger.info("sweep finished in %.3f s", time.perf_counter() - started)
    emit(frame_to_csv(frame), run.output_path)


@cli.command()
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text", show_default=True)
@click.option("--perturb-sigma", is_flag=True, hidden=True, help="Inject a non-normalised generator state.")
@click.pass_context
def verify(ctx, fmt, perturb_sigma):
    """Run the randomized identity suite; exit 4 if any check fails."""
    results = run_verify(perturb_sigma=perturb_sigma)
    if fmt == "json":
        click.echo(to_json({
            "bellcond_version": VERSION,
            "command": "verify",
            "checks": [{"name": r.name, "passed": r.passed, "detail": r.detail} for r in results],
        }), nl=False)
    else:
        display_verify_report(results, Console())
    if not all(r.passed for r in results):
        ctx.exit(EXIT_VERIFY)


def main():
    cli(prog_name="bellcond")
