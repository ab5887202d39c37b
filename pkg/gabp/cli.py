"""Command-line entry point: ``gabp synth|stats|train|predict|evaluate|wizard``.

Exit codes: 0 on success, 2 for input and configuration errors (including
usage errors), 3 for numeric failures, 1 for anything unexpected.
"""

import json
import logging
from dataclasses import replace
from functools import wraps
from pathlib import Path
from typing import Optional

import click

from . import __version__, ingest, pipeline
from .errors import ConfigError, GabpError
from .features import log_returns
from .metrics import evaluate as evaluate_report
from .models.model_document import ModelDocument
from .models.run_config import GaConfig, MutationVariant, load_run_config
from .stats import DEFAULT_LAG, summarize
from .synth import GarchParams, generate
from .utils.console import configure_logging, console, err_console, report_table, summary_table

logger = logging.getLogger(__name__)


def handle_errors(command):
    """Print toolkit errors as 'module: message' and exit with their code"""
    @wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except GabpError as e:
            err_console.print(f"[bold red]Error[/bold red] {e.qualified()}", markup=True,
                              highlight=False)
            for issue in e.issues:
                err_console.print(f"  • {issue}", highlight=False)
            raise click.exceptions.Exit(e.exit_code)
        except (click.exceptions.Exit, click.exceptions.Abort, click.ClickException):
            raise
        except KeyboardInterrupt:
            err_console.print("\nInterrupted by user. Goodbye!")
            raise click.exceptions.Exit(0)
        except Exception as e:
            err_console.print(f"[bold red]Unexpected error[/bold red] {e}", highlight=False)
            if logger.isEnabledFor(logging.DEBUG):
                err_console.print_exception()
            raise click.exceptions.Exit(1)
    return wrapper


@click.group(context_settings={'help_option_names': ['-h', '--help']})
@click.version_option(__version__, prog_name="gabp")
@click.option("-v", "--verbose", count=True, help="Debug logging (-vv adds source locations).")
@click.option("-q", "--quiet", is_flag=True, help="Only warnings and errors.")
def cli(verbose: int, quiet: bool):
    """GA-optimized BP network for realized-volatility forecasting."""
    configure_logging(verbose, quiet)


@cli.command()
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False),
              help="CSV file to write.")
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--n", "n_rows", default=GarchParams.n, show_default=True, type=int,
              help="Trading days to simulate.")
@click.option("--omega", default=GarchParams.omega, show_default=True, type=float)
@click.option("--alpha", default=GarchParams.alpha, show_default=True, type=float)
@click.option("--beta", default=GarchParams.beta, show_default=True, type=float)
@click.option("--mu", default=GarchParams.mu, show_default=True, type=float)
@click.option("--start", default=GarchParams.start, show_default=True, help="First date (YYYY-MM-DD).")
@handle_errors
def synth(out_path, seed, n_rows, omega, alpha, beta, mu, start):
    """Write a synthetic GARCH(1,1) market CSV."""
    params = GarchParams(omega=omega, alpha=alpha, beta=beta, mu=mu, n=n_rows, seed=seed, start=start)
    path = ingest.write_csv(generate(params), out_path)
    console.print(f"Wrote {params.n} rows to [green]{path}[/green]")


@cli.command()
@click.argument("data", type=click.Path(dir_okay=False))
@click.option("--config", "config_path", type=click.Path(dir_okay=False),
              help="Run configuration JSON (column names, z threshold).")
@click.option("--lag", default=DEFAULT_LAG, show_default=True, type=int,
              help="Lag for the Q² and ARCH-LM statistics.")
@click.option("--json", "as_json", is_flag=True, help="Print the summary as JSON.")
@handle_errors
def stats(data, config_path, lag, as_json):
    """Descriptive statistics of the close-price log returns."""
    config = load_run_config(config_path)
    close = config.columns.close
    table = ingest.clean_table(ingest.load_csv(data, [close]), config.z_threshold)
    returns = log_returns(table.columns[close], table.dates)
    summary = summarize(returns.values, lag)

    if as_json:
        click.echo(json.dumps(summary.to_dict(), indent=2, sort_keys=True))
    else:
        console.print(summary_table(summary, title=f"Log returns of {Path(data).name}"))


def _apply_overrides(config, data, seed, workers, skip_ga, mutation_variant, out_dir, no_svg):
    if data is not None:
        config = replace(config, data_path=data)
    if seed is not None:
        config = replace(config, seed=seed)
    if workers is not None:
        config = replace(config, workers=workers)
    if skip_ga:
        config = replace(config, skip_ga=True)
    if mutation_variant is not None:
        ga: GaConfig = replace(config.ga, mutation_variant=MutationVariant(mutation_variant))
        config = replace(config, ga=ga)
    if out_dir is not None:
        config = replace(config, output_dir=out_dir)
    if no_svg:
        config = replace(config, write_svg=False)
    return config


@cli.command()
@click.option("--config", "config_path", type=click.Path(dir_okay=False),
              help="Run configuration JSON; flags override its values.")
@click.option("--data", type=click.Path(dir_okay=False), help="Market data CSV.")
@click.option("--seed", type=int, help="Master seed (split, GA and training).")
@click.option("--workers", type=int, help="Threads for fitness evaluation.")
@click.option("--skip-ga", is_flag=True, help="Plain BP baseline from a random initialization.")
@click.option("--mutation-variant", type=click.Choice([v.value for v in MutationVariant]),
              help="Mutation sign convention.")
@click.option("--out-dir", type=click.Path(file_okay=False), help="Artifact directory.")
@click.option("--dump-dataset", is_flag=True, help="Also write the normalized dataset.")
@click.option("--no-svg", is_flag=True, help="Skip SVG charts.")
@handle_errors
def train(config_path, data, seed, workers, skip_ga, mutation_variant, out_dir, dump_dataset, no_svg):
    """Train a GA-BP model and write every run artifact."""
    config = _apply_overrides(load_run_config(config_path), data, seed, workers, skip_ga,
                              mutation_variant, out_dir, no_svg)
    if not config.data_path:
        raise ConfigError("no data file; pass --data or set data_path in the config")

    ok, errors = config.is_valid()
    if not ok:
        raise ConfigError("invalid run configuration", issues=errors)

    outcome = pipeline.train(config)
    paths = pipeline.write_artifacts(outcome, config.output_dir, config.write_svg, dump_dataset)

    console.print(report_table(outcome.test_report))
    for name, path in paths.items():
        logger.debug("%s -> %s", name, path)
    console.print(f"Artifacts in [green]{config.output_dir}[/green]")


@cli.command()
@click.argument("model", type=click.Path(dir_okay=False))
@click.argument("data", type=click.Path(dir_okay=False))
@click.option("--out", "out_path", default="predictions.csv", show_default=True,
              type=click.Path(dir_okay=False), help="Predictions CSV to write.")
@handle_errors
def predict(model, data, out_path):
    """Replay a saved model on a data file."""
    document = ModelDocument.load(model)
    frame = pipeline.replay(document, data)
    target = Path(out_path)
    target.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(target, index=False, lineterminator="\n")
    console.print(f"Wrote {len(frame)} predictions to [green]{target}[/green]")


@cli.command()
@click.argument("predictions", type=click.Path(dir_okay=False))
@click.option("--split", type=click.Choice(["train", "test", "all"]),
              help="Rows to score (default: test when a split column exists).")
@click.option("--errors-out", type=click.Path(dir_okay=False),
              help="Write the index,error,error_pct series here.")
@click.option("--json", "as_json", is_flag=True, help="Print the report as JSON.")
@handle_errors
def evaluate(predictions, split, errors_out, as_json):
    """Score predicted against realized volatility."""
    frame = pipeline.read_predictions(predictions, split)
    report = evaluate_report(frame['predicted'].to_numpy(), frame['actual_rv'].to_numpy())

    if errors_out:
        target = Path(errors_out)
        target.parent.mkdir(parents=True, exist_ok=True)
        report.error_frame().to_csv(target, index=False, lineterminator="\n")

    if as_json:
        click.echo(json.dumps(report.to_dict(), indent=2, sort_keys=True))
    else:
        console.print(report_table(report, title=f"Errors in {Path(predictions).name}"))


@cli.command()
@click.option("--config", "config_path", type=click.Path(dir_okay=False),
              help="Start from this run configuration.")
@handle_errors
def wizard(config_path: Optional[str]):
    """Interactive editor for run configurations."""
    from .app import run_wizard

    run_wizard(load_run_config(config_path) if config_path else None, config_path)


def main():
    cli(prog_name="gabp")


if __name__ == "__main__":
    main()
