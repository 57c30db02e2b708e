"""
Experiment command - Run an estimator sweep from a config file.
"""
from pathlib import Path
from typing import Optional

import typer

from harness.config import load_config
from harness.experiment import run_experiment


def experiment(
    config: Path = typer.Option(..., "--config", "-c", help="Experiment config JSON file"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Output directory (overrides OPE_OUTPUT_DIR)"),
    jobs: int = typer.Option(1, "--jobs", "-j", help="Worker processes"),
    resume: bool = typer.Option(True, "--resume/--fresh", help="Keep completed cells from an existing results.csv")
):
    """
    Run every (epsilon, n, replication, method, abstraction) cell and write results.csv and
    results_aggregated.csv.

    Failed cells are recorded in the status column and summarised; the sweep does not stop.
    """
    try:
        cfg = load_config(config)
        result = run_experiment(cfg, out_dir=out, jobs=jobs, resume=resume)
        typer.echo(f"Rows: {len(result.rows)} ({result.resumed_cells} cell(s) resumed), failures: {result.failures}")
        typer.echo(f"Raw results: {result.raw_path}")
        typer.echo(f"Aggregated: {result.aggregate_path}")
        for row in result.aggregates:
            typer.echo(f"  eps={row['epsilon']} n={row['n']} {row['method']}/{row['abstraction']}: "
                       f"mse={row['mse'] or 'n/a'} bias={row['bias'] or 'n/a'} failures={row['failures']}")
    except Exception as e:
        typer.echo(f"Error running experiment: {e}", err=True)
        raise typer.Exit(1)
