"""
Verify command - Exact verification suite on random and constructed instances.
"""
import json
from pathlib import Path
from typing import Optional

import typer

from harness.verify import verify_theorems


def verify(
    cases: int = typer.Option(25, "--cases", "-n", help="Number of random cases"),
    seed: int = typer.Option(0, "--seed", "-s", help="Suite seed"),
    tol: float = typer.Option(1e-8, "--tol", help="Residual and checker tolerance"),
    report: Optional[Path] = typer.Option(None, "--report", "-o", help="Write the full report as JSON")
):
    """
    Check the estimator equalities implied by each irrelevance condition, the two-step procedure,
    the SIS truncation bound and refinement against exhaustive search.

    Exits with status 1 if any assertion fails.
    """
    try:
        result = verify_theorems(seed=seed, n_cases=cases, tol=tol)
        for line in result.lines():
            typer.echo(line)
        if report is not None:
            report.parent.mkdir(parents=True, exist_ok=True)
            report.write_text(json.dumps(result.to_dict(), indent=2, default=float), encoding="utf-8")
            typer.echo(f"Wrote {report}")
    except Exception as e:
        typer.echo(f"Error verifying: {e}", err=True)
        raise typer.Exit(1)
    if not result.ok:
        typer.echo("Verification FAILED", err=True)
        raise typer.Exit(1)
    typer.echo("Verification passed")
