"""
Estimate command - Off-policy value estimate from a dataset.
"""
import json
from pathlib import Path
from typing import Optional

import typer

from estimators.constants import METHODS
from estimators.dispatch import run_estimator
from mdp.io import load_dataset, load_mdp, load_partition, load_policy
from solver.value import policy_value


def estimate(
    data: Path = typer.Option(..., "--data", "-d", help="NDJSON dataset file"),
    pi_path: Path = typer.Option(..., "--pi", help="Target policy JSON file"),
    method: str = typer.Option("fqe", "--method", "-m", help=f"One of {', '.join(METHODS)}"),
    partition: str = typer.Option("none", "--partition", "-p", help="'none' or a partition JSON file"),
    mdp_path: Optional[Path] = typer.Option(None, "--mdp", help="MDP JSON file for the exact J(pi) comparison"),
    gamma: Optional[float] = typer.Option(None, "--gamma", help="Discount (defaults to the MDP's, else 0.9)"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Write the estimate result as JSON")
):
    """
    Estimate J(pi) with FQE, SIS, MIS or DRL, on ground states or over a partition.

    With --mdp the exact value and the estimation error are reported too.
    """
    try:
        mdp = load_mdp(mdp_path) if mdp_path is not None else None
        if mdp is not None:
            dataset = load_dataset(data, mdp.n_states, mdp.n_actions)
            pi = load_policy(pi_path, mdp.n_states, mdp.n_actions)
        else:
            # the policy fixes the spaces; states the data never reach still exist
            pi = load_policy(pi_path)
            dataset = load_dataset(data, pi.n_states, pi.n_actions)
        part = None if partition == "none" else load_partition(partition)
        if gamma is None:
            gamma = mdp.gamma if mdp is not None else 0.9

        result = run_estimator(method, dataset, pi, part, gamma)
        payload = result.to_dict()
        typer.echo(f"{method} ({result.abstraction}): J_hat = {result.estimate!r}")
        if mdp is not None:
            oracle = policy_value(mdp, pi)
            payload["oracle"] = oracle
            payload["error"] = result.estimate - oracle
            typer.echo(f"exact J(pi) = {oracle!r}, error = {payload['error']!r}")
        if out is not None:
            out.parent.mkdir(parents=True, exist_ok=True)
            out.write_text(json.dumps(payload, indent=2, default=float), encoding="utf-8")
            typer.echo(f"Wrote {out}")
    except Exception as e:
        typer.echo(f"Error estimating: {e}", err=True)
        raise typer.Exit(1)
