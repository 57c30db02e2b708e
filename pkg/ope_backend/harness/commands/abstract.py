"""
Abstract command - Coarsest forward, backward or two-step partition of a model.
"""
import json
from pathlib import Path
from typing import Optional

import typer

from abstraction.constants import ABSTRACTION_TOL
from abstraction.refinement import refine_backward, refine_forward
from abstraction.two_step import two_step
from mdp.io import load_mdp, load_policy, save_partition

MODES = ("forward", "backward", "two-step")


def abstract(
    mdp_path: Path = typer.Option(..., "--mdp", help="MDP JSON file"),
    pi_path: Path = typer.Option(..., "--pi", help="Target policy JSON file"),
    b_path: Optional[Path] = typer.Option(None, "--b", help="Behavior policy JSON file (backward and two-step)"),
    mode: str = typer.Option("two-step", "--mode", "-m", help="forward, backward or two-step"),
    tol: float = typer.Option(ABSTRACTION_TOL, "--tol", help="Signature grid width and checker tolerance"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Partition JSON file to write"),
    audit: Optional[Path] = typer.Option(None, "--audit", help="Audit JSON file with per-round splits")
):
    """
    Compute the coarsest partition satisfying the chosen irrelevance condition.

    Examples:
        ope abstract --mdp m.json --pi pi.json --b b.json --mode two-step --out part.json
    """
    try:
        if mode not in MODES:
            raise ValueError(f"Unknown mode '{mode}'. Use one of {', '.join(MODES)}")
        mdp = load_mdp(mdp_path)
        pi = load_policy(pi_path, mdp.n_states, mdp.n_actions)
        if mode != "forward" and b_path is None:
            raise ValueError(f"--b is required for mode '{mode}'")
        b = load_policy(b_path, mdp.n_states, mdp.n_actions) if b_path is not None else None

        if mode == "forward":
            result = refine_forward(mdp, pi, tol)
        elif mode == "backward":
            result = refine_backward(mdp, pi, b, tol)
        else:
            result = two_step(mdp, pi, b, tol)
        partition, record = result.partition, result.to_audit()

        typer.echo(f"{mode}: {mdp.n_states} states -> {partition.n_blocks} blocks")
        typer.echo(f"block_of = {partition.block_of.tolist()}")
        if out is not None:
            save_partition(partition, out)
            typer.echo(f"Wrote {out}")
        if audit is not None:
            audit.parent.mkdir(parents=True, exist_ok=True)
            audit.write_text(json.dumps(record, indent=2), encoding="utf-8")
            typer.echo(f"Wrote {audit}")
    except Exception as e:
        typer.echo(f"Error computing abstraction: {e}", err=True)
        raise typer.Exit(1)
