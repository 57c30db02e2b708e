"""
Solve command - Exact Q, J, stationary distribution, ratios and backward kernel.
"""
import json
from pathlib import Path
from typing import Optional

import typer

from mdp.io import load_mdp, load_policy
from solver.cache import solve as solve_exact


def solve(
    mdp_path: Path = typer.Option(..., "--mdp", help="MDP JSON file"),
    pi_path: Path = typer.Option(..., "--pi", help="Target policy JSON file"),
    b_path: Path = typer.Option(..., "--b", help="Behavior policy JSON file"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Write every exact table to this JSON file")
):
    """
    Solve a model exactly for a target/behavior policy pair.

    Prints J(pi) and the chain summary; --out writes Q, V, rho, p_inf, d^pi, w and the backward kernel.
    """
    try:
        mdp = load_mdp(mdp_path)
        pi = load_policy(pi_path, mdp.n_states, mdp.n_actions)
        b = load_policy(b_path, mdp.n_states, mdp.n_actions)
        cache = solve_exact(mdp, pi, b)
        typer.echo(f"J(pi) = {cache.j_pi!r}")
        typer.echo(f"Behavior chain: {'periodic' if cache.periodic else 'aperiodic'}, "
                   f"max w = {float(cache.w.max()):.6f}")
        if out is not None:
            out.parent.mkdir(parents=True, exist_ok=True)
            out.write_text(json.dumps(cache.to_dict(), indent=2), encoding="utf-8")
            typer.echo(f"Wrote {out}")
    except Exception as e:
        typer.echo(f"Error solving: {e}", err=True)
        raise typer.Exit(1)
