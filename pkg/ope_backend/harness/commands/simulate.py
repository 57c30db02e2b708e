"""
Simulate command - Draw trajectories under a behavior policy.
"""
from pathlib import Path

import typer

from mdp.io import load_mdp, load_policy, save_dataset
from simulation.sampler import sample_trajectories


def simulate(
    mdp_path: Path = typer.Option(..., "--mdp", help="MDP JSON file"),
    b_path: Path = typer.Option(..., "--b", help="Behavior policy JSON file"),
    n: int = typer.Option(..., "--n", help="Number of trajectories"),
    horizon: int = typer.Option(..., "--horizon", "-T", help="Steps per trajectory"),
    seed: int = typer.Option(0, "--seed", "-s", help="Base seed"),
    init: str = typer.Option("rho0", "--init", help="Initial law: rho0 or stationary"),
    out: Path = typer.Option(..., "--out", "-o", help="NDJSON dataset file to write")
):
    """
    Simulate n trajectories and write them as NDJSON records {traj, t, s, a, r, s_next}.
    """
    try:
        mdp = load_mdp(mdp_path)
        b = load_policy(b_path, mdp.n_states, mdp.n_actions)
        dataset = sample_trajectories(mdp, b, n, horizon, seed, init_mode=init)
        save_dataset(dataset, out)
        typer.echo(f"Wrote {dataset.n_trajectories} trajectories x {horizon} steps to {out}")
    except Exception as e:
        typer.echo(f"Error simulating: {e}", err=True)
        raise typer.Exit(1)
