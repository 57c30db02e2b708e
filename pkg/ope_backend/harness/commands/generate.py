"""
Generate command - Write an MDP instance with its policies and known partitions.
"""
import json
from pathlib import Path
from typing import Optional

import typer

from generators.constants import DEFAULT_ACTIONS, DEFAULT_BASE_STATES, DEFAULT_EPSILON, GENERATOR_KINDS
from generators.instances import build_instance
from mdp.io import save_mdp, save_partition, save_policy


def generate(
    kind: str = typer.Option("toy", "--kind", "-k", help=f"One of {', '.join(GENERATOR_KINDS)}"),
    seed: int = typer.Option(0, "--seed", "-s", help="Instance seed"),
    out_prefix: str = typer.Option(..., "--out-prefix", "-o", help="Prefix for the written files"),
    n_states: int = typer.Option(DEFAULT_BASE_STATES, "--n-states", help="States of the random (base) model"),
    n_actions: int = typer.Option(DEFAULT_ACTIONS, "--n-actions", help="Actions of the random model"),
    n_noise: Optional[int] = typer.Option(None, "--n-noise", help="Noise values per relevant state"),
    epsilon: float = typer.Option(DEFAULT_EPSILON, "--epsilon", "-e", help="Behavior exploration weight"),
    gamma: float = typer.Option(0.9, "--gamma", help="Discount")
):
    """
    Generate an instance and write PREFIX_mdp.json, PREFIX_pi.json, PREFIX_b.json,
    PREFIX_partition_<condition>.json for each known partition, and PREFIX_audit.json.
    """
    try:
        instance = build_instance(kind, seed, n_states=n_states, n_actions=n_actions, n_noise=n_noise,
                                  epsilon=epsilon, gamma=gamma)
        prefix = Path(out_prefix)
        written = []
        for suffix, writer, item in (("mdp", save_mdp, instance.mdp), ("pi", save_policy, instance.pi),
                                     ("b", save_policy, instance.b)):
            path = prefix.parent / f"{prefix.name}_{suffix}.json"
            writer(item, path)
            written.append(path)
        for condition, part in instance.truth.items():
            path = prefix.parent / f"{prefix.name}_partition_{condition}.json"
            save_partition(part, path)
            written.append(path)
        audit_path = prefix.parent / f"{prefix.name}_audit.json"
        audit_path.write_text(json.dumps(instance.audit, indent=2), encoding="utf-8")
        written.append(audit_path)

        typer.echo(f"{kind}: {instance.mdp.n_states} states, {instance.mdp.n_actions} actions")
        for path in written:
            typer.echo(f"  {path}")
    except Exception as e:
        typer.echo(f"Error generating instance: {e}", err=True)
        raise typer.Exit(1)
