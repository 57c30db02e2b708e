"""
One entry point for every instance kind, used by the CLI and the experiment runner.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

from abstraction.partition import Partition
from generators.constants import (
    DEFAULT_ACTIONS,
    DEFAULT_BASE_STATES,
    DEFAULT_EPSILON,
    DEFAULT_NOISE,
    GENERATOR_KINDS,
)
from generators.lifts import lift_backward_irrelevant, lift_model_irrelevant
from generators.random import random_deterministic_policy, random_mdp
from generators.toy import scaled_toy, three_group_toy
from mdp.model import MdpModel, PolicyTable
from mdp.policy import epsilon_greedy
from simulation.rng import derive_seed

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Instance:
    kind: str
    mdp: MdpModel
    pi: PolicyTable
    b: PolicyTable
    truth: Dict[str, Partition] = field(default_factory=dict)
    audit: Dict = field(default_factory=dict)


def build_instance(kind: str, seed: int, n_states: int = DEFAULT_BASE_STATES, n_actions: int = DEFAULT_ACTIONS,
                   n_noise: Optional[int] = None, epsilon: float = DEFAULT_EPSILON, gamma: float = 0.9,
                   reward_noise_std: float = 0.0, sizes: Optional[Tuple[int, int, int]] = None) -> Instance:
    """
    Build an MDP with target and behavior policies and its known partitions.

    Args:
        kind: One of GENERATOR_KINDS
        seed: Instance seed; sub-seeds for the base model, policy and lift are derived from it
        n_states: States of the random model (base states for lifts)
        n_actions: Actions of the random model
        n_noise: Noise values per relevant state (1 for the toy, DEFAULT_NOISE otherwise)
        epsilon: Behavior exploration weight
        sizes: Group sizes for the toy kinds

    Returns:
        Instance whose truth maps a condition name ("forward", "backward", "two-step") to the
        partition known to satisfy it
    """
    if kind not in GENERATOR_KINDS:
        raise ValueError(f"unknown generator kind {kind!r}; expected one of {', '.join(GENERATOR_KINDS)}")

    if kind in ("toy", "scaled-toy"):
        if kind == "toy":
            toy = three_group_toy(sizes or (2, 2, 2), seed, epsilon=epsilon, n_noise=n_noise or 1,
                                  gamma=gamma, reward_noise_std=reward_noise_std)
        else:
            toy = scaled_toy(seed, sizes=sizes or (4, 4, 4), n_noise=n_noise or DEFAULT_NOISE, epsilon=epsilon,
                             gamma=gamma, reward_noise_std=reward_noise_std)
        return Instance(kind, toy.mdp, toy.pi, toy.b, toy.expected(), toy.to_audit())

    base = random_mdp(n_states, n_actions, derive_seed(seed, 0), gamma=gamma,
                      reward_noise_std=reward_noise_std)
    pi = random_deterministic_policy(n_states, n_actions, derive_seed(seed, 1))
    b = epsilon_greedy(pi, epsilon)
    n_noise = n_noise or DEFAULT_NOISE
    audit = {"kind": kind, "seed": seed, "n_states": n_states, "n_actions": n_actions, "epsilon": epsilon}

    if kind == "random":
        return Instance(kind, base, pi, b, {}, audit)
    if kind == "lift-forward":
        lift = lift_model_irrelevant(base, pi, n_noise, derive_seed(seed, 2))
        return Instance(kind, lift.mdp, lift.pi, epsilon_greedy(lift.pi, epsilon), {"forward": lift.truth},
                        {**audit, "n_noise": n_noise})
    lift = lift_backward_irrelevant(base, pi, b, n_noise, derive_seed(seed, 2))
    return Instance(kind, lift.mdp, lift.pi, lift.b, {"backward": lift.truth}, {**audit, "n_noise": n_noise})
