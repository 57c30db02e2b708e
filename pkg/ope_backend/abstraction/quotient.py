"""
Quotient MDPs over a partition.

States inside a block are weighted by the behavior stationary distribution,
omega[x, s] = p_inf(s) / sum_{s~ in x} p_inf(s~). Both projected policies use the same weights, so
pi_phi / b_phi is the b-weighted block average of the ground ratio. The initial distribution is
pushed forward through the partition.
"""
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from abstraction.partition import Partition
from mdp.errors import PartitionError, StationarityError
from mdp.model import MdpModel, PolicyTable
from solver.stationary import stationary_distribution

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class QuotientModel:
    mdp: MdpModel
    pi: PolicyTable
    b: PolicyTable
    weights: np.ndarray   # omega[x, s]
    partition: Partition


def block_weights(part: Partition, p_inf: np.ndarray) -> np.ndarray:
    """
    Within-block conditional weights omega[x, s].

    Raises:
        StationarityError: a block has zero total stationary mass
    """
    mass = np.bincount(part.block_of, weights=p_inf, minlength=part.n_blocks)
    empty = np.flatnonzero(mass <= 0)
    if empty.size:
        raise StationarityError(
            f"Block(s) {empty.tolist()} have zero total stationary mass; quotient weights undefined"
        )
    return part.indicator().T * p_inf[None, :] / mass[:, None]


def project_policy(policy: PolicyTable, weights: np.ndarray) -> PolicyTable:
    """pi_phi(a|x) = sum_s omega[x, s] pi(a|s)."""
    return PolicyTable(weights @ policy.probs)


def quotient_mdp(mdp: MdpModel, part: Partition, pi: PolicyTable, b: PolicyTable,
                 p_inf: Optional[np.ndarray] = None, weights: Optional[np.ndarray] = None) -> QuotientModel:
    """
    Abstract MDP over the blocks of a partition.

    Args:
        mdp: Ground model
        part: Partition of the ground states
        pi: Target policy
        b: Behavior policy
        p_inf: Behavior stationary distribution (computed when omitted)
        weights: Explicit omega[x, s]; overrides the stationary weighting

    Returns:
        QuotientModel
    """
    if part.n_states != mdp.n_states:
        raise PartitionError(f"partition covers {part.n_states} states, model has {mdp.n_states}")
    if weights is None:
        if p_inf is None:
            p_inf = stationary_distribution(mdp, b)
        weights = block_weights(part, p_inf)
    indicator = part.indicator()

    transition = np.einsum("xs,sat,ty->xay", weights, mdp.transition, indicator)
    transition /= transition.sum(axis=2, keepdims=True)
    abstract = MdpModel(
        transition=transition,
        reward=mdp.reward @ weights.T,
        initial=indicator.T @ mdp.initial,
        gamma=mdp.gamma,
        reward_noise_std=mdp.reward_noise_std,
    )
    logger.debug(f"Quotient MDP: {mdp.n_states} -> {part.n_blocks} states")
    return QuotientModel(
        mdp=abstract,
        pi=project_policy(pi, weights),
        b=project_policy(b, weights),
        weights=weights,
        partition=part,
    )
