"""
Policy transformations and the Markov chain a policy induces on an MDP.
"""
import logging
import numbers

import numpy as np
from sklearn.utils import check_scalar

from mdp.model import MdpModel, PolicyTable

logger = logging.getLogger(__name__)


def epsilon_greedy(pi: PolicyTable, epsilon: float) -> PolicyTable:
    """
    Mix the target policy with uniform exploration.

    b(a|s) = (1 - epsilon) * pi(a|s) + epsilon / |A|

    Args:
        pi: Target policy
        epsilon: Exploration weight in [0, 1]

    Returns:
        Behavior policy table
    """
    epsilon = check_scalar(epsilon, "epsilon", numbers.Real, min_val=0.0, max_val=1.0)
    return PolicyTable((1.0 - epsilon) * pi.probs + epsilon / pi.n_actions)


def chain_under_policy(mdp: MdpModel, policy: PolicyTable) -> np.ndarray:
    """State-to-state kernel P[s, s'] = sum_a policy(a|s) T(s'|a, s)."""
    if policy.probs.shape != (mdp.n_states, mdp.n_actions):
        raise ValueError(
            f"policy shape {policy.probs.shape} does not match MDP ({mdp.n_states}, {mdp.n_actions})"
        )
    return np.einsum("sa,sat->st", policy.probs, mdp.transition)
