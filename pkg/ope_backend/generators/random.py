"""
Random MDPs and policies.
"""
import numbers

import numpy as np
from sklearn.utils import check_scalar

from mdp.model import MdpModel, PolicyTable


def random_mdp(n_states: int, n_actions: int, seed: int, transition_concentration: float = 1.0,
               reward_scale: float = 1.0, gamma: float = 0.9, reward_noise_std: float = 0.0) -> MdpModel:
    """
    MDP with Dirichlet(concentration) transition rows and initial distribution, and uniform
    rewards in [-reward_scale, reward_scale].
    """
    check_scalar(n_states, "n_states", numbers.Integral, min_val=1)
    check_scalar(n_actions, "n_actions", numbers.Integral, min_val=1)
    check_scalar(transition_concentration, "transition_concentration", numbers.Real,
                 min_val=0.0, include_boundaries="neither")
    rng = np.random.default_rng(seed)
    alpha = np.full(n_states, float(transition_concentration))
    transition = rng.dirichlet(alpha, size=(n_states, n_actions))
    reward = rng.uniform(-reward_scale, reward_scale, size=(n_actions, n_states))
    initial = rng.dirichlet(np.ones(n_states))
    return MdpModel(transition, reward, initial, gamma, reward_noise_std)


def random_policy(n_states: int, n_actions: int, seed: int, concentration: float = 1.0) -> PolicyTable:
    rng = np.random.default_rng(seed)
    return PolicyTable(rng.dirichlet(np.full(n_actions, float(concentration)), size=n_states))


def random_deterministic_policy(n_states: int, n_actions: int, seed: int) -> PolicyTable:
    rng = np.random.default_rng(seed)
    return PolicyTable.deterministic(rng.integers(n_actions, size=n_states), n_actions)
