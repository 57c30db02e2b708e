"""
Pytest configuration and shared fixtures for all tests.
"""
import os
import sys
from pathlib import Path

import numpy as np
import pytest

# Add project root to path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

# Experiments in tests write where the test says, never to a user-configured directory
os.environ.pop("OPE_OUTPUT_DIR", None)

from generators.lifts import lift_backward_irrelevant, lift_model_irrelevant  # noqa: E402
from generators.random import random_mdp, random_policy  # noqa: E402
from generators.toy import three_group_toy  # noqa: E402
from mdp.model import MdpModel  # noqa: E402


@pytest.fixture(scope="session")
def two_state_mdp():
    """
    Two states, two actions. Action 0 stays, action 1 switches; reward 1 in state 0, 0 in state 1.
    """
    transition = np.zeros((2, 2, 2))
    transition[0, 0, 0] = transition[1, 0, 1] = 1.0
    transition[0, 1, 1] = transition[1, 1, 0] = 1.0
    reward = np.array([[1.0, 0.0], [1.0, 0.0]])
    return MdpModel(transition=transition, reward=reward, initial=np.array([1.0, 0.0]), gamma=0.9)


@pytest.fixture(scope="session")
def random_instance():
    """Random 5-state, 3-action model with stochastic target and behavior policies."""
    mdp = random_mdp(5, 3, seed=7)
    pi = random_policy(5, 3, seed=8)
    b = random_policy(5, 3, seed=9)
    return mdp, pi, b


@pytest.fixture(scope="session")
def model_lift():
    base = random_mdp(3, 2, seed=11)
    base_pi = random_policy(3, 2, seed=12)
    return lift_model_irrelevant(base, base_pi, n_noise=2, seed=13)


@pytest.fixture(scope="session")
def backward_lift():
    base = random_mdp(3, 2, seed=21)
    pi = random_policy(3, 2, seed=22)
    b = random_policy(3, 2, seed=23)
    return lift_backward_irrelevant(base, pi, b, n_noise=2, seed=24)


@pytest.fixture(scope="session")
def toy():
    """Three-group toy with two values per group (8 states)."""
    return three_group_toy((2, 2, 2), seed=0)

