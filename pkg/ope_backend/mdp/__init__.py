"""
Finite-MDP data model: models, policies, trajectories and validation.
"""
from mdp.model import MdpModel, PolicyTable, ValidationReport, Violation, validate_mdp, validate_policy
from mdp.policy import epsilon_greedy, chain_under_policy
from mdp.dataset import Dataset, Trajectory, Step
from mdp.errors import (
    ValidationError,
    CoverageError,
    ConvergenceError,
    StationarityError,
    PartitionError,
)

__all__ = [
    'MdpModel',
    'PolicyTable',
    'ValidationReport',
    'Violation',
    'validate_mdp',
    'validate_policy',
    'epsilon_greedy',
    'chain_under_policy',
    'Dataset',
    'Trajectory',
    'Step',
    'ValidationError',
    'CoverageError',
    'ConvergenceError',
    'StationarityError',
    'PartitionError',
]
