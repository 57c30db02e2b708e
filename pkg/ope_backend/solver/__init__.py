"""
Exact solvers for value functions, ratios, stationary and visitation distributions.
"""
from solver.value import q_function, policy_value, state_values, bellman_backup, bellman_residual
from solver.stationary import (
    ChainStructure,
    chain_structure,
    stationary_of_chain,
    stationary_distribution,
    backward_kernel,
)
from solver.ratios import discounted_visitation, is_ratio, mis_ratio, sis_truncation_bound
from solver.cache import SolveCache, solve

__all__ = [
    'q_function',
    'policy_value',
    'state_values',
    'bellman_backup',
    'bellman_residual',
    'ChainStructure',
    'chain_structure',
    'stationary_of_chain',
    'stationary_distribution',
    'backward_kernel',
    'discounted_visitation',
    'is_ratio',
    'mis_ratio',
    'sis_truncation_bound',
    'SolveCache',
    'solve',
]
