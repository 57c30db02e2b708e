"""
Offline data simulation and Monte Carlo value oracles.
"""
from simulation.sampler import sample_trajectories, monte_carlo_value, MonteCarloEstimate
from simulation.rng import trajectory_stream, trajectory_draws, derive_seed

__all__ = [
    'sample_trajectories',
    'monte_carlo_value',
    'MonteCarloEstimate',
    'trajectory_stream',
    'trajectory_draws',
    'derive_seed',
]
