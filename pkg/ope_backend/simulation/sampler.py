"""
Trajectory simulation and Monte Carlo policy values.
"""
import logging
import numbers
from dataclasses import dataclass
from typing import Iterator, Optional, Tuple

import numpy as np
from sklearn.utils import check_scalar

from mdp.dataset import Dataset
from mdp.model import MdpModel, PolicyTable
from simulation.constants import INIT_MODES, SIM_BATCH
from simulation.rng import trajectory_draws
from solver.ratios import sis_truncation_bound
from solver.stationary import stationary_distribution

logger = logging.getLogger(__name__)

# bound on floats held by one batch's next-state CDF slice
_MAX_BATCH_CELLS = 1 << 22


@dataclass(frozen=True)
class MonteCarloEstimate:
    estimate: float
    stderr: float
    truncation_bound: float
    n: int


def _cdf(probs: np.ndarray) -> np.ndarray:
    cdf = np.cumsum(probs, axis=-1)
    cdf[..., -1] = 1.0
    return cdf


def _draw(cdf_rows: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Inverse-CDF draw, one per row."""
    return (u[:, None] >= cdf_rows).sum(axis=1)


def _batches(mdp: MdpModel, policy: PolicyTable, n: int, horizon: int, seed: int,
             initial: np.ndarray) -> Iterator[Tuple[np.ndarray, ...]]:
    """Yield (states, actions, rewards, next_states) blocks in trajectory order."""
    batch = max(1, min(SIM_BATCH, _MAX_BATCH_CELLS // mdp.n_states))
    initial_cdf = _cdf(initial)
    action_cdf = _cdf(policy.probs)
    next_cdf = _cdf(mdp.transition)
    noise = mdp.reward_noise_std

    for start in range(0, n, batch):
        idx = range(start, min(n, start + batch))
        u0, uniforms, normals = trajectory_draws(seed, idx, horizon)
        size = len(idx)
        states = np.empty((size, horizon), dtype=int)
        actions = np.empty((size, horizon), dtype=int)
        next_states = np.empty((size, horizon), dtype=int)

        s = _draw(np.broadcast_to(initial_cdf, (size, mdp.n_states)), u0)
        for t in range(horizon):
            a = _draw(action_cdf[s], uniforms[:, t, 0])
            s_next = _draw(next_cdf[s, a], uniforms[:, t, 1])
            states[:, t], actions[:, t], next_states[:, t] = s, a, s_next
            s = s_next
        rewards = mdp.reward[actions, states]
        if noise > 0:
            rewards = rewards + noise * normals
        yield states, actions, rewards, next_states


def _initial_distribution(mdp: MdpModel, behavior: PolicyTable, init_mode: str) -> np.ndarray:
    if init_mode not in INIT_MODES:
        raise ValueError(f"init_mode must be one of {INIT_MODES}, got '{init_mode}'")
    if init_mode == "stationary":
        return stationary_distribution(mdp, behavior)
    return mdp.initial


def sample_trajectories(mdp: MdpModel, b: PolicyTable, n: int, horizon: int, seed: int,
                        init_mode: str = "rho0") -> Dataset:
    """
    Simulate n trajectories of length horizon under policy b.

    Args:
        mdp: Model
        b: Policy generating the actions
        n: Number of trajectories
        horizon: Steps per trajectory
        seed: Base seed; trajectory i uses the stream keyed by (seed, i)
        init_mode: "rho0" draws S_1 from the initial distribution, "stationary" from the
            stationary distribution of the chain under b

    Returns:
        Dataset with n full-length trajectories
    """
    check_scalar(n, "n", numbers.Integral, min_val=1)
    check_scalar(horizon, "horizon", numbers.Integral, min_val=1)
    initial = _initial_distribution(mdp, b, init_mode)

    parts = list(_batches(mdp, b, n, horizon, seed, initial))
    states, actions, rewards, next_states = (np.concatenate(arrays) for arrays in zip(*parts))
    logger.debug(f"Simulated {n} trajectories x {horizon} steps (seed={seed}, init={init_mode})")
    return Dataset(
        states=states,
        actions=actions,
        rewards=rewards,
        next_states=next_states,
        lengths=np.full(n, horizon),
        horizon=horizon,
        n_states=mdp.n_states,
        n_actions=mdp.n_actions,
        seed=seed,
    )


def monte_carlo_value(mdp: MdpModel, pi: PolicyTable, n: int, horizon: int, seed: int) -> MonteCarloEstimate:
    """
    Mean truncated discounted return of n rollouts under pi from the initial distribution.

    The truncation bias is at most sis_truncation_bound(mdp, horizon), reported with the estimate.
    """
    check_scalar(n, "n", numbers.Integral, min_val=1)
    check_scalar(horizon, "horizon", numbers.Integral, min_val=1)
    discounts = mdp.gamma ** np.arange(horizon)
    returns = np.concatenate([
        rewards @ discounts for _, _, rewards, _ in _batches(mdp, pi, n, horizon, seed, mdp.initial)
    ])
    stderr = float(returns.std(ddof=1) / np.sqrt(n)) if n > 1 else 0.0
    estimate = MonteCarloEstimate(
        estimate=float(returns.mean()),
        stderr=stderr,
        truncation_bound=sis_truncation_bound(mdp, horizon),
        n=n,
    )
    logger.info(f"Monte Carlo value: {estimate.estimate:.6f} +/- {estimate.stderr:.6f} "
                f"(truncation bound {estimate.truncation_bound:.3e})")
    return estimate
