"""
Sequential (cumulative) importance sampling.
"""
import logging
from typing import Optional

import numpy as np

from abstraction.partition import Partition
from estimators.constants import SMOOTHING
from estimators.empirical import behavior_drift, block_map, estimate_behavior
from estimators.result import EstimateResult, describe_partition
from mdp.dataset import Dataset
from mdp.errors import CoverageError
from mdp.model import PolicyTable

logger = logging.getLogger(__name__)


def sis(dataset: Dataset, pi: PolicyTable, part: Optional[Partition] = None, gamma: float = 0.9,
        smoothing: float = SMOOTHING, behavior: Optional[PolicyTable] = None) -> EstimateResult:
    """
    J_hat = mean_i sum_t gamma^(t-1) [prod_{j<=t} pi(a_j|s_j) / b_hat(a_j|phi(s_j))] r_t.

    Args:
        dataset: Offline data
        pi: Target policy over ground states
        part: Abstraction for the behavior estimate (ground space when omitted)
        gamma: Discount
        smoothing: Pseudo-count for the behavior estimate
        behavior: Known behavior table over blocks; skips estimation when given

    Returns:
        EstimateResult with effective sample size and weight diagnostics

    Raises:
        CoverageError: estimated behavior probability is zero on a realized action
    """
    dataset.require_nonempty()
    block_of, n_blocks = block_map(dataset, part)
    unvisited = 0
    if behavior is None:
        fitted = estimate_behavior(dataset, part, smoothing)
        behavior = fitted.policy
        unvisited = len(fitted.unvisited)
    elif behavior.probs.shape != (n_blocks, dataset.n_actions):
        raise ValueError(f"behavior table shape {behavior.probs.shape} does not match ({n_blocks}, {dataset.n_actions})")

    mask = dataset.mask
    blocks = block_of[dataset.states]
    b_taken = behavior.probs[blocks, dataset.actions]
    zero = mask & (b_taken <= 0)
    if np.any(zero):
        i, t = (int(v) for v in np.argwhere(zero)[0])
        x, a = int(blocks[i, t]), int(dataset.actions[i, t])
        raise CoverageError(
            f"Behavior estimate b_hat({a}|{x}) = 0 on a realized action (trajectory {i}, step {t})",
            action=a,
            state=x,
        )

    ratio = np.ones_like(b_taken)
    pi_taken = pi.probs[dataset.states, dataset.actions]
    np.divide(pi_taken, b_taken, out=ratio, where=mask)
    weights = np.cumprod(ratio, axis=1)
    discounts = gamma ** np.arange(dataset.horizon)
    per_trajectory = (weights * dataset.rewards * discounts * mask).sum(axis=1)
    estimate = float(per_trajectory.mean())

    final = weights[np.arange(dataset.n_trajectories), np.maximum(dataset.lengths - 1, 0)]
    ess = float(final.sum() ** 2 / np.sum(final ** 2)) if np.any(final > 0) else 0.0
    diagnostics = {
        "effective_sample_size": ess,
        "max_weight": float(final.max()),
        "unvisited_blocks": unvisited,
        "behavior_drift": behavior_drift(dataset, part, smoothing),
    }
    logger.info(f"SIS ({describe_partition(part)}): J_hat = {estimate:.6f}, ESS = {ess:.1f}")
    return EstimateResult(
        method="sis",
        abstraction=describe_partition(part),
        estimate=estimate,
        n_trajectories=dataset.n_trajectories,
        diagnostics=diagnostics,
    )
