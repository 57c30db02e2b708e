"""
Count-based tables over the blocks of a partition: behavior policy, projected target policy and
the empirical abstract MDP.
"""
import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from abstraction.partition import Partition
from mdp.dataset import Dataset
from mdp.errors import PartitionError
from mdp.model import MdpModel, PolicyTable
from estimators.constants import SMOOTHING

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BehaviorEstimate:
    policy: PolicyTable             # over blocks
    counts: np.ndarray              # (K, A) visit counts
    unvisited: Tuple[int, ...]      # blocks with no observed step


def block_map(dataset: Dataset, part: Optional[Partition]) -> Tuple[np.ndarray, int]:
    """(block_of over ground states, n_blocks); identity when part is None."""
    if part is None:
        return np.arange(dataset.n_states), dataset.n_states
    if part.n_states != dataset.n_states:
        raise PartitionError(f"partition covers {part.n_states} states, dataset has {dataset.n_states}")
    return part.block_of, part.n_blocks


def _normalize_counts(counts: np.ndarray, smoothing: float) -> np.ndarray:
    """(counts + lambda) / row total; rows with no mass at all become uniform."""
    smoothed = counts + smoothing
    totals = smoothed.sum(axis=-1, keepdims=True)
    width = counts.shape[-1]
    out = np.full_like(smoothed, 1.0 / width, dtype=float)
    np.divide(smoothed, totals, out=out, where=totals > 0)
    return out


def estimate_behavior(dataset: Dataset, part: Optional[Partition] = None,
                      smoothing: float = SMOOTHING) -> BehaviorEstimate:
    """
    Pooled behavior policy over blocks, b_hat(a|x) = (count(x, a) + lambda) / (count(x) + lambda |A|).

    Blocks never visited get a uniform row and are listed in `unvisited`.
    """
    dataset.require_nonempty()
    block_of, n_blocks = block_map(dataset, part)
    steps = dataset.transitions()
    x = block_of[steps["s"]]
    counts = np.bincount(
        x * dataset.n_actions + steps["a"], minlength=n_blocks * dataset.n_actions
    ).reshape(n_blocks, dataset.n_actions).astype(float)
    unvisited = tuple(int(i) for i in np.flatnonzero(counts.sum(axis=1) == 0))
    if unvisited:
        logger.warning(f"{len(unvisited)} block(s) never visited; behavior rows set to uniform")
    probs = _normalize_counts(counts, smoothing)
    probs[list(unvisited)] = 1.0 / dataset.n_actions
    return BehaviorEstimate(PolicyTable(probs), counts, unvisited)


def estimate_behavior_by_step(dataset: Dataset, part: Optional[Partition] = None,
                              smoothing: float = SMOOTHING) -> np.ndarray:
    """Per-time-step behavior tables, shape (horizon, K, A)."""
    dataset.require_nonempty()
    block_of, n_blocks = block_map(dataset, part)
    n_actions = dataset.n_actions
    tables = np.empty((dataset.horizon, n_blocks, n_actions))
    mask = dataset.mask
    for t in range(dataset.horizon):
        alive = mask[:, t]
        x = block_of[dataset.states[alive, t]]
        counts = np.bincount(
            x * n_actions + dataset.actions[alive, t], minlength=n_blocks * n_actions
        ).reshape(n_blocks, n_actions).astype(float)
        tables[t] = _normalize_counts(counts, smoothing)
    return tables


def behavior_drift(dataset: Dataset, part: Optional[Partition] = None, smoothing: float = SMOOTHING) -> float:
    """
    Largest gap between per-step and pooled behavior estimates, over visited (t, block) cells.

    Large values point at a non-stationary offline process.
    """
    pooled = estimate_behavior(dataset, part, smoothing)
    per_step = estimate_behavior_by_step(dataset, part, smoothing)
    block_of, n_blocks = block_map(dataset, part)
    visited = np.zeros((dataset.horizon, n_blocks), dtype=bool)
    mask = dataset.mask
    for t in range(dataset.horizon):
        visited[t, np.unique(block_of[dataset.states[mask[:, t], t]])] = True
    gaps = np.abs(per_step - pooled.policy.probs[None]).max(axis=2)
    return float(gaps[visited].max()) if visited.any() else 0.0


def project_target(dataset: Dataset, pi: PolicyTable, part: Optional[Partition] = None) -> PolicyTable:
    """
    Target policy over blocks, averaging pi(.|s) over the observed visits to each block.

    Unvisited blocks average pi uniformly over their ground states.
    """
    block_of, n_blocks = block_map(dataset, part)
    states = dataset.transitions()["s"]
    x = block_of[states]
    visits = np.bincount(x, minlength=n_blocks).astype(float)
    sums = np.zeros((n_blocks, dataset.n_actions))
    np.add.at(sums, x, pi.probs[states])

    sizes = np.bincount(block_of, minlength=n_blocks).astype(float)
    fallback = np.zeros((n_blocks, dataset.n_actions))
    np.add.at(fallback, block_of, pi.probs)
    fallback /= sizes[:, None]

    probs = fallback.copy()
    seen = visits > 0
    probs[seen] = sums[seen] / visits[seen, None]
    return PolicyTable(probs)


def empirical_mdp(dataset: Dataset, part: Optional[Partition] = None, smoothing: float = SMOOTHING,
                  gamma: float = 0.9) -> MdpModel:
    """
    Maximum-likelihood MDP over blocks with add-lambda smoothing.

    Transition rows are (N(x, a, x') + lambda) / (N(x, a) + lambda K) over steps with a recorded
    successor; rewards are cell means over every step (0 for unobserved cells); the initial
    distribution comes from smoothed first-state counts. Rows without any mass (lambda = 0,
    unobserved) are uniform.

    Args:
        dataset: Offline data
        part: Partition of the ground states (identity when omitted)
        smoothing: Pseudo-count lambda
        gamma: Discount attached to the model

    Returns:
        MdpModel over blocks
    """
    dataset.require_nonempty()
    block_of, n_blocks = block_map(dataset, part)
    n_actions = dataset.n_actions
    steps = dataset.transitions()
    x = block_of[steps["s"]]
    a = steps["a"]

    moves = dataset.transitions(complete=True)
    flat = (block_of[moves["s"]] * n_actions + moves["a"]) * n_blocks + block_of[moves["s_next"]]
    counts = np.bincount(
        flat, minlength=n_blocks * n_actions * n_blocks
    ).reshape(n_blocks, n_actions, n_blocks).astype(float)
    transition = _normalize_counts(counts, smoothing)

    cell = a * n_blocks + x
    cell_counts = np.bincount(cell, minlength=n_actions * n_blocks).astype(float)
    reward_sums = np.bincount(cell, weights=steps["r"], minlength=n_actions * n_blocks)
    reward = np.zeros(n_actions * n_blocks)
    np.divide(reward_sums, cell_counts, out=reward, where=cell_counts > 0)

    first = np.bincount(block_of[dataset.first_states()], minlength=n_blocks).astype(float)
    initial = _normalize_counts(first, smoothing)

    observed = int((cell_counts > 0).sum())
    logger.debug(f"Empirical MDP over {n_blocks} blocks: {observed}/{n_actions * n_blocks} cells observed")
    return MdpModel(
        transition=transition,
        reward=reward.reshape(n_actions, n_blocks),
        initial=initial,
        gamma=gamma,
    )
