"""
Tabular fitted-Q evaluation over the blocks of a partition.
"""
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from abstraction.partition import Partition
from estimators.constants import FQE_MAX_ITER, FQE_TOL
from estimators.empirical import block_map
from estimators.result import EstimateResult, describe_partition
from mdp.dataset import Dataset
from mdp.errors import ConvergenceError
from mdp.model import PolicyTable

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FqeFit:
    q: np.ndarray          # [a][x]
    iterations: int
    residual: float
    empty_cells: int


def fit_fqe(dataset: Dataset, pi: PolicyTable, part: Optional[Partition], gamma: float,
            iters: int = FQE_MAX_ITER, tol: float = FQE_TOL) -> FqeFit:
    """
    Iterate Q_{k+1}(x, a) = mean over steps in cell (x, a) of r + gamma * sum_a' pi(a'|s') Q_k(phi(s'), a').

    Target weights are the ground pi at the observed next state. Reward means use every step of a
    cell, the bootstrap term averages over the cell's steps with a recorded successor (none: the
    cell is treated as terminal). Cells with no data keep their previous iterate (zero).

    Raises:
        ConvergenceError: sup-norm change still above tol after iters iterations
    """
    dataset.require_nonempty()
    block_of, n_blocks = block_map(dataset, part)
    n_actions = dataset.n_actions
    size = n_actions * n_blocks
    steps = dataset.transitions()
    cell = steps["a"] * n_blocks + block_of[steps["s"]]
    counts = np.bincount(cell, minlength=size).astype(float)
    visited = counts > 0
    mean_reward = np.zeros(size)
    np.divide(np.bincount(cell, weights=steps["r"], minlength=size), counts, out=mean_reward, where=visited)

    moves = dataset.transitions(complete=True)
    move_cell = moves["a"] * n_blocks + block_of[moves["s"]]
    x_next = block_of[moves["s_next"]]
    pi_next = pi.probs[moves["s_next"]]                     # (N, A)
    move_counts = np.bincount(move_cell, minlength=size).astype(float)

    # per-cell average of pi(a'|s') at next block y, as an (A*K, A*K) operator on Q
    next_cols = np.arange(n_actions)[None, :] * n_blocks + x_next[:, None]   # (N, A)
    flat = (move_cell[:, None] * size + next_cols).reshape(-1)
    operator = np.bincount(flat, weights=pi_next.reshape(-1), minlength=size * size).reshape(size, size)
    moved = move_counts > 0
    operator[moved] /= move_counts[moved, None]

    q = np.zeros(size)
    delta = np.inf
    for iteration in range(1, iters + 1):
        q_next = np.where(visited, mean_reward + gamma * (operator @ q), q)
        delta = float(np.max(np.abs(q_next - q)))
        q = q_next
        if delta <= tol:
            break
    else:
        raise ConvergenceError(
            f"FQE did not converge within {iters} iterations (last change {delta:.3e})",
            iterations=iters,
            residual=delta,
        )
    empty = int((~visited).sum())
    if empty:
        logger.debug(f"FQE: {empty} of {size} (block, action) cells have no data")
    return FqeFit(q.reshape(n_actions, n_blocks), iteration, delta, empty)


def initial_value(dataset: Dataset, pi: PolicyTable, block_of: np.ndarray, q: np.ndarray) -> float:
    """Plug-in of E[sum_a pi(a|S_1) Q(a, phi(S_1))] at the empirical initial distribution."""
    first = dataset.first_states()
    return float(np.mean(np.einsum("na,an->n", pi.probs[first], q[:, block_of[first]])))


def fqe(dataset: Dataset, pi: PolicyTable, part: Optional[Partition] = None, gamma: float = 0.9,
        iters: int = FQE_MAX_ITER, tol: float = FQE_TOL) -> EstimateResult:
    """
    Fitted-Q evaluation estimate of J(pi).

    Args:
        dataset: Offline data
        pi: Target policy over ground states
        part: Abstraction (ground space when omitted)
        gamma: Discount
        iters: Iteration budget
        tol: Convergence tolerance on the sup-norm change

    Returns:
        EstimateResult with iteration count, residual and empty-cell diagnostics
    """
    fit = fit_fqe(dataset, pi, part, gamma, iters, tol)
    block_of, _ = block_map(dataset, part)
    estimate = initial_value(dataset, pi, block_of, fit.q)
    logger.info(f"FQE ({describe_partition(part)}): J_hat = {estimate:.6f} after {fit.iterations} iterations")
    return EstimateResult(
        method="fqe",
        abstraction=describe_partition(part),
        estimate=estimate,
        n_trajectories=dataset.n_trajectories,
        diagnostics={"iterations": fit.iterations, "residual": fit.residual, "empty_cells": fit.empty_cells},
    )
