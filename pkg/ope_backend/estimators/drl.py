"""
Doubly robust estimation combining fitted Q and marginalized ratios, with cross-fitting.
"""
import logging
from typing import Optional

import numpy as np

from abstraction.partition import Partition
from estimators.constants import DRL_FOLDS, FQE_MAX_ITER, FQE_TOL, SMOOTHING
from estimators.empirical import block_map
from estimators.fqe import fit_fqe, initial_value
from estimators.mis import fit_mis_weights
from estimators.result import EstimateResult, describe_partition
from mdp.dataset import Dataset
from mdp.model import PolicyTable

logger = logging.getLogger(__name__)


def doubly_robust_value(dataset: Dataset, pi: PolicyTable, block_of: np.ndarray, q: np.ndarray,
                        w: np.ndarray, gamma: float) -> float:
    """
    Plug-in of E[f4(Q, w)] on one dataset.

    mean_i sum_a pi(a|s_i1) Q(a, phi(s_i1))
      + (1 - gamma)^-1 mean over steps of w(a, phi(s)) [r + gamma sum_a' pi(a'|s') Q(a', phi(s')) - Q(a, phi(s))]

    The mean runs over steps with a recorded successor; with none the initial term stands alone.
    """
    steps = dataset.transitions(complete=True)
    if steps["s"].size == 0:
        return initial_value(dataset, pi, block_of, q)
    x = block_of[steps["s"]]
    x_next = block_of[steps["s_next"]]
    v_next = np.einsum("na,an->n", pi.probs[steps["s_next"]], q[:, x_next])
    residual = steps["r"] + gamma * v_next - q[steps["a"], x]
    augmentation = np.mean(w[steps["a"], x] * residual) / (1.0 - gamma)
    return initial_value(dataset, pi, block_of, q) + float(augmentation)


def drl(dataset: Dataset, pi: PolicyTable, part: Optional[Partition] = None, gamma: float = 0.9,
        smoothing: float = SMOOTHING, folds: int = DRL_FOLDS, q_table: Optional[np.ndarray] = None,
        w_table: Optional[np.ndarray] = None, iters: int = FQE_MAX_ITER, tol: float = FQE_TOL) -> EstimateResult:
    """
    Cross-fitted doubly robust estimate of J(pi).

    Trajectory i belongs to fold i mod folds; nuisances for each fold are fitted on the other folds
    and the fold estimates are averaged with trajectory-count weights. With fewer trajectories than
    folds the nuisances are fitted on all data.

    Args:
        dataset: Offline data
        pi: Target policy over ground states
        part: Abstraction (ground space when omitted)
        gamma: Discount
        smoothing: Pseudo-count for the MIS model
        folds: Number of cross-fitting folds
        q_table: Fixed Q over blocks [a][x], replacing FQE
        w_table: Fixed ratio over blocks [a][x], replacing MIS

    Returns:
        EstimateResult with per-fold estimates
    """
    dataset.require_nonempty()
    block_of, n_blocks = block_map(dataset, part)
    expected = (dataset.n_actions, n_blocks)
    for name, table in (("q_table", q_table), ("w_table", w_table)):
        if table is not None and np.shape(table) != expected:
            raise ValueError(f"{name} must have shape {expected}, got {np.shape(table)}")

    n = dataset.n_trajectories
    cross_fit = folds > 1 and n >= folds
    if not cross_fit:
        if folds > 1:
            logger.warning(f"DRL: {n} trajectories for {folds} folds, fitting nuisances without cross-fitting")
        folds = 1
    fold_of = np.arange(n) % folds

    fold_estimates = []
    fold_sizes = []
    for k in range(folds):
        evaluate = dataset.subset(np.flatnonzero(fold_of == k))
        train = dataset.subset(np.flatnonzero(fold_of != k)) if cross_fit else dataset
        q = q_table if q_table is not None else fit_fqe(train, pi, part, gamma, iters, tol).q
        w = w_table if w_table is not None else fit_mis_weights(train, pi, part, gamma, smoothing).w
        fold_estimates.append(doubly_robust_value(evaluate, pi, block_of, np.asarray(q), np.asarray(w), gamma))
        fold_sizes.append(evaluate.n_trajectories)

    estimate = float(np.average(fold_estimates, weights=fold_sizes))
    logger.info(f"DRL ({describe_partition(part)}): J_hat = {estimate:.6f} over {folds} fold(s)")
    return EstimateResult(
        method="drl",
        abstraction=describe_partition(part),
        estimate=estimate,
        n_trajectories=n,
        diagnostics={"folds": folds, "cross_fitted": cross_fit, "fold_estimates": fold_estimates},
    )
