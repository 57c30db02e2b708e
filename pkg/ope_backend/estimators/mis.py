"""
Marginalized importance sampling with model-based ratio estimates.

The ratio w_phi is computed exactly on the empirical abstract MDP: discounted visitation of the
projected target policy over the stationary distribution of the estimated behavior chain.
"""
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from abstraction.partition import Partition
from estimators.constants import SMOOTHING
from estimators.empirical import block_map, empirical_mdp, estimate_behavior, project_target
from estimators.result import EstimateResult, describe_partition
from mdp.dataset import Dataset
from mdp.model import MdpModel, PolicyTable
from solver.ratios import discounted_visitation, mis_ratio
from solver.stationary import stationary_distribution

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MisFit:
    w: np.ndarray         # [a][x]
    model: MdpModel       # empirical abstract MDP
    p_inf: np.ndarray     # stationary distribution of the estimated behavior chain


def fit_mis_weights(dataset: Dataset, pi: PolicyTable, part: Optional[Partition], gamma: float,
                    smoothing: float = SMOOTHING, initial: Optional[np.ndarray] = None) -> MisFit:
    """
    Estimate w_phi(a, x) on the empirical abstract MDP.

    Args:
        initial: Known ground initial distribution; replaces the empirical first-state
            distribution when given

    Raises:
        StationarityError: the estimated behavior chain has several recurrent classes
    """
    block_of, n_blocks = block_map(dataset, part)
    model = empirical_mdp(dataset, part, smoothing, gamma=gamma)
    if initial is not None:
        model = model.with_initial(np.bincount(block_of, weights=initial, minlength=n_blocks))
    behavior = estimate_behavior(dataset, part, smoothing).policy
    target = project_target(dataset, pi, part)
    p_inf = stationary_distribution(model, behavior)
    d_pi = discounted_visitation(model, target)
    w = mis_ratio(model, target, behavior, p_inf=p_inf, d_pi=d_pi)
    return MisFit(w, model, p_inf)


def mis(dataset: Dataset, pi: PolicyTable, part: Optional[Partition] = None, gamma: float = 0.9,
        smoothing: float = SMOOTHING, initial: Optional[np.ndarray] = None) -> EstimateResult:
    """
    J_hat = (1 - gamma)^-1 * mean over observed steps of w_phi(a, phi(s)) * r.

    Returns:
        EstimateResult with the mean fitted weight over the data (near 1 when the data are
        stationary) and the largest weight
    """
    dataset.require_nonempty()
    block_of, _ = block_map(dataset, part)
    fit = fit_mis_weights(dataset, pi, part, gamma, smoothing, initial)
    steps = dataset.transitions()
    weights = fit.w[steps["a"], block_of[steps["s"]]]
    estimate = float(np.mean(weights * steps["r"]) / (1.0 - gamma))
    diagnostics = {
        "mean_weight": float(weights.mean()),
        "max_weight": float(fit.w.max()),
        "n_blocks": int(fit.model.n_states),
    }
    logger.info(f"MIS ({describe_partition(part)}): J_hat = {estimate:.6f}, mean weight {diagnostics['mean_weight']:.3f}")
    return EstimateResult(
        method="mis",
        abstraction=describe_partition(part),
        estimate=estimate,
        n_trajectories=dataset.n_trajectories,
        diagnostics=diagnostics,
    )
