"""
Discounted visitation, importance-sampling ratios and the SIS truncation bound.
"""
import logging
import numbers
from typing import Optional

import numpy as np
from scipy import linalg
from sklearn.utils import check_scalar

from mdp.errors import CoverageError
from mdp.model import MdpModel, PolicyTable
from mdp.policy import chain_under_policy
from solver.constants import ZERO_MASS
from solver.stationary import stationary_distribution

logger = logging.getLogger(__name__)


def discounted_visitation(mdp: MdpModel, pi: PolicyTable) -> np.ndarray:
    """
    Normalized discounted state-action visitation under pi.

    Solves d = (1 - gamma) rho0 + gamma P_pi^T d for the state part, then d(a, s) = d(s) pi(a|s).

    Returns:
        Table indexed [a][s], summing to one
    """
    chain = chain_under_policy(mdp, pi)
    system = np.eye(mdp.n_states) - mdp.gamma * chain.T
    d_state = linalg.solve(system, (1.0 - mdp.gamma) * mdp.initial)
    total = float(d_state.sum())
    if abs(total - 1.0) > 1e-10:
        logger.warning(f"Discounted visitation sums to {total:.12f}; linear solve lost accuracy")
    return (d_state[:, None] * pi.probs).T


def is_ratio(pi: PolicyTable, b: PolicyTable) -> np.ndarray:
    """
    Per-step importance ratio rho(a, s) = pi(a|s) / b(a|s).

    Pairs with pi = b = 0 get ratio 0.

    Raises:
        CoverageError: pi(a|s) > 0 where b(a|s) = 0
    """
    if pi.probs.shape != b.probs.shape:
        raise ValueError(f"policy shapes differ: {pi.probs.shape} vs {b.probs.shape}")
    target, behavior = pi.probs.T, b.probs.T
    uncovered = (behavior == 0) & (target > 0)
    if np.any(uncovered):
        a, s = (int(i) for i in np.argwhere(uncovered)[0])
        raise CoverageError(
            f"Behavior policy does not cover target: pi({a}|{s}) = {target[a, s]:.6g} but b({a}|{s}) = 0",
            action=a,
            state=s,
        )
    both_zero = (behavior == 0) & (target == 0)
    if np.any(both_zero):
        logger.debug(f"{int(both_zero.sum())} state-action pair(s) with pi = b = 0 get ratio 0")
    ratio = np.zeros_like(target)
    np.divide(target, behavior, out=ratio, where=behavior > 0)
    return ratio


def mis_ratio(mdp: MdpModel, pi: PolicyTable, b: PolicyTable, p_inf: Optional[np.ndarray] = None,
              d_pi: Optional[np.ndarray] = None) -> np.ndarray:
    """
    Marginalized importance ratio w(a, s) = d^pi(a, s) / (p_inf(s) b(a|s)).

    Args:
        mdp: Model
        pi: Target policy
        b: Behavior policy
        p_inf: Stationary distribution of the behavior chain (computed when omitted)
        d_pi: Discounted visitation under pi (computed when omitted)

    Returns:
        Table indexed [a][s]; pairs with no visitation and no behavior mass get 0

    Raises:
        CoverageError: visitation where the stationary behavior law has no mass
    """
    if p_inf is None:
        p_inf = stationary_distribution(mdp, b)
    if d_pi is None:
        d_pi = discounted_visitation(mdp, pi)
    denominator = p_inf[None, :] * b.probs.T
    visited = d_pi > ZERO_MASS
    support = denominator > 0
    uncovered = visited & ~support
    if np.any(uncovered):
        a, s = (int(i) for i in np.argwhere(uncovered)[0])
        raise CoverageError(
            f"Visitation d({a}, {s}) = {d_pi[a, s]:.3e} outside the stationary behavior support",
            action=a,
            state=s,
        )
    w = np.zeros_like(d_pi)
    np.divide(d_pi, denominator, out=w, where=support)
    w[~visited & ~support] = 0.0
    return w


def sis_truncation_bound(mdp: MdpModel, horizon: int) -> float:
    """gamma^T * max|R| / (1 - gamma): worst-case tail lost by truncating returns at T steps."""
    check_scalar(horizon, "horizon", numbers.Integral, min_val=0)
    return float(mdp.gamma ** horizon * mdp.max_abs_reward / (1.0 - mdp.gamma))
