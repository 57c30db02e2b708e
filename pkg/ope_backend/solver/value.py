"""
Policy evaluation: Q-function, state values and the policy value J(pi).
"""
import logging
import numbers

import numpy as np
from scipy import linalg
from sklearn.utils import check_scalar

from mdp.errors import ConvergenceError
from mdp.model import MdpModel, PolicyTable
from solver.constants import LINEAR_SOLVE_MAX, SOLVER_TOL, SOLVER_MAX_ITER

logger = logging.getLogger(__name__)

_METHODS = ("auto", "linear", "iterative")


def _check_shapes(mdp: MdpModel, pi: PolicyTable):
    if pi.probs.shape != (mdp.n_states, mdp.n_actions):
        raise ValueError(
            f"policy shape {pi.probs.shape} does not match MDP ({mdp.n_states}, {mdp.n_actions})"
        )


def state_values(pi: PolicyTable, q: np.ndarray) -> np.ndarray:
    """V(s) = sum_a pi(a|s) Q(a, s)."""
    return np.einsum("sa,as->s", pi.probs, q)


def bellman_backup(mdp: MdpModel, pi: PolicyTable, q: np.ndarray) -> np.ndarray:
    """One application of the evaluation operator, returned as an [a][s] table."""
    v = state_values(pi, q)
    return mdp.reward + mdp.gamma * np.einsum("sat,t->as", mdp.transition, v)


def bellman_residual(mdp: MdpModel, pi: PolicyTable, q: np.ndarray) -> float:
    """Sup-norm of Q - B^pi Q."""
    return float(np.max(np.abs(q - bellman_backup(mdp, pi, q))))


def _q_linear(mdp: MdpModel, pi: PolicyTable) -> np.ndarray:
    n_states, n_actions = mdp.n_states, mdp.n_actions
    # unknowns ordered as Q.flatten() with Q of shape (A, S)
    t_as = mdp.transition.transpose(1, 0, 2).reshape(n_actions * n_states, n_states)
    pi_map = np.zeros((n_states, n_actions * n_states))
    s_idx = np.repeat(np.arange(n_states), n_actions)
    a_idx = np.tile(np.arange(n_actions), n_states)
    pi_map[s_idx, a_idx * n_states + s_idx] = pi.probs[s_idx, a_idx]
    system = np.eye(n_actions * n_states) - mdp.gamma * (t_as @ pi_map)
    q = linalg.solve(system, mdp.reward.reshape(-1))
    return q.reshape(n_actions, n_states)


def _q_iterative(mdp: MdpModel, pi: PolicyTable, tol: float, max_iter: int) -> np.ndarray:
    q = np.zeros((mdp.n_actions, mdp.n_states))
    delta = np.inf
    for iteration in range(1, max_iter + 1):
        q_next = bellman_backup(mdp, pi, q)
        delta = float(np.max(np.abs(q_next - q)))
        q = q_next
        # residual of the new iterate is bounded by gamma * delta
        if mdp.gamma * delta <= tol:
            logger.debug(f"Value iteration converged in {iteration} iterations (delta={delta:.3e})")
            return q
    raise ConvergenceError(
        f"Value iteration did not converge within {max_iter} iterations (last residual bound "
        f"{mdp.gamma * delta:.3e} > tol {tol:.3e})",
        iterations=max_iter,
        residual=mdp.gamma * delta,
    )


def q_function(mdp: MdpModel, pi: PolicyTable, tol: float = SOLVER_TOL,
               max_iter: int = SOLVER_MAX_ITER, method: str = "auto") -> np.ndarray:
    """
    Solve the Bellman evaluation equation for Q^pi.

    Args:
        mdp: Model
        pi: Target policy
        tol: Bellman residual target (sup-norm)
        max_iter: Iteration budget for value iteration
        method: "linear", "iterative", or "auto" (direct solve when |S|*|A| is small enough)

    Returns:
        Q table indexed [a][s]

    Raises:
        ConvergenceError: value iteration ran out of iterations
    """
    _check_shapes(mdp, pi)
    check_scalar(tol, "tol", numbers.Real, min_val=0.0, include_boundaries="neither")
    check_scalar(max_iter, "max_iter", numbers.Integral, min_val=1)
    if method not in _METHODS:
        raise ValueError(f"method must be one of {_METHODS}, got '{method}'")

    size = mdp.n_states * mdp.n_actions
    if method == "linear" or (method == "auto" and size <= LINEAR_SOLVE_MAX):
        q = _q_linear(mdp, pi)
        logger.debug(f"Q solved directly ({size} unknowns)")
    else:
        q = _q_iterative(mdp, pi, tol, max_iter)
    return q


def policy_value(mdp: MdpModel, pi: PolicyTable, q: np.ndarray = None) -> float:
    """J(pi) = sum_s rho0(s) sum_a pi(a|s) Q^pi(a, s)."""
    if q is None:
        q = q_function(mdp, pi)
    return float(mdp.initial @ state_values(pi, q))
