"""
Exact (population) values of the four estimating functions, and the abstract nuisances they
take on a partition.

Tables over blocks are indexed [a][x]; pass the partition to evaluate them at phi(s).
"""
import logging
import numbers
from typing import Optional

import numpy as np
from scipy import linalg
from sklearn.utils import check_scalar

from abstraction.partition import Partition
from abstraction.quotient import block_weights
from mdp.model import MdpModel, PolicyTable
from solver.ratios import discounted_visitation, is_ratio
from solver.stationary import stationary_distribution

logger = logging.getLogger(__name__)


def _on_states(table: np.ndarray, part: Optional[Partition]) -> np.ndarray:
    table = np.asarray(table)
    return table if part is None else part.lift(table)


def expected_f1(mdp: MdpModel, pi: PolicyTable, q_table: np.ndarray, part: Optional[Partition] = None) -> float:
    """sum_s rho0(s) sum_a pi(a|s) Q(a, phi(s))."""
    q = _on_states(q_table, part)
    return float(mdp.initial @ np.einsum("sa,as->s", pi.probs, q))


def expected_f2(mdp: MdpModel, pi: PolicyTable, b: PolicyTable, horizon: int,
                ratio: Optional[np.ndarray] = None, part: Optional[Partition] = None) -> float:
    """
    E_b[sum_{t<=T} gamma^(t-1) (prod_{j<=t} rho(A_j, S_j)) R_t] by forward recursion.

    m_1 = rho0; step t adds gamma^(t-1) sum_s m_t(s) sum_a b(a|s) rho(a, s) R(a, s);
    m_{t+1}(s') = sum_s m_t(s) sum_a b(a|s) rho(a, s) T(s'|a, s).

    Args:
        ratio: Per-step ratio table ([a][s], or [a][x] with part); defaults to pi / b
    """
    check_scalar(horizon, "horizon", numbers.Integral, min_val=1)
    rho = is_ratio(pi, b) if ratio is None else _on_states(ratio, part)
    weighted = b.probs * rho.T                              # (s, a)
    step_reward = np.einsum("sa,as->s", weighted, mdp.reward)
    step_kernel = np.einsum("sa,sat->st", weighted, mdp.transition)
    mass = mdp.initial.copy()
    total = 0.0
    for t in range(horizon):
        total += mdp.gamma ** t * float(mass @ step_reward)
        mass = mass @ step_kernel
    return total


def expected_f3(mdp: MdpModel, b: PolicyTable, w_table: np.ndarray, p_inf: Optional[np.ndarray] = None,
                part: Optional[Partition] = None) -> float:
    """(1 - gamma)^-1 sum_{s,a} p_inf(s) b(a|s) w(a, phi(s)) R(a, s)."""
    if p_inf is None:
        p_inf = stationary_distribution(mdp, b)
    w = _on_states(w_table, part)
    joint = (p_inf[:, None] * b.probs).T
    return float(np.sum(joint * w * mdp.reward) / (1.0 - mdp.gamma))


def expected_f4(mdp: MdpModel, pi: PolicyTable, b: PolicyTable, q_table: np.ndarray, w_table: np.ndarray,
                p_inf: Optional[np.ndarray] = None, part: Optional[Partition] = None) -> float:
    """E[f1(Q)] plus the w-weighted Bellman residual of Q under the stationary behavior law."""
    if p_inf is None:
        p_inf = stationary_distribution(mdp, b)
    q = _on_states(q_table, part)
    w = _on_states(w_table, part)
    v = np.einsum("sa,as->s", pi.probs, q)
    residual = mdp.reward + mdp.gamma * np.einsum("sat,t->as", mdp.transition, v) - q
    joint = (p_inf[:, None] * b.probs).T
    augmentation = float(np.sum(joint * w * residual) / (1.0 - mdp.gamma))
    return expected_f1(mdp, pi, q) + augmentation


def abstract_ratio(mdp: MdpModel, pi: PolicyTable, b: PolicyTable, part: Partition,
                   p_inf: Optional[np.ndarray] = None) -> np.ndarray:
    """rho_phi(a, x) = pi_phi(a|x) / b_phi(a|x) with stationary block weights; 0 where b_phi = 0."""
    if p_inf is None:
        p_inf = stationary_distribution(mdp, b)
    weights = block_weights(part, p_inf)
    target = (weights @ pi.probs).T
    behavior = (weights @ b.probs).T
    ratio = np.zeros_like(target)
    np.divide(target, behavior, out=ratio, where=behavior > 0)
    return ratio


def aggregate_w(mdp: MdpModel, pi: PolicyTable, b: PolicyTable, part: Partition,
                p_inf: Optional[np.ndarray] = None, d_pi: Optional[np.ndarray] = None) -> np.ndarray:
    """w_phi(a, x) = sum_{s in x} d^pi(a, s) / sum_{s in x} p_inf(s) b(a|s); 0 off support."""
    if p_inf is None:
        p_inf = stationary_distribution(mdp, b)
    if d_pi is None:
        d_pi = discounted_visitation(mdp, pi)
    indicator = part.indicator()
    visitation = d_pi @ indicator
    mass = (p_inf[:, None] * b.probs).T @ indicator
    w = np.zeros_like(visitation)
    np.divide(visitation, mass, out=w, where=mass > 0)
    return w


def abstract_q_fixed_point(mdp: MdpModel, pi: PolicyTable, b: PolicyTable, part: Partition,
                           p_inf: Optional[np.ndarray] = None) -> np.ndarray:
    """
    Population limit of FQE on a partition.

    Solves Q(a, x) = E[R + gamma sum_a' pi(a'|S') Q(a', phi(S')) | phi(S) = x, A = a] where (S, A) is
    drawn from the stationary behavior law. Cells the behavior never reaches use the stationary
    block weights instead.

    Returns:
        Table [a][x]
    """
    if p_inf is None:
        p_inf = stationary_distribution(mdp, b)
    n_actions, n_blocks = mdp.n_actions, part.n_blocks
    indicator = part.indicator()
    joint = (p_inf[:, None] * b.probs).T                    # (a, s)
    cell_weights = joint[:, None, :] * indicator.T[None]    # (a, x, s)
    mass = cell_weights.sum(axis=2, keepdims=True)
    fallback = np.broadcast_to(block_weights(part, p_inf)[None], cell_weights.shape)
    cell_weights = np.where(mass > 0, cell_weights / np.where(mass > 0, mass, 1.0), fallback)

    mean_reward = np.einsum("axs,as->ax", cell_weights, mdp.reward)
    next_mass = np.einsum("axs,sat->axt", cell_weights, mdp.transition)
    operator = np.einsum("axt,tb,ty->axby", next_mass, pi.probs, indicator)
    size = n_actions * n_blocks
    system = np.eye(size) - mdp.gamma * operator.reshape(size, size)
    q = linalg.solve(system, mean_reward.reshape(-1))
    return q.reshape(n_actions, n_blocks)
