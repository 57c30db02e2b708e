"""
Stationary behavior process: chain structure, stationary distribution and the time-reversed
state-action kernel.
"""
import logging
from dataclasses import dataclass
from math import gcd
from typing import Optional, Tuple

import networkx as nx
import numpy as np
from scipy import linalg

from mdp.errors import StationarityError
from mdp.model import MdpModel, PolicyTable
from mdp.policy import chain_under_policy
from solver.constants import STATIONARY_TOL, ZERO_MASS

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ChainStructure:
    """Communicating-class structure of a finite Markov chain."""
    recurrent_classes: Tuple[Tuple[int, ...], ...]
    transient_states: Tuple[int, ...]
    periods: Tuple[int, ...]

    @property
    def unichain(self) -> bool:
        return len(self.recurrent_classes) == 1

    @property
    def periodic(self) -> bool:
        return any(p > 1 for p in self.periods)


def _class_period(graph: nx.DiGraph, members) -> int:
    """Period of a strongly connected class from BFS levels."""
    members = set(members)
    root = min(members)
    levels = {root: 0}
    queue = [root]
    for node in queue:
        for nxt in graph.successors(node):
            if nxt in members and nxt not in levels:
                levels[nxt] = levels[node] + 1
                queue.append(nxt)
    period = 0
    for u in members:
        for v in graph.successors(u):
            if v in members:
                period = gcd(period, levels[u] + 1 - levels[v])
    return abs(period) if period else 1


def chain_structure(chain: np.ndarray) -> ChainStructure:
    """
    Recurrent classes (closed strongly connected components), transient states and periods.

    Args:
        chain: Row-stochastic (S, S) matrix

    Returns:
        ChainStructure with classes sorted by smallest member
    """
    graph = nx.DiGraph()
    graph.add_nodes_from(range(chain.shape[0]))
    graph.add_edges_from(zip(*np.nonzero(chain > 0)))

    recurrent = []
    for component in nx.strongly_connected_components(graph):
        closed = all(v in component for u in component for v in graph.successors(u))
        if closed:
            recurrent.append(tuple(sorted(int(s) for s in component)))
    recurrent.sort()
    in_recurrent = {s for c in recurrent for s in c}
    transient = tuple(s for s in range(chain.shape[0]) if s not in in_recurrent)
    periods = tuple(_class_period(graph, c) for c in recurrent)
    return ChainStructure(tuple(recurrent), transient, periods)


def stationary_of_chain(chain: np.ndarray, structure: Optional[ChainStructure] = None) -> np.ndarray:
    """Unique stationary distribution of a unichain transition matrix."""
    structure = structure or chain_structure(chain)
    if not structure.unichain:
        classes = ", ".join(str(list(c)) for c in structure.recurrent_classes)
        raise StationarityError(
            f"Chain has {len(structure.recurrent_classes)} recurrent classes ({classes}); "
            f"stationary distribution is not unique",
            recurrent_classes=structure.recurrent_classes,
        )
    if structure.periodic:
        logger.warning(
            f"Behavior chain is periodic (period {max(structure.periods)}); using the stationary "
            f"distribution although state marginals need not converge"
        )

    n = chain.shape[0]
    system = np.vstack([chain.T - np.eye(n), np.ones((1, n))])
    rhs = np.zeros(n + 1)
    rhs[-1] = 1.0
    p, *_ = linalg.lstsq(system, rhs)
    p = np.clip(p, 0.0, None)
    p[list(structure.transient_states)] = 0.0
    p /= p.sum()

    residual = float(np.max(np.abs(p @ chain - p)))
    if residual > STATIONARY_TOL:
        logger.warning(f"Stationary distribution residual {residual:.3e} exceeds {STATIONARY_TOL:.1e}")
    return p


def stationary_distribution(mdp: MdpModel, b: PolicyTable) -> np.ndarray:
    """
    Stationary state distribution of the behavior chain.

    Raises:
        StationarityError: the chain has more than one recurrent class
    """
    return stationary_of_chain(chain_under_policy(mdp, b))


def backward_kernel(mdp: MdpModel, b: PolicyTable, p_inf: Optional[np.ndarray] = None) -> np.ndarray:
    """
    Time-reversed state-action kernel under the stationary behavior process.

    B[s', a, s] = p_inf(s) b(a|s) T(s'|a, s) / p_inf(s')

    Rows for states with zero stationary mass have no conditioning event; they are filled with the
    stationary state-action law p_inf(s) b(a|s) and logged.

    Args:
        mdp: Model
        b: Behavior policy
        p_inf: Precomputed stationary distribution (computed when omitted)

    Returns:
        Tensor of shape (S, A, S) whose (a, s) slices sum to one
    """
    if p_inf is None:
        p_inf = stationary_distribution(mdp, b)
    joint = p_inf[:, None] * b.probs                       # (s, a)
    flow = np.einsum("sa,sat->tas", joint, mdp.transition)  # (s', a, s)
    mass = flow.sum(axis=(1, 2))

    kernel = np.empty_like(flow)
    positive = p_inf > ZERO_MASS
    kernel[positive] = flow[positive] / p_inf[positive, None, None]
    if not np.all(positive):
        zero_states = np.flatnonzero(~positive)
        if np.any(mass[zero_states] > ZERO_MASS):
            bad = int(zero_states[np.argmax(mass[zero_states])])
            raise StationarityError(f"State {bad} receives stationary flow but has zero stationary mass")
        logger.warning(
            f"States {zero_states.tolist()} have zero stationary mass; their backward rows use the "
            f"stationary state-action law"
        )
        kernel[~positive] = joint.T[None, :, :]
    return kernel
