"""
SolveCache: every exact quantity for an (MDP, pi, b) triple, computed once.
"""
import logging
from dataclasses import dataclass
from typing import Any, Dict

import numpy as np

from mdp.model import MdpModel, PolicyTable
from mdp.policy import chain_under_policy
from solver.ratios import discounted_visitation, is_ratio, mis_ratio
from solver.stationary import backward_kernel, chain_structure, stationary_of_chain
from solver.value import policy_value, q_function, state_values

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SolveCache:
    q: np.ndarray         # [a][s]
    v: np.ndarray         # [s]
    j_pi: float
    rho: np.ndarray       # [a][s]
    p_inf: np.ndarray     # [s]
    d_pi: np.ndarray      # [a][s]
    w: np.ndarray         # [a][s]
    backward: np.ndarray  # [s'][a][s]
    periodic: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return {
            "j_pi": self.j_pi,
            "periodic": self.periodic,
            "q": self.q.tolist(),
            "v": self.v.tolist(),
            "rho": self.rho.tolist(),
            "p_inf": self.p_inf.tolist(),
            "d_pi": self.d_pi.tolist(),
            "w": self.w.tolist(),
            "backward": self.backward.tolist(),
        }


def solve(mdp: MdpModel, pi: PolicyTable, b: PolicyTable) -> SolveCache:
    """
    Compute Q, V, J, rho, p_inf, d^pi, w and the backward kernel.

    Raises:
        CoverageError: b does not cover pi
        StationarityError: behavior chain is not unichain
    """
    q = q_function(mdp, pi)
    chain = chain_under_policy(mdp, b)
    structure = chain_structure(chain)
    p_inf = stationary_of_chain(chain, structure)
    d_pi = discounted_visitation(mdp, pi)
    cache = SolveCache(
        q=q,
        v=state_values(pi, q),
        j_pi=policy_value(mdp, pi, q),
        rho=is_ratio(pi, b),
        p_inf=p_inf,
        d_pi=d_pi,
        w=mis_ratio(mdp, pi, b, p_inf=p_inf, d_pi=d_pi),
        backward=backward_kernel(mdp, b, p_inf=p_inf),
        periodic=structure.periodic,
    )
    logger.info(f"Solved {mdp.n_states}-state MDP: J(pi) = {cache.j_pi:.6f}")
    return cache
