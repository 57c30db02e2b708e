"""
Three-group toy MDP with known forward, backward and two-step abstractions.

State variables (G1, G2, G3) plus an optional noise coordinate U:
    - reward depends on (a, G1) only
    - G2 moves from (G2, a); the new G1 is then drawn from the new G2
    - G3 and U evolve on their own, independent of actions
    - the target policy ignores the state; the behavior policy depends on (G2, G3)

State index: s = ((g1 * G2 + g2) * G3 + g3) * U + u.
"""
import logging
import numbers
from dataclasses import dataclass, field
from typing import Dict, Tuple

import numpy as np
from sklearn.utils import check_scalar

from abstraction.partition import Partition
from mdp.model import MdpModel, PolicyTable

logger = logging.getLogger(__name__)

# Within-step causal order realized as one composed kernel: G2 first, then G1 from the new G2.
TOY_FACTORIZATION = "g2-then-g1"


@dataclass(frozen=True)
class ToyInstance:
    mdp: MdpModel
    pi: PolicyTable
    b: PolicyTable
    forward: Partition
    backward: Partition
    two_step: Partition
    sizes: Tuple[int, int, int]
    n_noise: int = 1
    factorization: str = TOY_FACTORIZATION
    meta: Dict = field(default_factory=dict)

    def expected(self) -> Dict[str, Partition]:
        return {"forward": self.forward, "backward": self.backward, "two-step": self.two_step}

    def to_audit(self) -> dict:
        return {
            "kind": "toy",
            "sizes": list(self.sizes),
            "n_noise": self.n_noise,
            "factorization": self.factorization,
            "expected_blocks": {name: part.n_blocks for name, part in self.expected().items()},
            **self.meta,
        }


def _grid(sizes: Tuple[int, int, int], n_noise: int) -> np.ndarray:
    """(S, 4) array of (g1, g2, g3, u) per state index."""
    shape = (*sizes, n_noise)
    return np.stack(np.unravel_index(np.arange(int(np.prod(shape))), shape), axis=1)


def three_group_toy(sizes: Tuple[int, int, int] = (2, 2, 2), seed: int = 0, epsilon: float = 0.3,
                    n_noise: int = 1, gamma: float = 0.9, reward_noise_std: float = 0.0) -> ToyInstance:
    """
    Build the toy MDP.

    Args:
        sizes: Number of values of G1, G2, G3 (each >= 2)
        seed: RNG seed
        epsilon: Weight of the (G2, G3)-dependent exploration in the behavior policy
        n_noise: Size of the irrelevant noise coordinate
        gamma: Discount
        reward_noise_std: Gaussian reward noise used by the simulator

    Returns:
        ToyInstance with expected partitions forward = G1 x G2, backward = G2 x G3, two-step = G2
    """
    n1, n2, n3 = (int(size) for size in sizes)
    for name, size in zip(("g1", "g2", "g3"), (n1, n2, n3)):
        check_scalar(size, f"size of {name}", numbers.Integral, min_val=2)
    check_scalar(n_noise, "n_noise", numbers.Integral, min_val=1)
    check_scalar(epsilon, "epsilon", numbers.Real, min_val=0.0, max_val=1.0, include_boundaries="right")

    rng = np.random.default_rng(seed)
    n_actions = 2
    reward_g1 = rng.uniform(-1.0, 1.0, size=(n_actions, n1))                  # R[a, g1]
    move_g2 = rng.dirichlet(np.ones(n2), size=(n2, n_actions))                # P2[g2, a, g2']
    emit_g1 = rng.dirichlet(np.ones(n1), size=n2)                             # f[g2', g1']
    move_g3 = rng.dirichlet(np.ones(n3), size=n3)                             # P3[g3, g3']
    move_u = rng.dirichlet(np.ones(n_noise), size=n_noise)                    # Pu[u, u']
    target = rng.dirichlet(np.ones(n_actions))
    explore = rng.dirichlet(np.ones(n_actions), size=(n2, n3))                # e[g2, g3, a]

    grid = _grid((n1, n2, n3), n_noise)
    g1, g2, g3, u = grid.T

    # T[s, a, s'] = P2[g2, a, g2'] f[g2', g1'] P3[g3, g3'] Pu[u, u']
    transition = np.einsum("iay,yk,jz,wv->ijwakyzv", move_g2, emit_g1, move_g3, move_u)
    # axes (g2, g3, u, a, g1', g2', g3', u') -> [s, a, s'] with g1 broadcast
    transition = np.broadcast_to(transition[None], (n1, *transition.shape))
    transition = transition.reshape(n1 * n2 * n3 * n_noise, n_actions, n1 * n2 * n3 * n_noise)

    initial = (rng.dirichlet(np.ones(n2))[g2] * emit_g1[g2, g1]
               * rng.dirichlet(np.ones(n3))[g3] * rng.dirichlet(np.ones(n_noise))[u])
    mdp = MdpModel(
        transition=transition,
        reward=reward_g1[:, g1],
        initial=initial / initial.sum(),
        gamma=gamma,
        reward_noise_std=reward_noise_std,
    )
    pi = PolicyTable.from_action_vector(target, mdp.n_states)
    b = PolicyTable((1.0 - epsilon) * target[None, :] + epsilon * explore[g2, g3])

    instance = ToyInstance(
        mdp=mdp,
        pi=pi,
        b=b,
        forward=Partition.from_labels(g1 * n2 + g2),
        backward=Partition.from_labels(g2 * n3 + g3),
        two_step=Partition.from_labels(g2),
        sizes=(n1, n2, n3),
        n_noise=int(n_noise),
        meta={"seed": seed, "epsilon": float(epsilon)},
    )
    logger.info(f"Toy MDP {n1}x{n2}x{n3} (noise {n_noise}): {mdp.n_states} states, seed {seed}")
    return instance


def scaled_toy(seed: int = 0, sizes: Tuple[int, int, int] = (4, 4, 4), n_noise: int = 2,
               epsilon: float = 0.3, gamma: float = 0.9, reward_noise_std: float = 0.1) -> ToyInstance:
    """Larger toy for estimator experiments (64 relevant configurations times the noise levels)."""
    return three_group_toy(sizes, seed, epsilon=epsilon, n_noise=n_noise, gamma=gamma,
                           reward_noise_std=reward_noise_std)
