"""
Lifted MDPs with known abstraction structure.

Lifted state (x, u) has index x * n_noise + u; the projection (x, u) -> x is the ground truth.
"""
import logging
import numbers
from dataclasses import dataclass

import numpy as np
from sklearn.utils import check_scalar

from abstraction.partition import Partition
from mdp.model import MdpModel, PolicyTable
from solver.stationary import stationary_distribution

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ModelLift:
    mdp: MdpModel
    pi: PolicyTable
    truth: Partition


@dataclass(frozen=True)
class BackwardLift:
    mdp: MdpModel
    pi: PolicyTable
    b: PolicyTable
    truth: Partition


def _projection(n_base: int, n_noise: int) -> Partition:
    return Partition(np.repeat(np.arange(n_base), n_noise))


def lift_policy(policy: PolicyTable, n_noise: int) -> PolicyTable:
    """Policy on lifted states that ignores the noise coordinate."""
    return PolicyTable(np.repeat(policy.probs, n_noise, axis=0))


def lift_model_irrelevant(base: MdpModel, base_pi: PolicyTable, n_noise: int, seed: int) -> ModelLift:
    """
    Lift with noise driven by the relevant state: T((x',u')|a,(x,u)) = T(x'|a,x) g(u'|x',u,a).

    Rewards and pi ignore u, so the projection is model- and pi-irrelevant by construction.
    """
    check_scalar(n_noise, "n_noise", numbers.Integral, min_val=1)
    rng = np.random.default_rng(seed)
    n_base, n_actions = base.n_states, base.n_actions
    g = rng.dirichlet(np.ones(n_noise), size=(n_base, n_noise, n_actions))   # g[x', u, a, u']

    # T[(x,u), a, (x',u')] = T[x, a, x'] * g[x', u, a, u']
    transition = np.einsum("xay,yuav->xuayv", base.transition, g)
    transition = transition.reshape(n_base * n_noise, n_actions, n_base * n_noise)
    noise_start = rng.dirichlet(np.ones(n_noise), size=n_base)
    mdp = MdpModel(
        transition=transition,
        reward=np.repeat(base.reward, n_noise, axis=1),
        initial=(base.initial[:, None] * noise_start).reshape(-1),
        gamma=base.gamma,
        reward_noise_std=base.reward_noise_std,
    )
    logger.debug(f"Model-irrelevant lift: {n_base} -> {mdp.n_states} states")
    return ModelLift(mdp, lift_policy(base_pi, n_noise), _projection(n_base, n_noise))


def lift_backward_irrelevant(base: MdpModel, pi: PolicyTable, b: PolicyTable, n_noise: int,
                             seed: int) -> BackwardLift:
    """
    Lift where noise is an emission of the next relevant state: T((x',u')|a,(x,u)) = T(x'|a,x) h(u'|x').

    pi and b ignore u; the projection is backward-model-irrelevant because h cancels in the
    time-reversed kernel.

    Raises:
        StationarityError: the base behavior chain is not unichain
    """
    check_scalar(n_noise, "n_noise", numbers.Integral, min_val=1)
    stationary_distribution(base, b)
    rng = np.random.default_rng(seed)
    n_base, n_actions = base.n_states, base.n_actions
    h = rng.dirichlet(np.ones(n_noise), size=n_base)                          # h[x', u']

    transition = np.einsum("xay,yv->xayv", base.transition, h)
    transition = np.repeat(transition[:, None], n_noise, axis=1)               # (x, u, a, x', u')
    transition = transition.reshape(n_base * n_noise, n_actions, n_base * n_noise)
    mdp = MdpModel(
        transition=transition,
        reward=np.repeat(base.reward, n_noise, axis=1),
        initial=(base.initial[:, None] * h).reshape(-1),
        gamma=base.gamma,
        reward_noise_std=base.reward_noise_std,
    )
    logger.debug(f"Backward-irrelevant lift: {n_base} -> {mdp.n_states} states")
    return BackwardLift(mdp, lift_policy(pi, n_noise), lift_policy(b, n_noise), _projection(n_base, n_noise))
