"""
Exhaustive search over set partitions: an independent oracle for the refinement algorithms.
"""
import logging
from typing import Callable, Dict, Iterator, Optional, Tuple

import numpy as np

from abstraction.checks import (
    check_backward_model_irrelevance,
    check_forward_irrelevance,
    check_model_irrelevance,
    check_pi_irrelevance,
    check_q_irrelevance,
    check_rho_irrelevance,
    check_w_irrelevance,
)
from abstraction.constants import ABSTRACTION_TOL, BRUTE_FORCE_LIMIT
from abstraction.partition import Partition
from mdp.errors import PartitionError
from mdp.model import MdpModel, PolicyTable
from solver.ratios import is_ratio, mis_ratio
from solver.stationary import backward_kernel
from solver.value import q_function

logger = logging.getLogger(__name__)

CONDITIONS = ("forward", "backward", "model", "reward", "transition", "pi", "q", "rho", "w")


def set_partitions(n: int) -> Iterator[Tuple[int, ...]]:
    """All set partitions of n elements as restricted growth strings, in lexicographic order."""
    labels = [0] * n

    def extend(i: int, n_used: int):
        if i == n:
            yield tuple(labels)
            return
        for label in range(n_used + 1):
            labels[i] = label
            yield from extend(i + 1, max(n_used, label + 1))

    if n == 0:
        return
    yield from extend(1, 1)


def _checker(mdp: MdpModel, pi: PolicyTable, b: Optional[PolicyTable], condition: str,
             tol: float) -> Callable[[Partition], bool]:
    needs_b = condition in ("backward", "rho", "w")
    if needs_b and b is None:
        raise ValueError(f"condition '{condition}' needs a behavior policy")

    if condition == "forward":
        return lambda part: check_forward_irrelevance(part, mdp, pi, tol).holds
    if condition in ("model", "reward", "transition"):
        component = "both" if condition == "model" else condition
        return lambda part: check_model_irrelevance(part, mdp, tol, component=component).holds
    if condition == "pi":
        return lambda part: check_pi_irrelevance(part, pi, tol).holds
    if condition == "q":
        q = q_function(mdp, pi)
        return lambda part: check_q_irrelevance(part, q, tol).holds
    if condition == "rho":
        rho = is_ratio(pi, b)
        return lambda part: check_rho_irrelevance(part, rho, tol).holds
    if condition == "w":
        w = mis_ratio(mdp, pi, b)
        return lambda part: check_w_irrelevance(part, w, tol).holds
    kernel = backward_kernel(mdp, b)
    return lambda part: check_backward_model_irrelevance(part, mdp, b, pi, tol, kernel=kernel).holds


def brute_force_coarsest(mdp: MdpModel, pi: PolicyTable, b: Optional[PolicyTable] = None,
                         condition: str = "forward", limit: int = BRUTE_FORCE_LIMIT,
                         tol: float = ABSTRACTION_TOL) -> Partition:
    """
    Fewest-block partition satisfying a named checker, by enumeration.

    Ties go to the lexicographically smallest block_of array.

    Args:
        mdp: Model
        pi: Target policy
        b: Behavior policy (required for backward, rho and w)
        condition: One of CONDITIONS
        limit: Largest state count accepted
        tol: Checker tolerance

    Raises:
        PartitionError: state space larger than limit
    """
    if condition not in CONDITIONS:
        raise ValueError(f"condition must be one of {CONDITIONS}, got '{condition}'")
    if mdp.n_states > limit:
        raise PartitionError(f"brute force limited to {limit} states, model has {mdp.n_states}")

    holds = _checker(mdp, pi, b, condition, tol)
    best: Optional[Tuple[int, ...]] = None
    best_blocks = mdp.n_states + 1
    checked = 0
    for labels in set_partitions(mdp.n_states):
        n_blocks = max(labels) + 1
        if n_blocks >= best_blocks:
            continue
        checked += 1
        if holds(Partition(np.array(labels))):
            best, best_blocks = labels, n_blocks
    logger.debug(f"Brute force '{condition}': checked {checked} partitions, best has {best_blocks} blocks")
    return Partition(np.array(best))
