"""
Coarsest forward- and backward-irrelevant partitions by signature refinement.

Blocks start from a quantized per-state signature and are split until the block-aggregated
kernel signature is constant inside every block. Splits are keyed on (current block, quantized
signature), so rounds only ever split.
"""
import logging
from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple

import numpy as np

from abstraction.checks import (
    IrrelevanceReport,
    aggregated_backward,
    aggregated_transition,
    check_backward_model_irrelevance,
    check_model_irrelevance,
    check_pi_irrelevance,
)
from abstraction.constants import ABSTRACTION_TOL
from abstraction.partition import Partition, canonical_labels
from mdp.model import MdpModel, PolicyTable
from solver.ratios import is_ratio
from solver.stationary import backward_kernel

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RefinementRound:
    round: int
    n_blocks: int
    split_states: Tuple[int, ...]


@dataclass(frozen=True)
class RefinementResult:
    mode: str
    partition: Partition
    rounds: Tuple[RefinementRound, ...]
    reports: Tuple[IrrelevanceReport, ...] = field(default_factory=tuple)

    @property
    def verified(self) -> bool:
        return all(r.holds for r in self.reports)

    def to_audit(self) -> dict:
        return {
            "mode": self.mode,
            "n_blocks": self.partition.n_blocks,
            "rounds": [
                {"round": r.round, "n_blocks": r.n_blocks, "split_states": list(r.split_states)}
                for r in self.rounds
            ],
            "checks": [r.to_dict() for r in self.reports],
        }


def _quantize(values: np.ndarray, tol: float) -> np.ndarray:
    if tol > 0:
        return np.rint(values / tol)
    return values


def _split(block_of: np.ndarray, signature: np.ndarray, tol: float) -> np.ndarray:
    keys = np.column_stack([block_of.astype(float), _quantize(signature.reshape(block_of.size, -1), tol)])
    _, inverse = np.unique(keys, axis=0, return_inverse=True)
    return canonical_labels(inverse.reshape(-1))


def _refine(mode: str, initial_signature: np.ndarray, signature_fn: Callable[[Partition], np.ndarray],
            tol: float) -> Tuple[Partition, Tuple[RefinementRound, ...]]:
    n_states = initial_signature.shape[0]
    block_of = _split(np.zeros(n_states, dtype=int), initial_signature, tol)
    rounds = [RefinementRound(0, int(block_of.max()) + 1, tuple(range(n_states)) if block_of.max() > 0 else ())]
    logger.debug(f"{mode} refinement: initial signature gives {rounds[0].n_blocks} block(s)")

    for round_no in range(1, n_states + 1):
        partition = Partition(block_of)
        refined = _split(block_of, signature_fn(partition), tol)
        n_blocks = int(refined.max()) + 1
        if n_blocks == partition.n_blocks:
            break
        # a state is split when its new block no longer matches its old block's representative
        reps = partition.representatives()[block_of]
        split = tuple(int(s) for s in np.flatnonzero(refined != refined[reps]))
        rounds.append(RefinementRound(round_no, n_blocks, split))
        logger.debug(f"{mode} refinement round {round_no}: {n_blocks} blocks ({len(split)} states split off)")
        block_of = refined
    return Partition(block_of), tuple(rounds)


def _log_result(result: RefinementResult, n_states: int):
    logger.info(f"{result.mode} refinement: {n_states} states -> {result.partition.n_blocks} blocks "
                f"in {len(result.rounds)} round(s)")
    for report in result.reports:
        if not report.holds:
            logger.warning(f"{result.mode} refinement re-verification failed: {report.describe()}")


def refine_forward(mdp: MdpModel, pi: PolicyTable, tol: float = ABSTRACTION_TOL) -> RefinementResult:
    """
    Coarsest model- and pi-irrelevant partition, with its refinement audit.

    Args:
        mdp: Model
        pi: Target policy
        tol: Signature grid width; also the re-verification tolerance

    Returns:
        RefinementResult
    """
    initial = np.concatenate([mdp.reward.T, pi.probs], axis=1)
    partition, rounds = _refine(
        "forward", initial, lambda part: aggregated_transition(mdp, part), tol
    )
    reports = (check_model_irrelevance(partition, mdp, tol), check_pi_irrelevance(partition, pi, tol))
    result = RefinementResult("forward", partition, rounds, reports)
    _log_result(result, mdp.n_states)
    return result


def refine_backward(mdp: MdpModel, pi: PolicyTable, b: PolicyTable, tol: float = ABSTRACTION_TOL,
                    kernel: Optional[np.ndarray] = None) -> RefinementResult:
    """
    Coarsest backward-model-irrelevant partition, with its refinement audit.

    The refined variable is the conditioning next-state s'; signatures are recomputed each round
    because membership changes on both sides of the kernel.
    """
    if kernel is None:
        kernel = backward_kernel(mdp, b)
    initial = is_ratio(pi, b).T
    partition, rounds = _refine(
        "backward", initial, lambda part: aggregated_backward(kernel, part), tol
    )
    reports = (check_backward_model_irrelevance(partition, mdp, b, pi, tol, kernel=kernel),)
    result = RefinementResult("backward", partition, rounds, reports)
    _log_result(result, mdp.n_states)
    return result


def coarsest_forward(mdp: MdpModel, pi: PolicyTable, tol: float = ABSTRACTION_TOL) -> Partition:
    return refine_forward(mdp, pi, tol).partition


def coarsest_backward(mdp: MdpModel, pi: PolicyTable, b: PolicyTable, tol: float = ABSTRACTION_TOL) -> Partition:
    return refine_backward(mdp, pi, b, tol).partition
