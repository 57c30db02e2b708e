"""
Irrelevance checkers.

Every check compares each state against its block representative (the block's smallest state),
over per-action signature vectors. A report holds iff the worst deviation is within tol; when it
fails, the witness names the representative, the offending state, the action and a block (the
shared block for scalar conditions, the target block for aggregated-kernel conditions).
"""
import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from abstraction.constants import ABSTRACTION_TOL
from abstraction.partition import Partition
from mdp.errors import PartitionError
from mdp.model import MdpModel, PolicyTable
from solver.ratios import is_ratio
from solver.stationary import backward_kernel

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Witness:
    first_state: int
    second_state: int
    action: int
    block: int


@dataclass(frozen=True)
class IrrelevanceReport:
    condition: str
    holds: bool
    worst: float
    tol: float
    witness: Optional[Witness] = None
    components: Tuple["IrrelevanceReport", ...] = ()

    def describe(self) -> str:
        status = "holds" if self.holds else "violated"
        text = f"{self.condition}: {status} (worst {self.worst:.3e}, tol {self.tol:.1e})"
        if self.witness is not None and not self.holds:
            w = self.witness
            text += f" witness states ({w.first_state}, {w.second_state}), action {w.action}, block {w.block}"
        return text

    def to_dict(self) -> dict:
        return {
            "condition": self.condition,
            "holds": self.holds,
            "worst": self.worst,
            "tol": self.tol,
            "witness": None if self.witness is None else vars(self.witness),
            "components": [c.to_dict() for c in self.components],
        }


def _require_states(part: Partition, n_states: int):
    if part.n_states != n_states:
        raise PartitionError(f"partition covers {part.n_states} states, model has {n_states}")


def _signature_report(condition: str, part: Partition, signature: np.ndarray, tol: float,
                      target_blocks: bool = False) -> IrrelevanceReport:
    """
    Compare signature[s, a, d] against the representative of s's block.

    target_blocks marks the last axis as running over blocks, in which case the witness block is
    that target block.
    """
    _require_states(part, signature.shape[0])
    reps = part.representatives()[part.block_of]
    deviation = np.abs(signature - signature[reps])
    worst = float(deviation.max()) if deviation.size else 0.0
    holds = worst <= tol
    witness = None
    if not holds:
        s, a, d = (int(i) for i in np.unravel_index(np.argmax(deviation), deviation.shape))
        block = d if target_blocks else int(part.block_of[s])
        witness = Witness(first_state=int(reps[s]), second_state=s, action=a, block=block)
        logger.debug(f"{condition} violated: {worst:.3e} at states ({reps[s]}, {s}), action {a}")
    return IrrelevanceReport(condition, holds, worst, tol, witness)


def _combine(condition: str, reports, tol: float) -> IrrelevanceReport:
    reports = tuple(reports)
    worst_report = max(reports, key=lambda r: r.worst)
    holds = all(r.holds for r in reports)
    witness = None
    if not holds:
        witness = next(r.witness for r in sorted(reports, key=lambda r: -r.worst) if not r.holds)
    return IrrelevanceReport(condition, holds, worst_report.worst, tol, witness, reports)


def check_pi_irrelevance(part: Partition, pi: PolicyTable, tol: float = ABSTRACTION_TOL) -> IrrelevanceReport:
    """Same-block states choose actions with the same probabilities."""
    return _signature_report("pi", part, pi.probs[:, :, None], tol)


def check_q_irrelevance(part: Partition, q_table: np.ndarray, tol: float = ABSTRACTION_TOL) -> IrrelevanceReport:
    """Same-block states share Q(a, .) for every action; q_table is indexed [a][s]."""
    return _signature_report("q", part, np.asarray(q_table).T[:, :, None], tol)


def check_rho_irrelevance(part: Partition, rho: np.ndarray, tol: float = ABSTRACTION_TOL) -> IrrelevanceReport:
    return _signature_report("rho", part, np.asarray(rho).T[:, :, None], tol)


def check_w_irrelevance(part: Partition, w: np.ndarray, tol: float = ABSTRACTION_TOL) -> IrrelevanceReport:
    return _signature_report("w", part, np.asarray(w).T[:, :, None], tol)


def aggregated_transition(mdp: MdpModel, part: Partition) -> np.ndarray:
    """Block-aggregated forward kernel, shape (s, a, x')."""
    return mdp.transition @ part.indicator()


def check_model_irrelevance(part: Partition, mdp: MdpModel, tol: float = ABSTRACTION_TOL,
                            component: str = "both") -> IrrelevanceReport:
    """
    Reward- and transition-irrelevance.

    Args:
        part: Candidate partition
        mdp: Model
        tol: Tolerance
        component: "reward", "transition" or "both"

    Returns:
        IrrelevanceReport; with component="both" the two sub-reports are attached as components
    """
    _require_states(part, mdp.n_states)
    if component not in ("both", "reward", "transition"):
        raise ValueError(f"component must be 'both', 'reward' or 'transition', got '{component}'")
    reports = []
    if component in ("both", "reward"):
        reports.append(_signature_report("reward", part, mdp.reward.T[:, :, None], tol))
    if component in ("both", "transition"):
        reports.append(_signature_report(
            "transition", part, aggregated_transition(mdp, part), tol, target_blocks=True
        ))
    if len(reports) == 1:
        return reports[0]
    return _combine("model", reports, tol)


def check_forward_irrelevance(part: Partition, mdp: MdpModel, pi: PolicyTable,
                              tol: float = ABSTRACTION_TOL) -> IrrelevanceReport:
    """Model-irrelevance together with pi-irrelevance."""
    return _combine("forward", (check_model_irrelevance(part, mdp, tol), check_pi_irrelevance(part, pi, tol)), tol)


def aggregated_backward(kernel: np.ndarray, part: Partition) -> np.ndarray:
    """Block-aggregated backward kernel, shape (s', a, x)."""
    return kernel @ part.indicator()


def check_backward_model_irrelevance(part: Partition, mdp: MdpModel, b: PolicyTable, pi: PolicyTable,
                                     tol: float = ABSTRACTION_TOL,
                                     kernel: Optional[np.ndarray] = None) -> IrrelevanceReport:
    """
    rho-irrelevance plus equality of block-aggregated backward kernels across same-block
    conditioning next-states.

    Raises:
        StationarityError: behavior chain is not unichain
    """
    _require_states(part, mdp.n_states)
    if kernel is None:
        kernel = backward_kernel(mdp, b)
    rho_report = check_rho_irrelevance(part, is_ratio(pi, b), tol)
    kernel_report = _signature_report(
        "backward_kernel", part, aggregated_backward(kernel, part), tol, target_blocks=True
    )
    return _combine("backward", (rho_report, kernel_report), tol)
