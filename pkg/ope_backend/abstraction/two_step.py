"""
Two-step abstraction: coarsest forward partition on the ground MDP, then coarsest backward
partition on the forward quotient.
"""
import logging
from dataclasses import dataclass
from typing import List, Tuple

from abstraction.constants import ABSTRACTION_TOL
from abstraction.partition import Partition, compose
from abstraction.quotient import QuotientModel, quotient_mdp
from abstraction.refinement import RefinementResult, refine_backward, refine_forward
from mdp.model import MdpModel, PolicyTable
from solver.stationary import stationary_distribution

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TwoStepResult:
    partition: Partition
    quotient: QuotientModel
    steps: Tuple[RefinementResult, ...]
    block_counts: Tuple[int, ...]

    @property
    def forward(self) -> RefinementResult:
        return self.steps[0]

    @property
    def backward(self) -> RefinementResult:
        return self.steps[1]

    def to_audit(self) -> dict:
        return {
            "mode": "two-step",
            "block_counts": list(self.block_counts),
            "steps": [step.to_audit() for step in self.steps],
        }


def two_step(mdp: MdpModel, pi: PolicyTable, b: PolicyTable, tol: float = ABSTRACTION_TOL,
             rounds: int = 1) -> TwoStepResult:
    """
    Forward then backward abstraction, composed.

    Args:
        mdp: Ground model
        pi: Target policy
        b: Behavior policy
        tol: Refinement / checker tolerance
        rounds: Number of forward+backward passes; values above 1 keep alternating on the
            current quotient until nothing merges (experimental, no guarantees)

    Returns:
        TwoStepResult with the composed partition, the final quotient and block counts
        (n_states, after forward, after backward, ...)
    """
    if rounds < 1:
        raise ValueError(f"rounds must be >= 1, got {rounds}")
    p_inf = stationary_distribution(mdp, b)

    partition = Partition.identity(mdp.n_states)
    current = QuotientModel(mdp, pi, b, weights=partition.indicator().T, partition=partition)
    steps: List[RefinementResult] = []
    counts = [mdp.n_states]

    for round_no in range(rounds):
        forward = refine_forward(current.mdp, current.pi, tol)
        partition = compose(forward.partition, partition)
        current = quotient_mdp(mdp, partition, pi, b, p_inf=p_inf)
        counts.append(partition.n_blocks)

        backward = refine_backward(current.mdp, current.pi, current.b, tol)
        partition = compose(backward.partition, partition)
        current = quotient_mdp(mdp, partition, pi, b, p_inf=p_inf)
        counts.append(partition.n_blocks)
        steps += [forward, backward]

        if round_no > 0 and counts[-1] == counts[-3]:
            break

    logger.info(f"Two-step abstraction block counts: {' -> '.join(str(c) for c in counts)}")
    return TwoStepResult(partition, current, tuple(steps), tuple(counts))
