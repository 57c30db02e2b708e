"""
Estimator output record.
"""
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

from abstraction.partition import Partition


@dataclass(frozen=True)
class EstimateResult:
    method: str
    abstraction: str
    estimate: float
    n_trajectories: int
    diagnostics: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "method": self.method,
            "abstraction": self.abstraction,
            "estimate": self.estimate,
            "n_trajectories": self.n_trajectories,
            "diagnostics": dict(self.diagnostics),
        }


def describe_partition(part: Optional[Partition]) -> str:
    if part is None:
        return "ground"
    return f"partition({part.n_blocks}/{part.n_states})"
