"""
Finite MDP and policy tables.

Index conventions, used everywhere in the package:
- transition[s, a, s'] = T(s' | a, s)
- reward[a, s] = expected reward R(a, s)
- probs[s, a] = policy(a | s)
"""
import logging
from dataclasses import dataclass, field, replace
from typing import List, Optional, Tuple

import numpy as np

from mdp.constants import PROB_TOL

logger = logging.getLogger(__name__)


def _frozen(array, dtype=float) -> np.ndarray:
    """Copy into a read-only numpy array."""
    out = np.array(array, dtype=dtype, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class MdpModel:
    """
    Finite discounted MDP.

    Construction only checks shapes; stochasticity and ranges are reported by validate_mdp
    so that invalid inputs can still be inspected.
    """
    transition: np.ndarray
    reward: np.ndarray
    initial: np.ndarray
    gamma: float
    reward_noise_std: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "transition", _frozen(self.transition))
        object.__setattr__(self, "reward", _frozen(self.reward))
        object.__setattr__(self, "initial", _frozen(self.initial))
        object.__setattr__(self, "gamma", float(self.gamma))
        object.__setattr__(self, "reward_noise_std", float(self.reward_noise_std))

        if self.transition.ndim != 3:
            raise ValueError(f"transition must be 3-dimensional [s][a][s'], got shape {self.transition.shape}")
        n_states, n_actions, n_next = self.transition.shape
        if n_states < 1 or n_actions < 1:
            raise ValueError("MDP needs at least one state and one action")
        if n_next != n_states:
            raise ValueError(f"transition shape {self.transition.shape} is not [s][a][s]")
        if self.reward.shape != (n_actions, n_states):
            raise ValueError(f"reward must have shape [a][s] = {(n_actions, n_states)}, got {self.reward.shape}")
        if self.initial.shape != (n_states,):
            raise ValueError(f"initial must have shape ({n_states},), got {self.initial.shape}")

    @property
    def n_states(self) -> int:
        return self.transition.shape[0]

    @property
    def n_actions(self) -> int:
        return self.transition.shape[1]

    @property
    def max_abs_reward(self) -> float:
        return float(np.max(np.abs(self.reward)))

    def with_initial(self, initial: np.ndarray) -> "MdpModel":
        """Return a copy of the model with a different initial distribution."""
        return replace(self, initial=initial)


@dataclass(frozen=True)
class PolicyTable:
    """Stochastic policy, probs[s, a] = policy(a | s)."""
    probs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "probs", _frozen(self.probs))
        if self.probs.ndim != 2 or min(self.probs.shape) < 1:
            raise ValueError(f"policy probs must be a nonempty [s][a] table, got shape {self.probs.shape}")

    @property
    def n_states(self) -> int:
        return self.probs.shape[0]

    @property
    def n_actions(self) -> int:
        return self.probs.shape[1]

    @classmethod
    def from_action_vector(cls, action_probs, n_states: int) -> "PolicyTable":
        """State-agnostic policy: every row equals action_probs."""
        row = np.asarray(action_probs, dtype=float)
        return cls(np.tile(row, (n_states, 1)))

    @classmethod
    def uniform(cls, n_states: int, n_actions: int) -> "PolicyTable":
        return cls(np.full((n_states, n_actions), 1.0 / n_actions))

    @classmethod
    def deterministic(cls, actions, n_actions: int) -> "PolicyTable":
        """One-hot policy choosing actions[s] in state s."""
        actions = np.asarray(actions, dtype=int)
        probs = np.zeros((actions.size, n_actions))
        probs[np.arange(actions.size), actions] = 1.0
        return cls(probs)


@dataclass(frozen=True)
class Violation:
    """One failed invariant, with the offending indices and magnitude."""
    kind: str
    message: str
    indices: Tuple[int, ...] = ()
    magnitude: float = 0.0


@dataclass(frozen=True)
class ValidationReport:
    violations: Tuple[Violation, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self) -> str:
        if self.ok:
            return "ok"
        return "; ".join(v.message for v in self.violations)


def _check_rows(rows: np.ndarray, label: str, tol: float) -> List[Violation]:
    """Range and sum-to-one checks on the last axis of a probability table."""
    violations = []
    bad_range = np.argwhere((rows < -tol) | (rows > 1.0 + tol))
    for idx in bad_range:
        idx = tuple(int(i) for i in idx)
        violations.append(Violation(
            kind="range",
            message=f"{label}{list(idx)} = {rows[idx]:.6g} outside [0, 1]",
            indices=idx,
            magnitude=float(max(-rows[idx], rows[idx] - 1.0)),
        ))
    sums = rows.sum(axis=-1)
    bad_sum = np.argwhere(np.abs(sums - 1.0) > tol)
    for idx in bad_sum:
        idx = tuple(int(i) for i in idx)
        deficit = 1.0 - float(sums[idx])
        violations.append(Violation(
            kind="row_sum",
            message=f"{label} row {list(idx)} sums to {sums[idx]:.12g} (deficit {deficit:.6g})",
            indices=idx,
            magnitude=deficit,
        ))
    return violations


def validate_mdp(mdp: MdpModel, tol: float = PROB_TOL) -> ValidationReport:
    """
    Report every stochasticity and range violation of an MDP.

    Args:
        mdp: Model to check
        tol: Probability tolerance

    Returns:
        ValidationReport, ok iff transition rows and initial are distributions and 0 < gamma < 1
    """
    violations = _check_rows(mdp.transition, "transition", tol)
    violations += _check_rows(mdp.initial, "initial", tol)
    if not 0.0 < mdp.gamma < 1.0:
        violations.append(Violation(
            kind="gamma",
            message=f"discount out of range: gamma = {mdp.gamma} not in (0, 1)",
            magnitude=float(mdp.gamma),
        ))
    if mdp.reward_noise_std < 0 or not np.isfinite(mdp.reward_noise_std):
        violations.append(Violation(
            kind="noise",
            message=f"reward_noise_std = {mdp.reward_noise_std} must be a nonnegative real",
            magnitude=float(mdp.reward_noise_std),
        ))
    if not np.all(np.isfinite(mdp.reward)):
        violations.append(Violation(kind="reward", message="reward table contains non-finite values"))

    report = ValidationReport(tuple(violations))
    if not report.ok:
        logger.debug(f"MDP validation found {len(violations)} violation(s)")
    return report


def validate_policy(policy: PolicyTable, n_states: Optional[int] = None,
                    n_actions: Optional[int] = None, tol: float = PROB_TOL) -> ValidationReport:
    """Row checks for a policy table, plus shape agreement when sizes are given."""
    violations = _check_rows(policy.probs, "policy", tol)
    if n_states is not None and policy.n_states != n_states:
        violations.append(Violation(
            kind="shape", message=f"policy covers {policy.n_states} states, expected {n_states}",
        ))
    if n_actions is not None and policy.n_actions != n_actions:
        violations.append(Violation(
            kind="shape", message=f"policy covers {policy.n_actions} actions, expected {n_actions}",
        ))
    return ValidationReport(tuple(violations))
