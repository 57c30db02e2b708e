"""
Offline trajectory data.

A Dataset keeps padded arrays (one row per trajectory) so estimators can work vectorized;
Trajectory objects are views for callers that want per-trajectory records.
"""
from dataclasses import dataclass
from typing import Dict, Iterator, List, NamedTuple, Optional

import numpy as np

from mdp.constants import MISSING_NEXT


class Step(NamedTuple):
    state: int
    action: int
    reward: float


@dataclass(frozen=True)
class Trajectory:
    steps: tuple

    def __len__(self) -> int:
        return len(self.steps)


@dataclass(frozen=True)
class Dataset:
    """
    Trajectories of (state, action, reward) triplets.

    states/actions/rewards are (n, horizon) arrays, next_states holds S_{t+1} for every step, or
    MISSING_NEXT when the successor was not recorded (the step still counts for rewards and ratios).
    lengths[i] <= horizon; entries past a trajectory's length are padding and never read.
    """
    states: np.ndarray
    actions: np.ndarray
    rewards: np.ndarray
    next_states: np.ndarray
    lengths: np.ndarray
    horizon: int
    n_states: int
    n_actions: int
    seed: Optional[int] = None

    def __post_init__(self):
        for name, dtype in (("states", int), ("actions", int), ("rewards", float),
                            ("next_states", int), ("lengths", int)):
            arr = np.array(getattr(self, name), dtype=dtype, copy=True)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

        n = self.lengths.shape[0]
        expected = (n, self.horizon)
        for name in ("states", "actions", "rewards", "next_states"):
            if getattr(self, name).shape != expected:
                raise ValueError(f"{name} must have shape {expected}, got {getattr(self, name).shape}")
        if np.any(self.lengths < 0) or np.any(self.lengths > self.horizon):
            raise ValueError(f"trajectory lengths must lie in [0, {self.horizon}]")
        mask = self.mask
        if np.any((self.states[mask] < 0) | (self.states[mask] >= self.n_states)):
            raise ValueError("state index out of bounds")
        nxt = self.next_states[mask]
        if np.any(((nxt < 0) & (nxt != MISSING_NEXT)) | (nxt >= self.n_states)):
            raise ValueError("next-state index out of bounds")
        if np.any((self.actions[mask] < 0) | (self.actions[mask] >= self.n_actions)):
            raise ValueError("action index out of bounds")

    @property
    def n_trajectories(self) -> int:
        return int(self.lengths.shape[0])

    @property
    def mask(self) -> np.ndarray:
        """Boolean (n, horizon) mask of real steps."""
        return np.arange(self.horizon)[None, :] < self.lengths[:, None]

    @property
    def n_steps(self) -> int:
        return int(self.lengths.sum())

    def require_nonempty(self):
        if self.n_trajectories == 0 or self.n_steps == 0:
            raise ValueError("dataset is empty")

    @property
    def has_next(self) -> np.ndarray:
        """Boolean (n, horizon) mask of real steps with a recorded successor."""
        return self.mask & (self.next_states != MISSING_NEXT)

    def transitions(self, complete: bool = False) -> Dict[str, np.ndarray]:
        """
        Flat arrays of observed steps, ordered by (trajectory, t).

        With complete=True only steps with a recorded successor are returned; otherwise s_next is
        MISSING_NEXT where the successor is unknown.
        """
        mask = self.has_next if complete else self.mask
        traj_idx = np.broadcast_to(np.arange(self.n_trajectories)[:, None], mask.shape)
        return {
            "traj": traj_idx[mask],
            "s": self.states[mask],
            "a": self.actions[mask],
            "r": self.rewards[mask],
            "s_next": self.next_states[mask],
        }

    def first_states(self) -> np.ndarray:
        return self.states[self.lengths > 0, 0]

    def subset(self, indices) -> "Dataset":
        """Dataset restricted to the given trajectory indices."""
        indices = np.asarray(indices, dtype=int)
        return Dataset(
            states=self.states[indices],
            actions=self.actions[indices],
            rewards=self.rewards[indices],
            next_states=self.next_states[indices],
            lengths=self.lengths[indices],
            horizon=self.horizon,
            n_states=self.n_states,
            n_actions=self.n_actions,
            seed=self.seed,
        )

    def trajectory(self, i: int) -> Trajectory:
        length = int(self.lengths[i])
        return Trajectory(tuple(
            Step(int(self.states[i, t]), int(self.actions[i, t]), float(self.rewards[i, t]))
            for t in range(length)
        ))

    @property
    def trajectories(self) -> List[Trajectory]:
        return [self.trajectory(i) for i in range(self.n_trajectories)]

    def records(self) -> Iterator[Dict]:
        """Yield {traj, t, s, a, r, s_next} records in (traj, t) order; s_next is omitted when unknown."""
        for i in range(self.n_trajectories):
            for t in range(int(self.lengths[i])):
                record = {
                    "traj": i,
                    "t": t,
                    "s": int(self.states[i, t]),
                    "a": int(self.actions[i, t]),
                    "r": float(self.rewards[i, t]),
                }
                if self.next_states[i, t] != MISSING_NEXT:
                    record["s_next"] = int(self.next_states[i, t])
                yield record
