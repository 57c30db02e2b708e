"""
JSON / NDJSON persistence for models, policies, partitions and datasets.

File schemas are pydantic models; loaders additionally run the MDP/policy validators and
reject files whose contents are not valid distributions.
"""
import json
import logging
from collections import defaultdict
from pathlib import Path
from typing import Dict, List, Optional, Union

import numpy as np
from pydantic import BaseModel, Field, ValidationError as PydanticValidationError

from mdp.constants import MISSING_NEXT
from mdp.dataset import Dataset
from mdp.errors import ValidationError
from mdp.model import MdpModel, PolicyTable, validate_mdp, validate_policy

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


class MdpFile(BaseModel):
    """On-disk MDP schema."""
    n_states: int = Field(..., ge=1)
    n_actions: int = Field(..., ge=1)
    gamma: float
    transition: List[List[List[float]]]
    reward: List[List[float]]
    reward_noise_std: float = 0.0
    initial: List[float]


class PolicyFile(BaseModel):
    probs: List[List[float]]


class PartitionFile(BaseModel):
    block_of: List[int]


class DatasetRecord(BaseModel):
    traj: int = Field(..., ge=0)
    t: int = Field(..., ge=0)
    s: int = Field(..., ge=0)
    a: int = Field(..., ge=0)
    r: float
    s_next: Optional[int] = Field(None, ge=0)


def _read_json(path: PathLike) -> Dict:
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)


def _write_json(path: PathLike, payload: Dict):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(payload, f, indent=2)
        f.write("\n")


def mdp_to_dict(mdp: MdpModel) -> Dict:
    return {
        "n_states": mdp.n_states,
        "n_actions": mdp.n_actions,
        "gamma": mdp.gamma,
        "transition": mdp.transition.tolist(),
        "reward": mdp.reward.tolist(),
        "reward_noise_std": mdp.reward_noise_std,
        "initial": mdp.initial.tolist(),
    }


def mdp_from_dict(payload: Dict) -> MdpModel:
    """Parse and validate an MDP payload; raises ValidationError with the report text."""
    try:
        spec = MdpFile.model_validate(payload)
    except PydanticValidationError as e:
        raise ValidationError(f"Malformed MDP file: {e}") from e
    try:
        mdp = MdpModel(
            transition=np.asarray(spec.transition, dtype=float),
            reward=np.asarray(spec.reward, dtype=float),
            initial=np.asarray(spec.initial, dtype=float),
            gamma=spec.gamma,
            reward_noise_std=spec.reward_noise_std,
        )
    except ValueError as e:
        raise ValidationError(f"Malformed MDP file: {e}") from e
    if (mdp.n_states, mdp.n_actions) != (spec.n_states, spec.n_actions):
        raise ValidationError(
            f"Declared sizes ({spec.n_states}, {spec.n_actions}) do not match tables "
            f"({mdp.n_states}, {mdp.n_actions})"
        )
    report = validate_mdp(mdp)
    if not report.ok:
        raise ValidationError(f"Invalid MDP: {report}", report=report)
    return mdp


def load_mdp(path: PathLike) -> MdpModel:
    mdp = mdp_from_dict(_read_json(path))
    logger.info(f"Loaded MDP from {path}: {mdp.n_states} states, {mdp.n_actions} actions, gamma={mdp.gamma}")
    return mdp


def save_mdp(mdp: MdpModel, path: PathLike):
    _write_json(path, mdp_to_dict(mdp))


def load_policy(path: PathLike, n_states: Optional[int] = None, n_actions: Optional[int] = None) -> PolicyTable:
    try:
        spec = PolicyFile.model_validate(_read_json(path))
        policy = PolicyTable(np.asarray(spec.probs, dtype=float))
    except (PydanticValidationError, ValueError) as e:
        raise ValidationError(f"Malformed policy file {path}: {e}") from e
    report = validate_policy(policy, n_states, n_actions)
    if not report.ok:
        raise ValidationError(f"Invalid policy in {path}: {report}", report=report)
    return policy


def save_policy(policy: PolicyTable, path: PathLike):
    _write_json(path, {"probs": policy.probs.tolist()})


def load_partition(path: PathLike):
    # imported here: abstraction depends on mdp, not the other way round
    from abstraction.partition import Partition
    try:
        spec = PartitionFile.model_validate(_read_json(path))
    except PydanticValidationError as e:
        raise ValidationError(f"Malformed partition file {path}: {e}") from e
    return Partition(np.asarray(spec.block_of, dtype=int))


def save_partition(partition, path: PathLike):
    _write_json(path, {"block_of": partition.block_of.tolist()})


def save_dataset(dataset: Dataset, path: PathLike):
    """Write NDJSON records {traj, t, s, a, r, s_next}, ordered by (traj, t)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        for record in dataset.records():
            f.write(json.dumps(record) + "\n")
    logger.info(f"Wrote {dataset.n_steps} records ({dataset.n_trajectories} trajectories) to {path}")


def load_dataset(path: PathLike, n_states: Optional[int] = None, n_actions: Optional[int] = None,
                 seed: Optional[int] = None) -> Dataset:
    """
    Read an NDJSON dataset.

    s_next is optional per record; when missing it is taken from the following record of the
    same trajectory. A final step with no successor is kept with s_next = MISSING_NEXT: its reward
    and action still count, only transition-based fits skip it.

    Args:
        path: NDJSON file
        n_states: State count (inferred from the largest index when omitted)
        n_actions: Action count (inferred likewise)
        seed: Generator seed to attach, if known

    Returns:
        Dataset
    """
    by_traj: Dict[int, List[DatasetRecord]] = defaultdict(list)
    with open(path, "r", encoding="utf-8") as f:
        for line_no, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                record = DatasetRecord.model_validate_json(line)
            except PydanticValidationError as e:
                raise ValidationError(f"Malformed dataset record at {path}:{line_no}: {e}") from e
            by_traj[record.traj].append(record)

    if not by_traj:
        raise ValidationError(f"Dataset {path} contains no records")

    trajectories = []
    open_ended = 0
    for key in sorted(by_traj):
        steps = sorted(by_traj[key], key=lambda r: r.t)
        if [r.t for r in steps] != list(range(len(steps))):
            raise ValidationError(f"Trajectory {key} in {path} has non-contiguous time indices")
        rows = []
        for i, r in enumerate(steps):
            s_next = r.s_next
            if s_next is None and i + 1 < len(steps):
                s_next = steps[i + 1].s
            if s_next is None:
                open_ended += 1
                s_next = MISSING_NEXT
            rows.append((r.s, r.a, r.r, s_next))
        trajectories.append(rows)
    if open_ended:
        logger.debug(f"{open_ended} final step(s) without a recorded next state")

    horizon = max(1, max(len(rows) for rows in trajectories))
    n = len(trajectories)
    states = np.zeros((n, horizon), dtype=int)
    actions = np.zeros((n, horizon), dtype=int)
    rewards = np.zeros((n, horizon))
    next_states = np.zeros((n, horizon), dtype=int)
    lengths = np.zeros(n, dtype=int)
    for i, rows in enumerate(trajectories):
        lengths[i] = len(rows)
        for t, (s, a, r, s_next) in enumerate(rows):
            states[i, t], actions[i, t], rewards[i, t], next_states[i, t] = s, a, r, s_next

    mask = np.arange(horizon)[None, :] < lengths[:, None]
    if n_states is None:
        n_states = int(max(states[mask].max(initial=0), next_states[mask].max(initial=0))) + 1
    if n_actions is None:
        n_actions = int(actions[mask].max(initial=0)) + 1
    try:
        return Dataset(states, actions, rewards, next_states, lengths, horizon, n_states, n_actions, seed)
    except ValueError as e:
        raise ValidationError(f"Invalid dataset {path}: {e}") from e
