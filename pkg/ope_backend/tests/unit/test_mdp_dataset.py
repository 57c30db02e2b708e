"""
Unit tests for mdp.dataset - padded trajectory storage.
"""
import numpy as np
import pytest

from mdp.constants import MISSING_NEXT
from mdp.dataset import Dataset, Step


def _ragged_dataset() -> Dataset:
    """Two trajectories of lengths 3 and 1 over 3 states."""
    return Dataset(
        states=[[0, 1, 2], [2, 0, 0]],
        actions=[[1, 0, 1], [0, 0, 0]],
        rewards=[[1.0, 0.5, -1.0], [2.0, 0.0, 0.0]],
        next_states=[[1, 2, 0], [1, 0, 0]],
        lengths=[3, 1],
        horizon=3,
        n_states=3,
        n_actions=2,
    )


class TestDataset:
    """Tests for Dataset views."""

    def test_mask_and_counts(self):
        """Test padding is excluded from the step count."""
        dataset = _ragged_dataset()
        assert dataset.n_trajectories == 2
        assert dataset.n_steps == 4
        assert dataset.mask.tolist() == [[True, True, True], [True, False, False]]

    def test_transitions_skip_padding(self):
        """Test flat transitions hold only real steps, in (trajectory, t) order."""
        steps = _ragged_dataset().transitions()
        assert steps["traj"].tolist() == [0, 0, 0, 1]
        assert steps["s"].tolist() == [0, 1, 2, 2]
        assert steps["s_next"].tolist() == [1, 2, 0, 1]
        assert steps["r"].tolist() == [1.0, 0.5, -1.0, 2.0]

    def test_trajectory_view(self):
        """Test per-trajectory records."""
        dataset = _ragged_dataset()
        assert dataset.trajectory(1).steps == (Step(2, 0, 2.0),)
        assert [len(t) for t in dataset.trajectories] == [3, 1]

    def test_subset(self):
        """Test restricting to trajectory indices."""
        subset = _ragged_dataset().subset([1])
        assert subset.n_trajectories == 1
        assert subset.first_states().tolist() == [2]

    def test_records(self):
        """Test NDJSON-ready records."""
        records = list(_ragged_dataset().records())
        assert records[-1] == {"traj": 1, "t": 0, "s": 2, "a": 0, "r": 2.0, "s_next": 1}

    def test_out_of_bounds_state(self):
        """Test indices outside the state space are rejected."""
        with pytest.raises(ValueError, match="state index"):
            Dataset([[5]], [[0]], [[0.0]], [[0]], [1], 1, 3, 2)

    def test_out_of_bounds_padding_is_ignored(self):
        """Test padded entries are never validated."""
        dataset = Dataset([[0, 9]], [[0, 9]], [[0.0, 0.0]], [[1, 9]], [1], 2, 3, 2)
        assert dataset.n_steps == 1

    def test_empty_dataset(self):
        """Test estimators' guard on empty data."""
        dataset = Dataset(np.zeros((0, 2)), np.zeros((0, 2)), np.zeros((0, 2)), np.zeros((0, 2)),
                          np.zeros(0), 2, 3, 2)
        with pytest.raises(ValueError, match="empty"):
            dataset.require_nonempty()

    def test_missing_successor_sentinel(self):
        """Test a final step without a successor is kept but excluded from complete transitions."""
        dataset = Dataset([[0, 1]], [[0, 0]], [[0.0, 1.0]], [[1, MISSING_NEXT]], [2], 2, 2, 1)
        assert dataset.n_steps == 2
        assert dataset.has_next.tolist() == [[True, False]]
        assert dataset.transitions()["r"].tolist() == [0.0, 1.0]
        complete = dataset.transitions(complete=True)
        assert complete["s"].tolist() == [0]
        assert complete["s_next"].tolist() == [1]

    def test_negative_successor_other_than_sentinel(self):
        """Test only the missing-successor sentinel may be negative."""
        with pytest.raises(ValueError, match="state index"):
            Dataset([[0]], [[0]], [[0.0]], [[-2]], [1], 1, 2, 1)
