"""
Unit tests for estimators.empirical - count-based behavior, target and model tables.
"""
import logging

import numpy as np
import pytest

from abstraction.partition import Partition
from estimators.empirical import (
    behavior_drift,
    empirical_mdp,
    estimate_behavior,
    estimate_behavior_by_step,
    project_target,
)
from mdp.dataset import Dataset
from mdp.errors import PartitionError
from mdp.model import PolicyTable, validate_mdp
from simulation.sampler import sample_trajectories


def _small_dataset() -> Dataset:
    """Three states; state 2 is never visited."""
    return Dataset(
        states=[[0, 1, 0], [1, 0, 1]],
        actions=[[0, 0, 1], [1, 1, 0]],
        rewards=[[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]],
        next_states=[[1, 0, 1], [0, 1, 0]],
        lengths=[3, 3],
        horizon=3,
        n_states=3,
        n_actions=2,
    )


class TestEstimateBehavior:
    """Tests for estimate_behavior."""

    def test_smoothed_counts(self):
        """Test b_hat(a|x) = (count + lambda) / (total + lambda |A|)."""
        fitted = estimate_behavior(_small_dataset(), smoothing=0.5)
        np.testing.assert_array_equal(fitted.counts[:2], [[1, 2], [2, 1]])
        np.testing.assert_allclose(fitted.policy.probs[0], [1.5 / 4, 2.5 / 4])

    def test_unvisited_block_is_uniform(self, caplog):
        """Test blocks without data get a uniform row and a warning."""
        with caplog.at_level(logging.WARNING, logger="estimators.empirical"):
            fitted = estimate_behavior(_small_dataset(), smoothing=0.0)
        assert fitted.unvisited == (2,)
        np.testing.assert_allclose(fitted.policy.probs[2], [0.5, 0.5])
        assert "never visited" in caplog.text

    def test_pooled_over_blocks(self):
        """Test counts pool over the members of a block."""
        fitted = estimate_behavior(_small_dataset(), Partition(np.array([0, 0, 1])), smoothing=0.0)
        np.testing.assert_allclose(fitted.policy.probs[0], [0.5, 0.5])

    def test_partition_size_mismatch(self):
        """Test the partition must cover the dataset's states."""
        with pytest.raises(PartitionError):
            estimate_behavior(_small_dataset(), Partition.identity(4))

    def test_per_step_tables(self):
        """Test per-step tables count only the steps at that time."""
        tables = estimate_behavior_by_step(_small_dataset(), smoothing=0.0)
        assert tables.shape == (3, 3, 2)
        np.testing.assert_allclose(tables[0, 0], [1.0, 0.0])
        np.testing.assert_allclose(tables[0, 1], [0.0, 1.0])

    def test_drift_detects_changing_behavior(self):
        """Test a behavior that changes over time shows drift."""
        assert behavior_drift(_small_dataset(), smoothing=0.0) > 0.5


class TestProjectTarget:
    """Tests for project_target."""

    def test_visit_weighted_average(self):
        """Test pi_phi averages pi over observed visits, unvisited blocks over members."""
        pi = PolicyTable(np.array([[1.0, 0.0], [0.0, 1.0], [0.5, 0.5]]))
        dataset = _small_dataset()
        projected = project_target(dataset, pi, Partition(np.array([0, 0, 1])))
        np.testing.assert_allclose(projected.probs[0], [0.5, 0.5])
        np.testing.assert_allclose(projected.probs[1], [0.5, 0.5])


class TestEmpiricalMdp:
    """Tests for empirical_mdp."""

    def test_unsmoothed_deterministic_model(self, two_state_mdp):
        """Test counts recover a deterministic model exactly when every cell is visited."""
        dataset = sample_trajectories(two_state_mdp, PolicyTable.uniform(2, 2), n=30, horizon=10, seed=0)
        model = empirical_mdp(dataset, smoothing=0.0, gamma=0.9)
        np.testing.assert_allclose(model.transition, two_state_mdp.transition)
        np.testing.assert_allclose(model.reward, two_state_mdp.reward)
        np.testing.assert_allclose(model.initial, [1.0, 0.0])

    def test_smoothed_model_is_valid(self):
        """Test smoothing keeps every row a distribution, including unvisited ones."""
        model = empirical_mdp(_small_dataset(), smoothing=0.5)
        assert validate_mdp(model, tol=1e-10).ok
        np.testing.assert_allclose(model.transition[2, 0], [1 / 3] * 3)
        assert model.reward[0, 2] == 0.0
