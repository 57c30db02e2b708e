"""
Unit tests for estimators.drl - cross-fitted doubly robust estimation.
"""
import logging
from dataclasses import replace

import numpy as np
import pytest

from abstraction.partition import Partition
from estimators.drl import doubly_robust_value, drl
from mdp.constants import MISSING_NEXT
from mdp.model import PolicyTable
from simulation.sampler import sample_trajectories
from solver.value import q_function


@pytest.fixture(scope="module")
def exploring_data(two_state_mdp):
    return sample_trajectories(two_state_mdp, PolicyTable.uniform(2, 2), n=40, horizon=10, seed=6)


class TestDoublyRobust:
    """Tests for doubly_robust_value and drl."""

    def test_true_q_makes_ratio_irrelevant(self, two_state_mdp, exploring_data):
        """Test with the true Q of a deterministic model every residual vanishes, whatever w is."""
        stay = PolicyTable.deterministic([0, 0], 2)
        q = q_function(two_state_mdp, stay)
        block_of = np.arange(2)
        for w in (np.zeros((2, 2)), np.full((2, 2), 3.0)):
            value = doubly_robust_value(exploring_data, stay, block_of, q, w, gamma=0.9)
            assert value == pytest.approx(10.0)

    def test_fixed_nuisances(self, two_state_mdp, exploring_data):
        """Test q_table and w_table replace the fitted nuisances."""
        stay = PolicyTable.deterministic([0, 0], 2)
        q = q_function(two_state_mdp, stay)
        result = drl(exploring_data, stay, gamma=0.9, q_table=q, w_table=np.ones((2, 2)))
        assert result.estimate == pytest.approx(10.0)
        assert result.diagnostics["folds"] == 2
        assert len(result.diagnostics["fold_estimates"]) == 2

    def test_fitted_nuisances(self, exploring_data):
        """Test the cross-fitted estimate is close to J on exact, fully explored data."""
        stay = PolicyTable.deterministic([0, 0], 2)
        result = drl(exploring_data, stay, gamma=0.9)
        assert result.estimate == pytest.approx(10.0, abs=1e-6)
        assert result.diagnostics["cross_fitted"]

    def test_table_shapes(self, exploring_data):
        """Test nuisance tables must run over [a][x]."""
        with pytest.raises(ValueError, match="q_table"):
            drl(exploring_data, PolicyTable.uniform(2, 2), Partition.single_block(2), q_table=np.zeros((2, 2)))

    def test_too_few_trajectories(self, two_state_mdp, caplog):
        """Test nuisances are fitted on all data when there are fewer trajectories than folds."""
        data = sample_trajectories(two_state_mdp, PolicyTable.uniform(2, 2), n=1, horizon=30, seed=1)
        with caplog.at_level(logging.WARNING, logger="estimators.drl"):
            result = drl(data, PolicyTable.uniform(2, 2), gamma=0.9, folds=3)
        assert result.diagnostics["folds"] == 1
        assert not result.diagnostics["cross_fitted"]
        assert "without cross-fitting" in caplog.text

    def test_single_fold_requested_is_silent(self, exploring_data, caplog):
        """Test folds=1 fits on all data without the fallback warning."""
        with caplog.at_level(logging.WARNING, logger="estimators.drl"):
            result = drl(exploring_data, PolicyTable.uniform(2, 2), gamma=0.9, folds=1)
        assert result.diagnostics["folds"] == 1
        assert "without cross-fitting" not in caplog.text

    def test_steps_without_successor_are_left_out(self, two_state_mdp, exploring_data):
        """Test a dropped final successor removes only that step from the residual mean."""
        stay = PolicyTable.deterministic([0, 0], 2)
        q = q_function(two_state_mdp, stay)
        next_states = exploring_data.next_states.copy()
        next_states[:, -1] = MISSING_NEXT
        truncated = replace(exploring_data, next_states=next_states)
        value = doubly_robust_value(truncated, stay, np.arange(2), q, np.full((2, 2), 3.0), gamma=0.9)
        assert value == pytest.approx(10.0)
