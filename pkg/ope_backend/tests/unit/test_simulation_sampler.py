"""
Unit tests for simulation - counter-based streams, trajectory sampling and Monte Carlo values.
"""
import numpy as np
import pytest

import simulation.sampler as sampler
from mdp.model import MdpModel, PolicyTable
from simulation.rng import derive_seed, trajectory_draws
from simulation.sampler import monte_carlo_value, sample_trajectories
from solver.stationary import stationary_distribution
from solver.value import policy_value


class TestStreams:
    """Tests for simulation.rng."""

    def test_derive_seed_deterministic(self):
        """Test derived seeds depend only on the keys."""
        assert derive_seed(1, 2, 3) == derive_seed(1, 2, 3)
        assert derive_seed(1, 2, 3) != derive_seed(1, 3, 2)
        assert 0 <= derive_seed(0) < 2 ** 63

    def test_draws_independent_of_batch(self):
        """Test trajectory i's draws do not depend on which batch it is drawn in."""
        alone = trajectory_draws(5, [3], horizon=4)
        together = trajectory_draws(5, range(6), horizon=4)
        for single, batched in zip(alone, together):
            np.testing.assert_array_equal(single[0], batched[3])


class TestSampleTrajectories:
    """Tests for sample_trajectories."""

    def test_shapes_and_seed(self, random_instance):
        """Test a full-length dataset with the seed attached."""
        mdp, _, b = random_instance
        dataset = sample_trajectories(mdp, b, n=7, horizon=5, seed=3)
        assert dataset.states.shape == (7, 5)
        assert dataset.n_steps == 35
        assert dataset.seed == 3
        np.testing.assert_array_equal(dataset.states[:, 1:], dataset.next_states[:, :-1])

    def test_reproducible(self, random_instance):
        """Test the same seed gives identical data."""
        mdp, _, b = random_instance
        first = sample_trajectories(mdp, b, n=20, horizon=6, seed=11)
        second = sample_trajectories(mdp, b, n=20, horizon=6, seed=11)
        np.testing.assert_array_equal(first.states, second.states)
        np.testing.assert_array_equal(first.rewards, second.rewards)

    def test_batch_size_does_not_change_data(self, random_instance, monkeypatch):
        """Test data are identical whatever the vectorized batch size."""
        mdp, _, b = random_instance
        reference = sample_trajectories(mdp, b, n=10, horizon=4, seed=2)
        monkeypatch.setattr(sampler, "SIM_BATCH", 3)
        rebatched = sample_trajectories(mdp, b, n=10, horizon=4, seed=2)
        np.testing.assert_array_equal(reference.states, rebatched.states)
        np.testing.assert_array_equal(reference.actions, rebatched.actions)

    def test_prefix_stability(self, random_instance):
        """Test the first n trajectories do not depend on how many are drawn."""
        mdp, _, b = random_instance
        small = sample_trajectories(mdp, b, n=5, horizon=4, seed=9)
        large = sample_trajectories(mdp, b, n=50, horizon=4, seed=9)
        np.testing.assert_array_equal(small.states, large.states[:5])

    def test_deterministic_model(self, two_state_mdp):
        """Test a deterministic policy on a deterministic model gives the expected path."""
        switch = PolicyTable.deterministic([1, 1], 2)
        dataset = sample_trajectories(two_state_mdp, switch, n=2, horizon=4, seed=0)
        assert dataset.states.tolist() == [[0, 1, 0, 1], [0, 1, 0, 1]]
        assert dataset.rewards.tolist() == [[1.0, 0.0, 1.0, 0.0]] * 2

    def test_reward_noise(self, two_state_mdp):
        """Test Gaussian reward noise is added around the expected reward."""
        noisy = MdpModel(two_state_mdp.transition, two_state_mdp.reward, two_state_mdp.initial, 0.9,
                         reward_noise_std=0.5)
        stay = PolicyTable.deterministic([0, 0], 2)
        dataset = sample_trajectories(noisy, stay, n=400, horizon=5, seed=4)
        assert dataset.rewards.std() > 0.3
        assert dataset.rewards.mean() == pytest.approx(1.0, abs=0.05)

    def test_stationary_start(self, random_instance):
        """Test first states follow the behavior stationary law in stationary mode."""
        mdp, _, b = random_instance
        dataset = sample_trajectories(mdp, b, n=4000, horizon=1, seed=8, init_mode="stationary")
        freq = np.bincount(dataset.first_states(), minlength=mdp.n_states) / 4000
        np.testing.assert_allclose(freq, stationary_distribution(mdp, b), atol=0.03)

    def test_invalid_arguments(self, random_instance):
        """Test sizes and init modes are validated."""
        mdp, _, b = random_instance
        with pytest.raises(ValueError):
            sample_trajectories(mdp, b, n=0, horizon=3, seed=0)
        with pytest.raises(ValueError, match="init_mode"):
            sample_trajectories(mdp, b, n=2, horizon=3, seed=0, init_mode="uniform")


class TestMonteCarlo:
    """Tests for monte_carlo_value."""

    def test_close_to_exact_value(self, random_instance):
        """Test the rollout mean is within a few standard errors plus the truncation bound."""
        mdp, pi, _ = random_instance
        result = monte_carlo_value(mdp, pi, n=4000, horizon=150, seed=1)
        exact = policy_value(mdp, pi)
        assert abs(result.estimate - exact) <= 4 * result.stderr + result.truncation_bound
        assert result.truncation_bound < 1e-5
