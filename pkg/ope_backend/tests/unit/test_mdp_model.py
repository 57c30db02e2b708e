"""
Unit tests for mdp.model and mdp.policy - tables, validation and policy transforms.
"""
import numpy as np
import pytest

from mdp.model import MdpModel, PolicyTable, validate_mdp, validate_policy
from mdp.policy import chain_under_policy, epsilon_greedy


class TestMdpModel:
    """Tests for MdpModel construction."""

    def test_shapes_and_sizes(self, two_state_mdp):
        """Test size properties follow the [s][a][s'] convention."""
        assert two_state_mdp.n_states == 2
        assert two_state_mdp.n_actions == 2
        assert two_state_mdp.max_abs_reward == 1.0

    def test_tables_are_read_only(self, two_state_mdp):
        """Test the stored arrays cannot be mutated."""
        with pytest.raises(ValueError):
            two_state_mdp.transition[0, 0, 0] = 0.5

    def test_reward_shape_mismatch(self):
        """Test a reward table indexed [s][a] is rejected."""
        with pytest.raises(ValueError, match="reward"):
            MdpModel(np.full((3, 2, 3), 1 / 3), np.zeros((3, 2)), np.full(3, 1 / 3), 0.9)

    def test_non_square_transition(self):
        """Test a transition whose next-state axis differs from the state axis is rejected."""
        with pytest.raises(ValueError):
            MdpModel(np.full((2, 2, 3), 1 / 3), np.zeros((2, 2)), np.full(2, 0.5), 0.9)

    def test_with_initial(self, two_state_mdp):
        """Test with_initial replaces only the initial distribution."""
        moved = two_state_mdp.with_initial(np.array([0.0, 1.0]))
        assert moved.initial.tolist() == [0.0, 1.0]
        np.testing.assert_array_equal(moved.transition, two_state_mdp.transition)
        assert two_state_mdp.initial.tolist() == [1.0, 0.0]


class TestValidation:
    """Tests for validate_mdp and validate_policy."""

    def test_valid_model(self, two_state_mdp):
        """Test a stochastic model validates."""
        assert validate_mdp(two_state_mdp).ok

    def test_row_sum_violation_names_row_and_deficit(self, two_state_mdp):
        """Test a leaking transition row is reported with its indices."""
        transition = np.array(two_state_mdp.transition)
        transition[1, 0, 1] = 0.75
        report = validate_mdp(MdpModel(transition, two_state_mdp.reward, two_state_mdp.initial, 0.9))
        assert not report.ok
        violation = report.violations[0]
        assert violation.kind == "row_sum"
        assert violation.indices == (1, 0)
        assert violation.magnitude == pytest.approx(0.25)

    def test_negative_probability(self, two_state_mdp):
        """Test negative entries are range violations."""
        initial = np.array([1.5, -0.5])
        report = validate_mdp(two_state_mdp.with_initial(initial))
        assert any(v.kind == "range" for v in report.violations)

    @pytest.mark.parametrize("gamma", [0.0, 1.0, 1.5])
    def test_gamma_out_of_range(self, two_state_mdp, gamma):
        """Test discounts outside (0, 1) are rejected."""
        model = MdpModel(two_state_mdp.transition, two_state_mdp.reward, two_state_mdp.initial, gamma)
        report = validate_mdp(model)
        assert [v.kind for v in report.violations] == ["gamma"]

    def test_policy_shape_mismatch(self):
        """Test a policy over the wrong number of actions is reported."""
        report = validate_policy(PolicyTable.uniform(2, 3), n_states=2, n_actions=2)
        assert not report.ok
        assert "3 actions" in str(report)


class TestPolicyTable:
    """Tests for PolicyTable constructors and transforms."""

    def test_deterministic(self):
        """Test one-hot rows."""
        policy = PolicyTable.deterministic([1, 0, 1], n_actions=2)
        np.testing.assert_array_equal(policy.probs, [[0, 1], [1, 0], [0, 1]])

    def test_from_action_vector(self):
        """Test a state-agnostic policy repeats the same row."""
        policy = PolicyTable.from_action_vector([0.2, 0.8], n_states=3)
        assert policy.probs.shape == (3, 2)
        assert np.all(policy.probs[:, 1] == 0.8)

    def test_epsilon_greedy_mixture(self):
        """Test b = (1 - eps) pi + eps / |A|."""
        pi = PolicyTable.deterministic([0, 1], n_actions=2)
        b = epsilon_greedy(pi, 0.3)
        np.testing.assert_allclose(b.probs, [[0.85, 0.15], [0.15, 0.85]])
        assert validate_policy(b).ok

    def test_epsilon_greedy_rejects_out_of_range(self):
        """Test epsilon must lie in [0, 1]."""
        with pytest.raises(ValueError):
            epsilon_greedy(PolicyTable.uniform(2, 2), 1.5)

    def test_chain_under_policy(self, two_state_mdp):
        """Test the state chain of a policy that always switches."""
        chain = chain_under_policy(two_state_mdp, PolicyTable.deterministic([1, 1], 2))
        np.testing.assert_array_equal(chain, [[0, 1], [1, 0]])

    def test_chain_shape_mismatch(self, two_state_mdp):
        """Test a policy over other states is rejected."""
        with pytest.raises(ValueError):
            chain_under_policy(two_state_mdp, PolicyTable.uniform(3, 2))
