"""
Unit tests for abstraction.checks - irrelevance checkers and witnesses.
"""
import numpy as np
import pytest

from abstraction.checks import (
    check_backward_model_irrelevance,
    check_forward_irrelevance,
    check_model_irrelevance,
    check_pi_irrelevance,
    check_q_irrelevance,
    check_rho_irrelevance,
    check_w_irrelevance,
)
from abstraction.partition import Partition
from mdp.errors import PartitionError
from mdp.model import PolicyTable
from solver.ratios import is_ratio, mis_ratio
from solver.value import q_function


class TestScalarChecks:
    """Tests for the table-valued conditions."""

    def test_identity_always_holds(self, random_instance):
        """Test every condition holds on singleton blocks."""
        mdp, pi, b = random_instance
        identity = Partition.identity(mdp.n_states)
        assert check_pi_irrelevance(identity, pi).holds
        assert check_q_irrelevance(identity, q_function(mdp, pi)).holds
        assert check_rho_irrelevance(identity, is_ratio(pi, b)).holds
        assert check_w_irrelevance(identity, mis_ratio(mdp, pi, b)).holds
        assert check_forward_irrelevance(identity, mdp, pi).holds

    def test_pi_witness(self):
        """Test the witness names the representative, the offending state, action and block."""
        pi = PolicyTable(np.array([[0.5, 0.5], [0.5, 0.5], [0.9, 0.1]]))
        report = check_pi_irrelevance(Partition(np.array([0, 1, 1])), pi)
        assert report.holds is True
        report = check_pi_irrelevance(Partition(np.array([0, 0, 0])), pi)
        assert not report.holds
        assert report.worst == pytest.approx(0.4)
        w = report.witness
        assert (w.first_state, w.second_state, w.block) == (0, 2, 0)
        assert w.action in (0, 1)
        assert "witness" in report.describe()

    def test_tolerance(self):
        """Test deviations up to tol are accepted."""
        q = np.array([[1.0, 1.0 + 1e-10]])
        assert check_q_irrelevance(Partition.single_block(2), q, tol=1e-9).holds
        assert not check_q_irrelevance(Partition.single_block(2), q, tol=1e-11).holds

    def test_partition_size_mismatch(self, random_instance):
        """Test a partition over the wrong state count is rejected."""
        _, pi, _ = random_instance
        with pytest.raises(PartitionError):
            check_pi_irrelevance(Partition.identity(3), pi)


class TestModelChecks:
    """Tests for model and backward-model irrelevance."""

    def test_model_lift_projection(self, model_lift):
        """Test the constructed projection is model- and pi-irrelevant."""
        report = check_forward_irrelevance(model_lift.truth, model_lift.mdp, model_lift.pi)
        assert report.holds
        assert [c.condition for c in report.components] == ["model", "pi"]

    def test_single_block_fails_on_random_model(self, random_instance):
        """Test lumping a random model breaks reward irrelevance with a witness."""
        mdp, _, _ = random_instance
        report = check_model_irrelevance(Partition.single_block(mdp.n_states), mdp, component="reward")
        assert not report.holds
        assert report.witness.first_state == 0

    def test_unknown_component(self, random_instance):
        """Test component names are validated."""
        mdp, _, _ = random_instance
        with pytest.raises(ValueError, match="component"):
            check_model_irrelevance(Partition.identity(mdp.n_states), mdp, component="rewards")

    def test_backward_lift_projection(self, backward_lift):
        """Test the constructed projection is backward-model-irrelevant."""
        lift = backward_lift
        report = check_backward_model_irrelevance(lift.truth, lift.mdp, lift.b, lift.pi)
        assert report.holds
        assert report.to_dict()["components"][1]["condition"] == "backward_kernel"

    def test_backward_lift_is_not_model_irrelevant_when_merged(self, backward_lift):
        """Test merging two relevant states is caught."""
        lift = backward_lift
        merged = Partition.from_labels(np.minimum(lift.truth.block_of, 1))
        report = check_backward_model_irrelevance(merged, lift.mdp, lift.b, lift.pi)
        assert not report.holds
        assert report.witness is not None
