"""
Unit tests for solver.stationary - chain structure, stationary distribution and backward kernel.
"""
import logging

import numpy as np
import pytest

from mdp.errors import StationarityError
from mdp.model import MdpModel, PolicyTable
from mdp.policy import chain_under_policy
from solver.stationary import backward_kernel, chain_structure, stationary_distribution, stationary_of_chain


class TestChainStructure:
    """Tests for chain_structure."""

    def test_transient_state(self):
        """Test a state that is left forever is transient."""
        chain = np.array([[0.5, 0.5, 0.0], [0.0, 0.2, 0.8], [0.0, 0.6, 0.4]])
        structure = chain_structure(chain)
        assert structure.recurrent_classes == ((1, 2),)
        assert structure.transient_states == (0,)
        assert structure.unichain
        assert not structure.periodic

    def test_two_classes(self):
        """Test two closed classes make the chain multichain."""
        structure = chain_structure(np.eye(2))
        assert structure.recurrent_classes == ((0,), (1,))
        assert not structure.unichain

    def test_period(self):
        """Test a deterministic 3-cycle has period 3."""
        chain = np.roll(np.eye(3), 1, axis=1)
        assert chain_structure(chain).periods == (3,)


class TestStationary:
    """Tests for stationary_of_chain and stationary_distribution."""

    def test_two_state_closed_form(self):
        """Test p = (q, p) / (p + q) for a two-state chain with switch rates p, q."""
        chain = np.array([[0.7, 0.3], [0.1, 0.9]])
        np.testing.assert_allclose(stationary_of_chain(chain), [0.25, 0.75])

    def test_transient_mass_is_zero(self):
        """Test transient states get exactly zero mass."""
        chain = np.array([[0.5, 0.5, 0.0], [0.0, 0.2, 0.8], [0.0, 0.6, 0.4]])
        p = stationary_of_chain(chain)
        assert p[0] == 0.0
        assert p.sum() == pytest.approx(1.0)
        np.testing.assert_allclose(p @ chain, p, atol=1e-12)

    def test_multichain_raises_with_classes(self):
        """Test the error lists the recurrent classes."""
        with pytest.raises(StationarityError) as excinfo:
            stationary_of_chain(np.eye(2))
        assert excinfo.value.recurrent_classes == [(0,), (1,)]

    def test_periodic_warns(self, caplog):
        """Test a periodic chain still returns the uniform solution, with a warning."""
        chain = np.array([[0.0, 1.0], [1.0, 0.0]])
        with caplog.at_level(logging.WARNING, logger="solver.stationary"):
            p = stationary_of_chain(chain)
        np.testing.assert_allclose(p, [0.5, 0.5])
        assert "periodic" in caplog.text

    def test_behavior_chain(self, random_instance):
        """Test stationarity of p_inf under the behavior chain."""
        mdp, _, b = random_instance
        p = stationary_distribution(mdp, b)
        np.testing.assert_allclose(p @ chain_under_policy(mdp, b), p, atol=1e-10)


class TestBackwardKernel:
    """Tests for backward_kernel."""

    def test_rows_are_distributions(self, random_instance):
        """Test every (s', .) slice sums to one over (a, s)."""
        mdp, _, b = random_instance
        kernel = backward_kernel(mdp, b)
        assert kernel.shape == (mdp.n_states, mdp.n_actions, mdp.n_states)
        np.testing.assert_allclose(kernel.sum(axis=(1, 2)), 1.0)
        assert np.all(kernel >= 0)

    def test_reversal_identity(self, random_instance):
        """Test p(s') B[s', a, s] = p(s) b(a|s) T(s'|a, s)."""
        mdp, _, b = random_instance
        p = stationary_distribution(mdp, b)
        kernel = backward_kernel(mdp, b, p_inf=p)
        forward_flow = np.einsum("s,sa,sat->tas", p, b.probs, mdp.transition)
        np.testing.assert_allclose(p[:, None, None] * kernel, forward_flow, atol=1e-12)

    def test_zero_mass_state_fallback(self, caplog):
        """Test a transient state's row falls back to the stationary state-action law."""
        transition = np.zeros((3, 1, 3))
        transition[0, 0] = [0.0, 0.5, 0.5]
        transition[1, 0] = [0.0, 0.2, 0.8]
        transition[2, 0] = [0.0, 0.6, 0.4]
        mdp = MdpModel(transition, np.zeros((1, 3)), np.array([1.0, 0.0, 0.0]), 0.9)
        b = PolicyTable.uniform(3, 1)
        with caplog.at_level(logging.WARNING, logger="solver.stationary"):
            kernel = backward_kernel(mdp, b)
        p = stationary_distribution(mdp, b)
        np.testing.assert_allclose(kernel[0, 0], p)
        assert "zero stationary mass" in caplog.text
