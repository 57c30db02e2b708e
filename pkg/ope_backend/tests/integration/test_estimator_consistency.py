"""
Statistical tests: estimators approach the exact value, abstract estimators track ground ones,
and the doubly robust estimate survives one misspecified nuisance.
"""
import numpy as np
import pytest

from abstraction.partition import Partition
from estimators.dispatch import run_estimator
from estimators.drl import drl
from estimators.sis import sis
from generators.random import random_mdp, random_policy
from generators.toy import three_group_toy
from mdp.model import PolicyTable
from simulation.sampler import sample_trajectories
from solver.ratios import mis_ratio
from solver.stationary import stationary_distribution
from solver.value import policy_value, q_function

pytestmark = pytest.mark.slow

HORIZON = 60


@pytest.fixture(scope="module")
def stationary_toy():
    toy = three_group_toy((2, 2, 2), seed=4, epsilon=0.5)
    mdp = toy.mdp.with_initial(stationary_distribution(toy.mdp, toy.b))
    return toy, mdp, policy_value(mdp, toy.pi)


def _squared_errors(stationary_toy, method, part, n, seeds):
    toy, mdp, oracle = stationary_toy
    errors = []
    for seed in seeds:
        dataset = sample_trajectories(mdp, toy.b, n, HORIZON, seed)
        estimate = run_estimator(method, dataset, toy.pi, part, mdp.gamma).estimate
        errors.append((estimate - oracle) ** 2)
    return np.array(errors)


class TestConsistency:
    """Tests for error shrinking with the sample size."""

    @pytest.mark.parametrize("method", ["fqe", "mis", "drl"])
    def test_error_shrinks_with_n(self, stationary_toy, method):
        """Test the mean squared error at n=2000 is below the one at n=40."""
        small = _squared_errors(stationary_toy, method, None, 40, range(5))
        large = _squared_errors(stationary_toy, method, None, 2000, range(100, 105))
        assert large.mean() < small.mean()

    @pytest.mark.parametrize("method,tol", [("fqe", 0.3), ("mis", 0.5), ("drl", 0.3)])
    def test_large_sample_is_close(self, stationary_toy, method, tol):
        toy, _, _ = stationary_toy
        errors = _squared_errors(stationary_toy, method, toy.two_step, 3000, [7])
        assert np.sqrt(errors[0]) < tol


class TestAbstractAgainstGround:
    """Tests for abstract estimators against their ground counterparts on the same data."""

    @pytest.mark.parametrize("condition", ["forward", "backward", "two-step"])
    def test_fqe_agrees(self, stationary_toy, condition):
        """Test FQE over each valid partition stays near ground FQE on a large dataset."""
        toy, mdp, _ = stationary_toy
        dataset = sample_trajectories(mdp, toy.b, 3000, HORIZON, 11)
        ground = run_estimator("fqe", dataset, toy.pi, None, mdp.gamma).estimate
        abstract = run_estimator("fqe", dataset, toy.pi, toy.expected()[condition], mdp.gamma).estimate
        assert abs(abstract - ground) < 0.3



# gamma 0.5 keeps the truncation bias of a 20-step horizon near 1e-6
SHORT_HORIZON = 20


@pytest.fixture(scope="module")
def random_stationary():
    """Six-state model started at its behavior-stationary law; pi stays close to b."""
    base = random_mdp(6, 2, seed=31, gamma=0.5)
    b = random_policy(6, 2, seed=32)
    pi = PolicyTable(0.7 * b.probs + 0.3 * random_policy(6, 2, seed=33).probs)
    mdp = base.with_initial(stationary_distribution(base, b))
    return mdp, pi, b, policy_value(mdp, pi)


class TestRandomModelConsistency:
    """Tests for every estimator converging on a random six-state model."""

    @pytest.mark.parametrize("method", ["fqe", "sis", "mis", "drl"])
    def test_median_error_decreases(self, random_stationary, method):
        """Test the median absolute error over 30 datasets falls from n=100 to 1000 to 10000."""
        mdp, pi, b, oracle = random_stationary
        medians = []
        for n in (100, 1000, 10000):
            errors = [
                abs(run_estimator(method, sample_trajectories(mdp, b, n, SHORT_HORIZON, seed), pi, None,
                                  mdp.gamma).estimate - oracle)
                for seed in range(30)
            ]
            medians.append(float(np.median(errors)))
        assert medians[0] > medians[1] > medians[2], medians

    def test_sis_with_known_behavior_is_unbiased(self, random_stationary):
        """Test the SIS mean over 200 datasets lies within 3 standard errors of J(pi)."""
        mdp, pi, b, oracle = random_stationary
        identity = Partition.identity(mdp.n_states)
        estimates = np.array([
            sis(sample_trajectories(mdp, b, 100, SHORT_HORIZON, 1000 + seed), pi, identity, mdp.gamma,
                behavior=b).estimate
            for seed in range(200)
        ])
        stderr = estimates.std(ddof=1) / np.sqrt(len(estimates))
        assert abs(estimates.mean() - oracle) < 3 * stderr + 1e-5


class TestDoubleRobustness:
    """Tests for DRL with one or both nuisances replaced by a wrong table, n = 10^4."""

    @pytest.fixture(scope="class")
    def setting(self, random_stationary):
        mdp, pi, b, oracle = random_stationary
        dataset = sample_trajectories(mdp, b, 10000, SHORT_HORIZON, 77)
        rng = np.random.default_rng(78)
        q = q_function(mdp, pi)
        w = mis_ratio(mdp, pi, b)
        return {
            "dataset": dataset, "pi": pi, "gamma": mdp.gamma, "oracle": oracle, "q": q, "w": w,
            "bad_q": q + rng.normal(0.0, 1.0, size=q.shape),
            "bad_w": w * rng.uniform(0.2, 2.0, size=w.shape),
        }

    def _error(self, setting, q_table, w_table):
        result = drl(setting["dataset"], setting["pi"], None, setting["gamma"], q_table=q_table, w_table=w_table)
        return abs(result.estimate - setting["oracle"])

    def test_true_q_with_wrong_ratio(self, setting):
        assert self._error(setting, setting["q"], setting["bad_w"]) < 0.1

    def test_wrong_q_with_true_ratio(self, setting):
        assert self._error(setting, setting["bad_q"], setting["w"]) < 0.1

    def test_both_wrong_is_biased(self, setting):
        """Test shifting Q by 1 and halving w leaves a bias of about 0.5."""
        error = self._error(setting, setting["q"] + 1.0, setting["w"] * 0.5)
        assert error > 0.3
