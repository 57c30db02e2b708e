"""
Exact verification suite for the abstraction results.

Every check runs on exactly solved models (no sampling). A check whose precondition (an irrelevance
condition) does not hold on a case is recorded as skipped with the checker's verdict as the reason,
never as a failure.
"""
import logging
import numbers
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

import numpy as np
from sklearn.utils import check_scalar

from abstraction.brute_force import brute_force_coarsest
from abstraction.checks import (
    IrrelevanceReport,
    check_backward_model_irrelevance,
    check_model_irrelevance,
    check_q_irrelevance,
    check_rho_irrelevance,
    check_w_irrelevance,
)
from abstraction.partition import Partition
from abstraction.quotient import quotient_mdp
from abstraction.refinement import coarsest_backward, coarsest_forward
from abstraction.two_step import two_step
from estimators.population import (
    abstract_q_fixed_point,
    abstract_ratio,
    aggregate_w,
    expected_f1,
    expected_f2,
    expected_f3,
    expected_f4,
)
from generators.lifts import lift_backward_irrelevant, lift_model_irrelevant
from generators.random import random_mdp, random_policy
from generators.toy import three_group_toy
from mdp.model import MdpModel, PolicyTable
from mdp.policy import epsilon_greedy
from simulation.rng import derive_seed
from solver.ratios import is_ratio, mis_ratio, sis_truncation_bound
from solver.stationary import stationary_distribution
from solver.value import policy_value, q_function

logger = logging.getLogger(__name__)

GAMMAS = (0.5, 0.9, 0.99)
TRUNCATION_HORIZONS = (5, 10, 20, 40)
F2_HORIZON = 30
BRUTE_FORCE_STATES = 6
MAX_BASE_STATES = 8


@dataclass
class CheckResult:
    """Outcome of one named assertion over all cases."""
    name: str
    description: str
    tol: float
    passed: int = 0
    failed: int = 0
    skipped: int = 0
    worst: float = 0.0
    reasons: List[str] = field(default_factory=list)

    @property
    def status(self) -> str:
        if self.failed:
            return "fail"
        return "pass" if self.passed else "skip"

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "description": self.description,
            "status": self.status,
            "passed": self.passed,
            "failed": self.failed,
            "skipped": self.skipped,
            "worst": self.worst,
            "tol": self.tol,
            "reasons": list(self.reasons),
        }


@dataclass
class VerificationReport:
    seed: int
    n_cases: int
    tol: float
    checks: Dict[str, CheckResult] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(check.status != "fail" for check in self.checks.values())

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "n_cases": self.n_cases,
            "tol": self.tol,
            "ok": self.ok,
            "checks": [check.to_dict() for check in self.checks.values()],
        }

    def lines(self) -> List[str]:
        out = []
        for check in self.checks.values():
            out.append(f"[{check.status.upper():4}] {check.name}: worst {check.worst:.3e} (tol {check.tol:.1e}), "
                       f"{check.passed} passed, {check.failed} failed, {check.skipped} skipped")
            out.extend(f"         {reason}" for reason in check.reasons[:3])
        return out


class _Suite:
    """Collects residuals into CheckResults."""

    def __init__(self, report: VerificationReport):
        self.report = report

    def _check(self, name: str, description: str, tol: float) -> CheckResult:
        if name not in self.report.checks:
            self.report.checks[name] = CheckResult(name, description, tol)
        return self.report.checks[name]

    def record(self, name: str, description: str, residual: float, tol: Optional[float] = None,
               case: Optional[int] = None):
        tol = self.report.tol if tol is None else tol
        check = self._check(name, description, tol)
        residual = float(residual)
        check.worst = max(check.worst, residual)
        if residual <= tol:
            check.passed += 1
        else:
            check.failed += 1
            check.reasons.append(f"case {case}: residual {residual:.3e}")
            logger.error(f"{name} failed on case {case}: residual {residual:.3e} > {tol:.1e}")

    def skip(self, name: str, description: str, reason: str, tol: Optional[float] = None):
        check = self._check(name, description, self.report.tol if tol is None else tol)
        check.skipped += 1
        if len(check.reasons) < 5:
            check.reasons.append(f"skipped: {reason}")

    def gated(self, name: str, description: str, preconditions: List[IrrelevanceReport],
              residual: Callable[[], float], case: Optional[int] = None):
        """Evaluate residual only when every precondition holds."""
        failing = [report for report in preconditions if not report.holds]
        if failing:
            self.skip(name, description, "; ".join(report.describe() for report in failing))
            return
        self.record(name, description, residual(), case=case)


def _block_table(part: Partition, table: np.ndarray) -> np.ndarray:
    """Abstract table [a][x] read off each block's representative state."""
    return np.asarray(table)[:, part.representatives()]


def _case_sizes(rng: np.random.Generator) -> Dict:
    return {
        "n_base": int(rng.integers(2, MAX_BASE_STATES + 1)),
        "n_actions": int(rng.integers(2, 4)),
        "n_noise": int(rng.integers(2, 4)),
        "gamma": float(rng.choice(GAMMAS)),
    }


def _identities(suite: _Suite, mdp: MdpModel, pi: PolicyTable, b: PolicyTable, case: int):
    q = q_function(mdp, pi)
    j = policy_value(mdp, pi, q)
    w = mis_ratio(mdp, pi, b)
    suite.record("identities.f3", "J equals the exact MIS value with the true ratio",
                 abs(expected_f3(mdp, b, w) - j), case=case)
    suite.record("identities.f4", "J equals the exact DR value with true Q and ratio",
                 abs(expected_f4(mdp, pi, b, q, w) - j), case=case)
    q_iter = q_function(mdp, pi, method="iterative")
    suite.record("identities.solvers", "linear and iterative Q solvers agree",
                 float(np.abs(q - q_iter).max()), tol=max(suite.report.tol, 1e-6), case=case)
    for horizon in TRUNCATION_HORIZONS:
        gap = abs(expected_f2(mdp, pi, b, horizon) - j) - sis_truncation_bound(mdp, horizon)
        suite.record("truncation.sis_bound", "truncated SIS value within gamma^T max|R| / (1 - gamma) of J",
                     max(gap, 0.0), case=case)


def _model_lift_checks(suite: _Suite, base: MdpModel, base_pi: PolicyTable, n_noise: int, seed: int, case: int):
    lift = lift_model_irrelevant(base, base_pi, n_noise, seed)
    mdp, pi, truth = lift.mdp, lift.pi, lift.truth
    b = epsilon_greedy(pi, 0.3)
    tol = suite.report.tol
    q = q_function(mdp, pi)
    j = policy_value(mdp, pi, q)
    p_inf = stationary_distribution(mdp, b)
    model = check_model_irrelevance(truth, mdp, tol)
    q_report = check_q_irrelevance(truth, q, tol)

    suite.gated("irrelevance.f1_q", "f1 with an abstract Q equals J under Q-irrelevance", [q_report],
                lambda: abs(expected_f1(mdp, pi, _block_table(truth, q), truth) - j), case)

    quotient = quotient_mdp(mdp, truth, pi, b, p_inf=p_inf)
    q_phi = q_function(quotient.mdp, quotient.pi)
    suite.gated("model_irrelevance.q_lift", "Q equals the lifted quotient Q under model-irrelevance", [model],
                lambda: float(np.abs(q - truth.lift(q_phi)).max()), case)
    w_phi = aggregate_w(mdp, pi, b, truth, p_inf=p_inf)
    suite.gated("model_irrelevance.mis", "f3 with the aggregated ratio equals J under model-irrelevance", [model],
                lambda: abs(expected_f3(mdp, b, w_phi, p_inf=p_inf, part=truth) - j), case)
    suite.gated("model_irrelevance.sis", "SIS value on the quotient equals SIS value on the ground model", [model],
                lambda: abs(expected_f2(quotient.mdp, quotient.pi, quotient.b, F2_HORIZON)
                            - expected_f2(mdp, pi, b, F2_HORIZON)), case)
    suite.gated("model_irrelevance.drl", "f4 with lifted quotient Q and aggregated ratio equals J", [model],
                lambda: abs(expected_f4(mdp, pi, b, q_phi, w_phi, p_inf=p_inf, part=truth) - j), case)
    return lift


def _backward_lift_checks(suite: _Suite, base: MdpModel, pi: PolicyTable, b: PolicyTable, n_noise: int,
                          seed: int, case: int):
    lift = lift_backward_irrelevant(base, pi, b, n_noise, seed)
    mdp, pi, b, truth = lift.mdp, lift.pi, lift.b, lift.truth
    tol = suite.report.tol
    q = q_function(mdp, pi)
    j = policy_value(mdp, pi, q)
    p_inf = stationary_distribution(mdp, b)
    rho = is_ratio(pi, b)
    w = mis_ratio(mdp, pi, b, p_inf=p_inf)
    backward = check_backward_model_irrelevance(truth, mdp, b, pi, tol)
    rho_report = check_rho_irrelevance(truth, rho, tol)
    w_report = check_w_irrelevance(truth, w, tol)

    suite.record("lift.backward_checker", "constructed backward lift passes the backward checker",
                 backward.worst, case=case)
    suite.gated("irrelevance.f2_rho", "f2 with an abstract ratio equals ground f2 under rho-irrelevance",
                [rho_report],
                lambda: abs(expected_f2(mdp, pi, b, F2_HORIZON, ratio=_block_table(truth, rho), part=truth)
                            - expected_f2(mdp, pi, b, F2_HORIZON)), case)
    suite.gated("irrelevance.f3_w", "f3 with an abstract ratio equals J under w-irrelevance", [w_report],
                lambda: abs(expected_f3(mdp, b, _block_table(truth, w), p_inf=p_inf, part=truth) - j), case)
    suite.gated("irrelevance.f4_w", "f4 with true Q and an abstract ratio equals J under w-irrelevance",
                [w_report],
                lambda: abs(expected_f4(mdp, pi, b, q, _block_table(truth, w), p_inf=p_inf, part=truth) - j), case)

    suite.gated("backward_irrelevance.rho", "backward-model-irrelevance implies rho-irrelevance", [backward],
                lambda: rho_report.worst, case)
    suite.gated("backward_irrelevance.w", "backward-model-irrelevance implies w-irrelevance", [backward],
                lambda: w_report.worst, case)
    suite.gated("backward_irrelevance.fqe", "f1 of the abstract FQE fixed point equals J under backward-model-irrelevance",
                [backward],
                lambda: abs(expected_f1(mdp, pi, abstract_q_fixed_point(mdp, pi, b, truth, p_inf), truth) - j), case)
    suite.gated("identity.abstract_ratio", "pi_phi / b_phi lifted equals rho on a rho-irrelevant partition",
                [rho_report],
                lambda: float(np.abs(truth.lift(abstract_ratio(mdp, pi, b, truth, p_inf)) - rho).max()), case)
    return lift


def _two_step_checks(suite: _Suite, label: str, mdp: MdpModel, pi: PolicyTable, b: PolicyTable, case: int,
                     quotient_value: bool = False):
    tol = suite.report.tol
    result = two_step(mdp, pi, b, tol)
    part = result.partition
    j = policy_value(mdp, pi)
    p_inf = stationary_distribution(mdp, b)
    forward_ok = result.forward.verified
    backward_ok = result.backward.verified
    if not (forward_ok and backward_ok):
        suite.skip(f"two_step.{label}", "two-step estimators equal J",
                   f"refinement reports failed re-verification (forward {forward_ok}, backward {backward_ok})")
        return
    suite.record(f"two_step.fqe.{label}", "f1 of the abstract FQE fixed point on the two-step partition equals J",
                 abs(expected_f1(mdp, pi, abstract_q_fixed_point(mdp, pi, b, part, p_inf), part) - j), case=case)
    suite.record(f"two_step.mis.{label}", "f3 with the aggregated ratio on the two-step partition equals J",
                 abs(expected_f3(mdp, b, aggregate_w(mdp, pi, b, part, p_inf=p_inf), p_inf=p_inf, part=part) - j),
                 case=case)
    if quotient_value:
        suite.record(f"two_step.quotient_value.{label}", "policy value of the two-step quotient equals J",
                     abs(policy_value(result.quotient.mdp, result.quotient.pi) - j), case=case)


def _toy_checks(suite: _Suite, seed: int, case: int, brute_force: bool):
    toy = three_group_toy((2, 2, 2), seed)
    tol = suite.report.tol
    found = {
        "forward": coarsest_forward(toy.mdp, toy.pi, tol),
        "backward": coarsest_backward(toy.mdp, toy.pi, toy.b, tol),
        "two-step": two_step(toy.mdp, toy.pi, toy.b, tol).partition,
    }
    for name, expected in toy.expected().items():
        suite.record(f"toy.{name}", f"toy {name} partition matches the construction",
                     float(found[name] != expected), tol=0.0, case=case)
    if brute_force:
        for condition in ("forward", "backward"):
            oracle = brute_force_coarsest(toy.mdp, toy.pi, toy.b, condition, tol=tol)
            suite.record(f"toy.brute_force.{condition}", f"toy {condition} partition is the coarsest",
                         float(oracle != found[condition]), tol=0.0, case=case)
    _two_step_checks(suite, "toy", toy.mdp, toy.pi, toy.b, case, quotient_value=True)


def _brute_force_checks(suite: _Suite, rng: np.random.Generator, seed: int, case: int):
    tol = suite.report.tol
    n_actions = int(rng.integers(2, 4))
    base = random_mdp(3, n_actions, derive_seed(seed, 10))
    base_pi = random_policy(3, n_actions, derive_seed(seed, 11))
    base_b = random_policy(3, n_actions, derive_seed(seed, 12))

    forward_lift = lift_model_irrelevant(base, base_pi, 2, derive_seed(seed, 13))
    refined = coarsest_forward(forward_lift.mdp, forward_lift.pi, tol)
    oracle = brute_force_coarsest(forward_lift.mdp, forward_lift.pi, condition="forward",
                                  limit=BRUTE_FORCE_STATES, tol=tol)
    suite.record("refinement.forward_vs_brute_force", "forward refinement equals exhaustive search",
                 float(refined != oracle), tol=0.0, case=case)

    backward_lift = lift_backward_irrelevant(base, base_pi, base_b, 2, derive_seed(seed, 14))
    refined = coarsest_backward(backward_lift.mdp, backward_lift.pi, backward_lift.b, tol)
    oracle = brute_force_coarsest(backward_lift.mdp, backward_lift.pi, backward_lift.b, "backward",
                                  limit=BRUTE_FORCE_STATES, tol=tol)
    suite.record("refinement.backward_vs_brute_force", "backward refinement equals exhaustive search",
                 float(refined != oracle), tol=0.0, case=case)

    # unstructured models: the coarsest partition is usually the identity, occasionally not
    n_states = int(rng.integers(2, BRUTE_FORCE_STATES + 1))
    mdp = random_mdp(n_states, n_actions, derive_seed(seed, 15))
    pi = random_policy(n_states, n_actions, derive_seed(seed, 16))
    b = random_policy(n_states, n_actions, derive_seed(seed, 17))
    for condition, refined in (("forward", coarsest_forward(mdp, pi, tol)),
                               ("backward", coarsest_backward(mdp, pi, b, tol))):
        oracle = brute_force_coarsest(mdp, pi, b, condition, limit=BRUTE_FORCE_STATES, tol=tol)
        suite.record(f"refinement.random_{condition}_vs_brute_force",
                     f"{condition} refinement equals exhaustive search on a random model",
                     float(refined != oracle), tol=0.0, case=case)


def _adversarial_checks(suite: _Suite, rng: np.random.Generator, mdp: MdpModel, pi: PolicyTable,
                        b: PolicyTable, truth: Partition, case: int):
    """Merge two blocks of a known partition; the checker must reject it and the assertion is skipped."""
    if truth.n_blocks < 2:
        return
    first, second = (int(x) for x in rng.choice(truth.n_blocks, size=2, replace=False))
    merged = Partition.from_labels(np.where(truth.block_of == second, first, truth.block_of))
    tol = suite.report.tol
    report = check_backward_model_irrelevance(merged, mdp, b, pi, tol)
    suite.record("adversarial.checker_rejects", "checker rejects a randomly merged partition",
                 0.0 if not report.holds else np.inf, case=case)
    j = policy_value(mdp, pi)
    suite.gated("adversarial.backward_fqe", "abstract FQE on a merged partition (precondition gated)", [report],
                lambda: abs(expected_f1(mdp, pi, abstract_q_fixed_point(mdp, pi, b, merged), merged) - j), case)


def verify_theorems(seed: int = 0, n_cases: int = 25, tol: float = 1e-8) -> VerificationReport:
    """
    Run the exact verification suite on n_cases random instances.

    Each case draws a random base model, builds a model-irrelevant and a backward-irrelevant lift of
    it and the three-group toy, and checks population identities, the estimator equalities that each
    irrelevance condition implies, the two-step procedure, the SIS truncation bound and agreement
    with exhaustive search on small lifts and on unstructured random models of up to six states.
    Base models have between 2 and 8 states.

    Args:
        seed: Suite seed; case i uses seeds derived from (seed, i)
        n_cases: Number of random cases (>= 1)
        tol: Residual tolerance and checker tolerance

    Returns:
        VerificationReport; report.ok is False when any assertion failed
    """
    check_scalar(n_cases, "n_cases", numbers.Integral, min_val=1)
    check_scalar(tol, "tol", numbers.Real, min_val=0.0)
    report = VerificationReport(seed, n_cases, tol)
    suite = _Suite(report)

    for case in range(n_cases):
        case_seed = derive_seed(seed, case)
        rng = np.random.default_rng(case_seed)
        sizes = _case_sizes(rng)
        base = random_mdp(sizes["n_base"], sizes["n_actions"], derive_seed(case_seed, 0), gamma=sizes["gamma"])
        pi = random_policy(sizes["n_base"], sizes["n_actions"], derive_seed(case_seed, 1))
        b = random_policy(sizes["n_base"], sizes["n_actions"], derive_seed(case_seed, 2))

        _identities(suite, base, pi, b, case)
        model_lift = _model_lift_checks(suite, base, pi, sizes["n_noise"], derive_seed(case_seed, 3), case)
        backward_lift = _backward_lift_checks(suite, base, pi, b, sizes["n_noise"], derive_seed(case_seed, 4), case)
        _two_step_checks(suite, "model_lift", model_lift.mdp, model_lift.pi, epsilon_greedy(model_lift.pi, 0.3), case)
        _two_step_checks(suite, "backward_lift", backward_lift.mdp, backward_lift.pi, backward_lift.b, case)
        _toy_checks(suite, derive_seed(case_seed, 5), case, brute_force=case == 0)
        _brute_force_checks(suite, rng, case_seed, case)
        _adversarial_checks(suite, rng, backward_lift.mdp, backward_lift.pi, backward_lift.b, backward_lift.truth, case)
        logger.debug(f"Case {case} done ({sizes})")

    failed = [check.name for check in report.checks.values() if check.status == "fail"]
    if failed:
        logger.error(f"Verification failed: {', '.join(failed)}")
    else:
        logger.info(f"Verification passed: {len(report.checks)} checks over {n_cases} case(s)")
    return report
