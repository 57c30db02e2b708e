"""
Off-policy estimators (FQE, SIS, MIS, DRL) on ground or abstract state spaces, plus their exact
population counterparts.
"""
from estimators.result import EstimateResult, describe_partition
from estimators.empirical import (
    BehaviorEstimate,
    estimate_behavior,
    estimate_behavior_by_step,
    behavior_drift,
    project_target,
    empirical_mdp,
)
from estimators.fqe import fqe, fit_fqe, FqeFit
from estimators.sis import sis
from estimators.mis import mis, fit_mis_weights, MisFit
from estimators.drl import drl, doubly_robust_value
from estimators.dispatch import run_estimator
from estimators.population import (
    expected_f1,
    expected_f2,
    expected_f3,
    expected_f4,
    abstract_ratio,
    aggregate_w,
    abstract_q_fixed_point,
)

__all__ = [
    'EstimateResult',
    'describe_partition',
    'BehaviorEstimate',
    'estimate_behavior',
    'estimate_behavior_by_step',
    'behavior_drift',
    'project_target',
    'empirical_mdp',
    'fqe',
    'fit_fqe',
    'FqeFit',
    'sis',
    'mis',
    'fit_mis_weights',
    'MisFit',
    'drl',
    'doubly_robust_value',
    'run_estimator',
    'expected_f1',
    'expected_f2',
    'expected_f3',
    'expected_f4',
    'abstract_ratio',
    'aggregate_w',
    'abstract_q_fixed_point',
]
