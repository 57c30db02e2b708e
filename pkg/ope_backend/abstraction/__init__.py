"""
State abstractions as partitions: irrelevance checks, coarsest refinements, quotients and the
two-step procedure.
"""
from abstraction.partition import Partition, compose, canonical_labels
from abstraction.checks import (
    IrrelevanceReport,
    Witness,
    check_pi_irrelevance,
    check_q_irrelevance,
    check_rho_irrelevance,
    check_w_irrelevance,
    check_model_irrelevance,
    check_forward_irrelevance,
    check_backward_model_irrelevance,
)
from abstraction.refinement import (
    RefinementResult,
    refine_forward,
    refine_backward,
    coarsest_forward,
    coarsest_backward,
)
from abstraction.quotient import QuotientModel, quotient_mdp, block_weights, project_policy
from abstraction.two_step import TwoStepResult, two_step
from abstraction.brute_force import brute_force_coarsest, set_partitions

__all__ = [
    'Partition',
    'compose',
    'canonical_labels',
    'IrrelevanceReport',
    'Witness',
    'check_pi_irrelevance',
    'check_q_irrelevance',
    'check_rho_irrelevance',
    'check_w_irrelevance',
    'check_model_irrelevance',
    'check_forward_irrelevance',
    'check_backward_model_irrelevance',
    'RefinementResult',
    'refine_forward',
    'refine_backward',
    'coarsest_forward',
    'coarsest_backward',
    'QuotientModel',
    'quotient_mdp',
    'block_weights',
    'project_policy',
    'TwoStepResult',
    'two_step',
    'brute_force_coarsest',
    'set_partitions',
]
