"""
MDP instances with known abstraction structure.
"""
from generators.random import random_mdp, random_policy, random_deterministic_policy
from generators.lifts import ModelLift, BackwardLift, lift_policy, lift_model_irrelevant, lift_backward_irrelevant
from generators.toy import ToyInstance, three_group_toy, scaled_toy
from generators.instances import Instance, build_instance

__all__ = [
    'random_mdp',
    'random_policy',
    'random_deterministic_policy',
    'ModelLift',
    'BackwardLift',
    'lift_policy',
    'lift_model_irrelevant',
    'lift_backward_irrelevant',
    'ToyInstance',
    'three_group_toy',
    'scaled_toy',
    'Instance',
    'build_instance',
]
