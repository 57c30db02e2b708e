"""
CLI command modules.
"""
from harness.commands.solve import solve
from harness.commands.abstract import abstract
from harness.commands.simulate import simulate
from harness.commands.estimate import estimate
from harness.commands.generate import generate
from harness.commands.experiment import experiment
from harness.commands.verify import verify
from harness.commands.test import test, test_app

__all__ = [
    'solve',
    'abstract',
    'simulate',
    'estimate',
    'generate',
    'experiment',
    'verify',
    'test',
    'test_app',
]
