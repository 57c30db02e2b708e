"""
Command-line harness: experiment sweeps, the verification suite and the CLI commands.
"""
from harness.config import ExperimentConfig, GeneratorSpec, load_config
from harness.experiment import ExperimentResult, aggregate, run_experiment
from harness.run_logger import RunLogger
from harness.verify import CheckResult, VerificationReport, verify_theorems

__all__ = [
    'ExperimentConfig',
    'GeneratorSpec',
    'load_config',
    'ExperimentResult',
    'aggregate',
    'run_experiment',
    'RunLogger',
    'CheckResult',
    'VerificationReport',
    'verify_theorems',
]
