"""
Name-based access to the estimators.
"""
from typing import Optional

from abstraction.partition import Partition
from estimators.constants import METHODS
from estimators.drl import drl
from estimators.fqe import fqe
from estimators.mis import mis
from estimators.result import EstimateResult
from estimators.sis import sis
from mdp.dataset import Dataset
from mdp.model import PolicyTable

_ESTIMATORS = {"fqe": fqe, "sis": sis, "mis": mis, "drl": drl}


def run_estimator(method: str, dataset: Dataset, pi: PolicyTable, part: Optional[Partition] = None,
                  gamma: float = 0.9, **kwargs) -> EstimateResult:
    """Run the estimator registered under `method` with keyword options passed through."""
    if method not in _ESTIMATORS:
        raise ValueError(f"Unknown method '{method}'. Use one of {METHODS}")
    return _ESTIMATORS[method](dataset, pi, part, gamma, **kwargs)
