"""
Domain exceptions shared by every package.

All of them subclass builtin exceptions so callers can catch ValueError/RuntimeError broadly.
"""
from typing import List, Optional, Sequence, Tuple


class ValidationError(ValueError):
    """Raised when a model, policy or file fails validation."""

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


class CoverageError(ValueError):
    """Raised when the behavior policy puts zero mass where the target does not."""

    def __init__(self, message: str, action: int, state: int):
        super().__init__(message)
        self.action = action
        self.state = state


class ConvergenceError(RuntimeError):
    """Raised when an iterative solver exhausts its iteration budget."""

    def __init__(self, message: str, iterations: int, residual: float):
        super().__init__(message)
        self.iterations = iterations
        self.residual = residual


class StationarityError(ValueError):
    """Raised when a chain has no unique stationary distribution or a needed state has zero mass."""

    def __init__(self, message: str, recurrent_classes: Optional[Sequence[Sequence[int]]] = None):
        super().__init__(message)
        self.recurrent_classes: List[Tuple[int, ...]] = [
            tuple(int(s) for s in c) for c in (recurrent_classes or [])
        ]


class PartitionError(ValueError):
    """Raised for malformed or mismatched partitions."""
