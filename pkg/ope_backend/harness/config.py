"""
Experiment configuration, validated with pydantic.
"""
import json
import logging
from pathlib import Path
from typing import List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, Field, ValidationError as PydanticValidationError, field_validator

from abstraction.constants import ABSTRACTION_TOL
from estimators.constants import METHODS
from generators.constants import DEFAULT_ACTIONS, DEFAULT_BASE_STATES, GENERATOR_KINDS
from harness.constants import ABSTRACTION_MODES, OUTPUT_DIR

logger = logging.getLogger(__name__)


class GeneratorSpec(BaseModel):
    kind: str = "toy"
    seed: int = 0
    n_states: int = Field(DEFAULT_BASE_STATES, ge=1)
    n_actions: int = Field(DEFAULT_ACTIONS, ge=1)
    n_noise: Optional[int] = Field(None, ge=1)
    sizes: Optional[Tuple[int, int, int]] = None
    gamma: float = Field(0.9, gt=0.0, lt=1.0)
    reward_noise_std: float = Field(0.0, ge=0.0)

    @field_validator("kind")
    @classmethod
    def _known_kind(cls, value: str) -> str:
        if value not in GENERATOR_KINDS:
            raise ValueError(f"kind must be one of {GENERATOR_KINDS}, got '{value}'")
        return value


class ExperimentConfig(BaseModel):
    """
    One sweep: every (epsilon, n, replication) cell runs every (method, abstraction) pair on a
    shared dataset.

    init_mode "stationary" starts trajectories (and the evaluated initial distribution) at the
    stationary law of the behavior chain, which the ratio-based estimators assume; "rho0" keeps the
    generator's initial distribution.
    """
    generator: GeneratorSpec = Field(default_factory=GeneratorSpec)
    epsilons: List[float] = Field(..., min_length=1)
    sample_sizes: List[int] = Field(..., min_length=1)
    horizon: int = Field(..., ge=1)
    methods: List[str] = Field(..., min_length=1)
    abstractions: List[str] = Field(default_factory=lambda: ["none"], min_length=1)
    replications: int = Field(1, ge=1)
    base_seed: int = 0
    tolerance: float = Field(ABSTRACTION_TOL, ge=0.0)
    init_mode: Literal["stationary", "rho0"] = "stationary"
    output: Optional[str] = None

    @field_validator("epsilons")
    @classmethod
    def _epsilon_range(cls, value: List[float]) -> List[float]:
        for eps in value:
            if not 0.0 < eps <= 1.0:
                raise ValueError(f"epsilon must lie in (0, 1], got {eps}")
        return value

    @field_validator("sample_sizes")
    @classmethod
    def _positive_sizes(cls, value: List[int]) -> List[int]:
        if any(n < 1 for n in value):
            raise ValueError(f"sample sizes must be >= 1, got {value}")
        return value

    @field_validator("methods")
    @classmethod
    def _known_methods(cls, value: List[str]) -> List[str]:
        unknown = [m for m in value if m not in METHODS]
        if unknown:
            raise ValueError(f"unknown methods {unknown}; expected a subset of {list(METHODS)}")
        return value

    @field_validator("abstractions")
    @classmethod
    def _known_abstractions(cls, value: List[str]) -> List[str]:
        unknown = [m for m in value if m not in ABSTRACTION_MODES]
        if unknown:
            raise ValueError(f"unknown abstractions {unknown}; expected a subset of {list(ABSTRACTION_MODES)}")
        return value

    def output_dir(self, override: Optional[Union[str, Path]] = None) -> Path:
        """CLI argument first, then OPE_OUTPUT_DIR, then the config's own path, then ./results."""
        chosen = override or OUTPUT_DIR or self.output or "results"
        return Path(chosen)


def load_config(path: Union[str, Path]) -> ExperimentConfig:
    """
    Read and validate an experiment config file.

    Raises:
        ValueError: the file is not valid JSON or fails validation
    """
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
        config = ExperimentConfig.model_validate(payload)
    except (json.JSONDecodeError, PydanticValidationError) as e:
        raise ValueError(f"invalid experiment config {path}: {e}") from e
    logger.info(f"Loaded experiment config {path}: {len(config.epsilons)} epsilon(s), "
                f"{len(config.sample_sizes)} size(s), {config.replications} replication(s)")
    return config
