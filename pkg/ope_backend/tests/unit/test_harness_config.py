"""
Unit tests for harness.config - experiment configuration and output-directory precedence.
"""
import json
from pathlib import Path

import pytest
from pydantic import ValidationError as PydanticValidationError

import harness.config as config_module
from harness.config import ExperimentConfig, GeneratorSpec, load_config


def _payload(**overrides):
    payload = {
        "generator": {"kind": "toy", "seed": 1},
        "epsilons": [0.2, 0.5],
        "sample_sizes": [10, 20],
        "horizon": 5,
        "methods": ["fqe", "mis"],
        "abstractions": ["none", "two-step"],
        "replications": 2,
    }
    payload.update(overrides)
    return payload


class TestExperimentConfig:
    """Tests for ExperimentConfig validation."""

    def test_defaults(self):
        """Test optional fields take their defaults."""
        config = ExperimentConfig.model_validate(_payload(abstractions=["none"]))
        assert config.init_mode == "stationary"
        assert config.base_seed == 0
        assert config.generator.gamma == 0.9

    @pytest.mark.parametrize("overrides", [
        {"epsilons": []},
        {"epsilons": [0.0]},
        {"epsilons": [1.5]},
        {"sample_sizes": [0]},
        {"horizon": 0},
        {"methods": ["dm"]},
        {"abstractions": ["bisimulation"]},
        {"replications": 0},
        {"init_mode": "uniform"},
        {"generator": {"kind": "toy", "gamma": 0.0}},
        {"generator": {"kind": "toy", "gamma": 1.0}},
    ])
    def test_rejects_invalid(self, overrides):
        with pytest.raises(PydanticValidationError):
            ExperimentConfig.model_validate(_payload(**overrides))

    def test_unknown_generator_kind(self):
        with pytest.raises(PydanticValidationError, match="kind"):
            GeneratorSpec(kind="grid")


class TestOutputDir:
    """Tests for output directory precedence."""

    def test_cli_argument_wins(self, monkeypatch):
        monkeypatch.setattr(config_module, "OUTPUT_DIR", "/from/env")
        config = ExperimentConfig.model_validate(_payload(output="from_config"))
        assert config.output_dir("from_cli") == Path("from_cli")

    def test_environment_over_config(self, monkeypatch):
        monkeypatch.setattr(config_module, "OUTPUT_DIR", "/from/env")
        config = ExperimentConfig.model_validate(_payload(output="from_config"))
        assert config.output_dir() == Path("/from/env")

    def test_config_then_default(self, monkeypatch):
        monkeypatch.setattr(config_module, "OUTPUT_DIR", None)
        assert ExperimentConfig.model_validate(_payload(output="from_config")).output_dir() == Path("from_config")
        assert ExperimentConfig.model_validate(_payload()).output_dir() == Path("results")


class TestLoadConfig:
    """Tests for load_config."""

    def test_load(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text(json.dumps(_payload()))
        config = load_config(path)
        assert config.methods == ["fqe", "mis"]

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text("{not json")
        with pytest.raises(ValueError, match="invalid experiment config"):
            load_config(path)

    def test_invalid_fields(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text(json.dumps(_payload(methods=[])))
        with pytest.raises(ValueError, match="invalid experiment config"):
            load_config(path)

    @pytest.mark.parametrize("name", ["toy_sweep.json", "scaled_toy.json"])
    def test_shipped_configs(self, name):
        """Test the configs in the project's configs/ directory validate."""
        path = Path(__file__).resolve().parents[3] / "configs" / name
        config = load_config(path)
        assert config.generator.kind in ("toy", "scaled-toy")
        assert config.init_mode == "stationary"
