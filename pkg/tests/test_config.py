"""
Tests for qcolor.config module
"""

import json
from unittest.mock import patch

import pytest

from qcolor.config import (
    BUILTIN_PROOFS,
    BUILTIN_UNIVERSES,
    DEFAULT_UNIVERSES,
    Budget,
    Config,
    ConfigError,
    RunConfig,
    UniverseConfig,
    resolve_builtin,
    validate_document,
)
from tests.util import PATH_TEST_DATA, write_json


class TestUniverseConfig:
    """Test UniverseConfig dataclass"""

    def test_default_values(self):
        config = UniverseConfig()

        assert config.primes == [2, 3, 5]
        assert config.bounds == {"2": [-3, 3], "3": [-3, 3], "5": [-3, 3]}
        assert config.negatives is True
        assert config.closure_rounds == 3
        assert config.core == ["1"]
        assert config.max_nodes == 600
        assert config.values is None
        assert config.integers is None

    def test_from_dict_with_none(self):
        assert UniverseConfig.from_dict(None) == UniverseConfig()

    def test_from_dict_renames_keys(self):
        config = UniverseConfig.from_dict({"closureRounds": 1, "maxNodes": 50, "negatives": False})

        assert config.closure_rounds == 1
        assert config.max_nodes == 50
        assert config.negatives is False

    def test_primes_without_bounds(self):
        """Test that listed primes without bounds get the trivial range"""
        config = UniverseConfig.from_dict({"primes": [2, 7]})
        assert config.bounds == {"2": [0, 0], "7": [0, 0]}

    def test_values_without_primes(self):
        """Test that explicit values leave the primes to be detected"""
        config = UniverseConfig.from_dict({"values": ["1/2", "3"]})
        assert config.primes == []
        assert config.values == ["1/2", "3"]

    def test_from_dict_ignores_unknown_keys(self):
        config = UniverseConfig.from_dict({"closureRounds": 2, "colour": "blue"})
        assert config.closure_rounds == 2
        assert not hasattr(config, "colour")

    def test_to_dict(self):
        data = UniverseConfig.from_dict({"primes": [2], "bounds": {"2": [-1, 1]}, "closureRounds": 0}).to_dict()
        assert data == {
            "primes": [2],
            "bounds": {"2": [-1, 1]},
            "negatives": True,
            "closureRounds": 0,
            "core": ["1"],
            "maxNodes": 600,
        }


class TestBudget:
    """Test Budget dataclass"""

    def test_default_values(self):
        budget = Budget()
        assert budget.max_branches == 1_000_000
        assert budget.max_solutions == 100_000
        assert budget.max_seconds is None

    def test_round_trip(self):
        budget = Budget.from_dict({"maxBranches": 10, "maxSeconds": 1.5})
        assert budget == Budget(max_branches=10, max_seconds=1.5)
        assert budget.to_dict() == {"maxBranches": 10, "maxSolutions": 100_000, "maxSeconds": 1.5}


class TestRunConfig:
    """Test RunConfig dataclass"""

    def test_from_dict(self, sample_run_config):
        config = RunConfig.from_dict(sample_run_config)

        assert config.command == "prove"
        assert config.equation == "1,1,1,-4"
        assert config.colors == 4
        assert isinstance(config.universe, UniverseConfig)
        assert config.universe.primes == [2, 3]
        assert config.universe.negatives is False
        assert config.seeds == ["c(1)=c(3)"]
        assert config.budget == Budget(max_branches=1000)
        assert config.sequential_equivalent is True
        assert config.fmt == "latex"

    def test_builtin_universe_reference(self):
        config = RunConfig.from_dict({"command": "prove", "universe": "builtin:table1"})
        assert config.universe == "builtin:table1"

    def test_to_dict_skips_none(self):
        data = RunConfig(command="ratios", equation="E(2,3)").to_dict()

        assert data["command"] == "ratios"
        assert data["format"] == "json"
        assert data["sequentialEquivalent"] is False
        assert "colors" not in data
        assert "coloring" not in data
        assert "universe" not in data
        assert data["budget"] == Budget().to_dict()

    def test_dict_round_trip(self, sample_run_config):
        config = RunConfig.from_dict(sample_run_config)
        assert RunConfig.from_dict(config.to_dict()) == config


class TestCacheKey:
    """Test content addressing of runs"""

    def test_stable(self, sample_run_config):
        first = RunConfig.from_dict(sample_run_config).cache_key()
        second = RunConfig.from_dict(dict(reversed(list(sample_run_config.items())))).cache_key()
        assert first == second
        assert len(first) == 64

    def test_rendering_options_are_ignored(self, sample_run_config):
        """Test that output path and format share one entry"""
        config = RunConfig.from_dict(sample_run_config)
        other = RunConfig.from_dict({**sample_run_config, "format": "json", "output": "proof.json"})
        assert config.cache_key() == other.cache_key()

    def test_inputs_change_the_key(self, sample_run_config):
        config = RunConfig.from_dict(sample_run_config)
        assert config.cache_key() != RunConfig.from_dict({**sample_run_config, "colors": 3}).cache_key()
        assert config.cache_key() != RunConfig.from_dict({**sample_run_config, "seeds": []}).cache_key()

    def test_engine_version(self, sample_run_config):
        """Test that a new engine version invalidates old keys"""
        config = RunConfig.from_dict(sample_run_config)
        key = config.cache_key()
        with patch("qcolor.config.ENGINE_VERSION", "next"):
            assert config.cache_key() != key


class TestConfig:
    """Test Config document loading"""

    def test_load_run_config(self, run_config_file):
        config = Config(run_config_file)

        assert config.path == run_config_file
        assert config["command"] == "prove"
        assert config["colors"] == 4
        run = config.as_dataclass()
        assert isinstance(run, RunConfig)
        assert run.seeds == ["c(1)=c(3)"]

    def test_load_test_data(self):
        universe = Config(PATH_TEST_DATA / "universe_small.json", kind="universe").as_dataclass()
        assert isinstance(universe, UniverseConfig)
        assert universe.closure_rounds == 0

        run = Config(PATH_TEST_DATA / "run_verify.json").as_dataclass()
        assert isinstance(run, RunConfig)
        assert run.command == "verify"
        assert run.coloring == {"variant": "Cpn", "p": 2, "n": 3}

    def test_builtin_universes(self):
        """Test that every packaged universe loads and every default names one"""
        for path in BUILTIN_UNIVERSES.values():
            assert isinstance(Config(path, kind="universe").as_dataclass(), UniverseConfig)
        assert set(DEFAULT_UNIVERSES.values()) <= set(BUILTIN_UNIVERSES)

        four_color = Config(BUILTIN_UNIVERSES["four-color"], kind="universe").as_dataclass()
        assert isinstance(four_color, UniverseConfig)
        assert four_color.closure_rounds == 2
        assert four_color.bounds["11"] == [0, 1]

    def test_missing_file(self, temp_project_dir):
        with pytest.raises(ConfigError) as exc_info:
            Config(temp_project_dir / "nonexistent.json")
        assert "Could not read config file" in str(exc_info.value)

    def test_invalid_json(self, temp_project_dir):
        path = temp_project_dir / "broken.json"
        path.write_text("{ invalid json", encoding="utf-8")
        with pytest.raises(ConfigError) as exc_info:
            Config(path)
        assert "Invalid JSON" in str(exc_info.value)

    def test_schema_violation(self, temp_project_dir, sample_run_config):
        """Test that errors name the failing location"""
        path = write_json(temp_project_dir / "run.json", {**sample_run_config, "colors": 0})
        with pytest.raises(ConfigError) as exc_info:
            Config(path)
        assert "colors" in str(exc_info.value)

    def test_unknown_property(self, temp_project_dir):
        path = write_json(temp_project_dir / "run.json", {"command": "prove", "colours": 3})
        with pytest.raises(ConfigError):
            Config(path)

    def test_no_dataclass_for_kind(self):
        config = Config(PATH_TEST_DATA / "coloring_c23prime.json", kind="coloring")
        assert config["variant"] == "Override"
        with pytest.raises(ConfigError):
            config.as_dataclass()


class TestDocuments:
    """Test schema validation and built-in references"""

    def test_validate_proof(self):
        with BUILTIN_PROOFS["table1"].open(encoding="utf-8") as f:
            validate_document(json.load(f), "proofTree")

    def test_unknown_kind(self):
        with pytest.raises(ConfigError) as exc_info:
            validate_document({}, "manifest")
        assert "Unknown document kind" in str(exc_info.value)

    @pytest.mark.parametrize("value", ["1/2", "-3", "17"])
    def test_rational_strings(self, value):
        validate_document(value, "rational")

    @pytest.mark.parametrize("value", ["1.5", "a", "1/"])
    def test_invalid_rational_strings(self, value):
        with pytest.raises(ConfigError):
            validate_document(value, "rational")

    def test_resolve_builtin(self, temp_project_dir):
        assert resolve_builtin("builtin:table1", BUILTIN_PROOFS) == BUILTIN_PROOFS["table1"]
        assert resolve_builtin(temp_project_dir / "x.json", BUILTIN_PROOFS) == temp_project_dir / "x.json"

    def test_resolve_unknown_builtin(self):
        with pytest.raises(ConfigError) as exc_info:
            resolve_builtin("builtin:table9", BUILTIN_PROOFS)
        assert "table1" in str(exc_info.value)
