"""
pytest configuration and fixtures for qcolor tests
"""

import json
import tempfile
from pathlib import Path
from typing import Any

import pytest

from qcolor import ENV_CACHE_DIR, ENV_LOG_LEVEL
from qcolor.config import BUILTIN_UNIVERSES, Config, UniverseConfig
from qcolor.equations import LinearEquation, make_equation_E, parse_equation
from qcolor.proof import ProofTree, load_table1
from qcolor.universe import NodeUniverse, generate_universe, universe_from_config, universe_from_values


@pytest.fixture
def temp_project_dir():
    """Create a temporary working directory"""
    with tempfile.TemporaryDirectory() as temp_dir:
        yield Path(temp_dir)


@pytest.fixture(autouse=True)
def isolated_environment(monkeypatch):
    """Keep the caller's cache directory and log level out of every test"""
    monkeypatch.delenv(ENV_CACHE_DIR, raising=False)
    monkeypatch.delenv(ENV_LOG_LEVEL, raising=False)


@pytest.fixture
def cache_dir(temp_project_dir, monkeypatch) -> Path:
    """Result cache rooted in the temporary directory via the environment"""
    path = temp_project_dir / "cache"
    monkeypatch.setenv(ENV_CACHE_DIR, str(path))
    return path


@pytest.fixture
def e23() -> LinearEquation:
    """x + 2y = 4z"""
    return make_equation_E(2, 3)


@pytest.fixture
def schur4() -> LinearEquation:
    """x1 + x2 + x3 = 4 x4"""
    return parse_equation("1,1,1,-4")


@pytest.fixture
def box_23() -> NodeUniverse:
    """±2^a 3^b with |a|, |b| <= 2"""
    return generate_universe([2, 3], {2: (-2, 2), 3: (-2, 2)}, include_negatives=True)


@pytest.fixture
def small_values() -> NodeUniverse:
    """Twelve positive rationals over 2 and 3"""
    return universe_from_values(["1/2", "2/3", "3/4", "1", "4/3", "3/2", "2", "3", "4", "6", "8", "9"])


@pytest.fixture
def table1_universe() -> NodeUniverse:
    """The 35 values the shipped four-color proof works over"""
    config = Config(BUILTIN_UNIVERSES["table1"], kind="universe").as_dataclass()
    assert isinstance(config, UniverseConfig)
    return universe_from_config(config)


@pytest.fixture
def four_color_universe(schur4) -> NodeUniverse:
    """The packaged closure universe for x1 + x2 + x3 = 4x4"""
    config = Config(BUILTIN_UNIVERSES["four-color"], kind="universe").as_dataclass()
    assert isinstance(config, UniverseConfig)
    return universe_from_config(config, schur4)


@pytest.fixture
def table1() -> ProofTree:
    return load_table1()


@pytest.fixture
def table1_document() -> dict[str, Any]:
    """The shipped proof as a plain JSON document, safe to mutate"""
    return load_table1().to_dict()


@pytest.fixture
def sample_run_config() -> dict[str, Any]:
    """Sample run configuration document"""
    return {
        "command": "prove",
        "equation": ["1", "1", "1", "-4"],
        "colors": 4,
        "universe": {"primes": [2, 3], "bounds": {"2": [-1, 1], "3": [-1, 1]}, "negatives": False},
        "seeds": ["c(1)=c(3)"],
        "budget": {"maxBranches": 1000},
        "sequentialEquivalent": True,
        "format": "latex",
    }


@pytest.fixture
def run_config_file(temp_project_dir, sample_run_config) -> Path:
    """Write the sample run configuration to the temporary directory"""
    config_path = temp_project_dir / "run.json"
    config_path.write_text(json.dumps(sample_run_config, indent=2), encoding="utf-8")
    return config_path

