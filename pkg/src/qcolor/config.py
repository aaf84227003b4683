"""
Run configuration parser
"""

import json
from collections import UserDict
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any

import jsonschema
from jsonschema.exceptions import ValidationError

from qcolor import ENGINE_VERSION, PATH_DATA, PATH_SCHEMA
from qcolor.utils import canonical_json, sha256_hex

BUILTIN_PREFIX = "builtin:"
BUILTIN_UNIVERSES = {
    "table1": PATH_DATA / "table1_universe.json",
    "four-color": PATH_DATA / "four_color_universe.json",
}
BUILTIN_PROOFS = {"table1": PATH_DATA / "table1.json"}

# Universes used when a run names none, keyed by the sorted coefficient list
DEFAULT_UNIVERSES = {"-4,1,1,1": "four-color"}

# JSON keys that differ from the dataclass field names
_UNIVERSE_KEYS = {"closureRounds": "closure_rounds", "maxNodes": "max_nodes"}
_BUDGET_KEYS = {"maxBranches": "max_branches", "maxSolutions": "max_solutions", "maxSeconds": "max_seconds"}
_RUN_KEYS = {"sequentialEquivalent": "sequential_equivalent", "format": "fmt"}


def _rename(data: dict[str, Any], keys: dict[str, str]) -> dict[str, Any]:
    return {keys.get(k, k): v for k, v in data.items()}


def _unrename(data: dict[str, Any], keys: dict[str, str]) -> dict[str, Any]:
    inverse = {v: k for k, v in keys.items()}
    return {inverse.get(k, k): v for k, v in data.items()}


@dataclass
class UniverseConfig:
    """Node universe: an exponent box grown by closure, explicit values, or 1..integers"""

    primes: list[int] = field(default_factory=lambda: [2, 3, 5])
    bounds: dict[str, list[int]] = field(default_factory=lambda: {"2": [-3, 3], "3": [-3, 3], "5": [-3, 3]})
    negatives: bool = True
    closure_rounds: int = 3
    core: list[str] = field(default_factory=lambda: ["1"])
    max_nodes: int = 600
    values: list[str] | None = None
    integers: int | None = None

    @classmethod
    def from_dict(cls, data: dict[str, Any] | None) -> "UniverseConfig":
        if not data:
            return cls()
        valid_fields = {f.name for f in fields(cls)}
        init_data = {k: v for k, v in _rename(data, _UNIVERSE_KEYS).items() if k in valid_fields}
        if "bounds" in init_data:
            init_data["bounds"] = {str(p): list(b) for p, b in init_data["bounds"].items()}
        if "primes" in init_data and "bounds" not in init_data:
            init_data["bounds"] = {str(p): [0, 0] for p in init_data["primes"]}
        if ("values" in init_data or "integers" in init_data) and "primes" not in init_data:
            init_data["primes"] = []
        return cls(**init_data)

    def to_dict(self) -> dict[str, Any]:
        return _unrename({k: v for k, v in asdict(self).items() if v is not None}, _UNIVERSE_KEYS)


@dataclass
class Budget:
    """Search limits; exceeding any of them ends a run with BudgetExceeded"""

    max_branches: int = 1_000_000
    max_solutions: int = 100_000
    max_seconds: float | None = None

    @classmethod
    def from_dict(cls, data: dict[str, Any] | None) -> "Budget":
        if not data:
            return cls()
        valid_fields = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in _rename(data, _BUDGET_KEYS).items() if k in valid_fields})

    def to_dict(self) -> dict[str, Any]:
        return _unrename({k: v for k, v in asdict(self).items() if v is not None}, _BUDGET_KEYS)


@dataclass
class RunConfig:
    """One command invocation, as assembled from a config file and CLI flags"""

    command: str = ""
    equation: str | None = None
    colors: int | None = None
    universe: UniverseConfig | str | None = None
    coloring: dict[str, Any] | str | None = None
    seeds: list[str] = field(default_factory=list)
    budget: Budget = field(default_factory=Budget)
    parallel: int = 1
    sequential_equivalent: bool = False
    limit: int | None = None
    strong: bool = False
    output: str | None = None
    fmt: str = "json"

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "RunConfig":
        """
        Create RunConfig from dictionary, handling nested dataclasses.
        """
        field_names = {f.name for f in fields(cls)}
        init_data = {k: v for k, v in _rename(data, _RUN_KEYS).items() if k in field_names}

        if isinstance(init_data.get("universe"), dict):
            init_data["universe"] = UniverseConfig.from_dict(init_data["universe"])
        if isinstance(init_data.get("budget"), dict):
            init_data["budget"] = Budget.from_dict(init_data["budget"])
        if isinstance(init_data.get("equation"), list):
            init_data["equation"] = ",".join(str(a) for a in init_data["equation"])

        return cls(**init_data)

    def to_dict(self) -> dict[str, Any]:
        """Convert RunConfig to dictionary, excluding None values"""
        data: dict[str, Any] = {}
        for f in fields(self):
            value = getattr(self, f.name)
            if value is None:
                continue
            if isinstance(value, (UniverseConfig, Budget)):
                value = value.to_dict()
            data[f.name] = value
        return _unrename(data, _RUN_KEYS)

    def cache_key(self) -> str:
        """
        SHA-256 over the canonical JSON of everything that can change the
        result, plus the engine version. Output location and format are
        rendering concerns and stay out of the key.
        """
        data = self.to_dict()
        for key in ("output", "format"):
            data.pop(key, None)
        return sha256_hex(canonical_json({"engine": ENGINE_VERSION, "run": data}))


class ConfigError(Exception):
    """Custom exception for configuration errors"""

    pass


def _load_schema() -> dict[str, Any]:
    with PATH_SCHEMA.open("r", encoding="utf-8") as f:
        return json.loads(f.read())


def validate_document(data: Any, kind: str, source: str = "<document>") -> None:
    """Validate a JSON document against one definition of the packaged schema"""
    schema = Config._schema
    if kind not in schema["$defs"]:
        raise ConfigError(f"Unknown document kind '{kind}'")
    try:
        jsonschema.validate(data, {"$schema": schema["$schema"], "$defs": schema["$defs"], "$ref": f"#/$defs/{kind}"})
    except ValidationError as e:
        location = "/".join(str(p) for p in e.absolute_path) or "(root)"
        raise ConfigError(f"{kind} validation failed for '{source}' at {location}: {e.message}") from e


def resolve_builtin(reference: str | Path, table: dict[str, Path]) -> Path:
    """Map "builtin:<name>" to a packaged data file; other paths pass through"""
    text = str(reference)
    if text.startswith(BUILTIN_PREFIX):
        name = text[len(BUILTIN_PREFIX) :]
        if name not in table:
            raise ConfigError(f"Unknown built-in '{name}' (available: {', '.join(sorted(table))})")
        return table[name]
    return Path(reference)


class Config(UserDict[str, Any]):
    """
    Read-only dictionary view of a JSON document validated against the
    packaged schema definition ``kind`` (run, universe, coloring, proofTree).
    """

    _schema: dict[str, Any] = _load_schema()

    def __init__(self, path: str | Path, kind: str = "run") -> None:
        super().__init__()
        self._path: Path = Path(path)
        self.kind = kind
        try:
            with self._path.open(encoding="utf-8") as f:
                data: Any = json.loads(f.read())
        except OSError as e:
            raise ConfigError(f"Could not read config file '{self._path}': {e}") from e
        except ValueError as e:
            raise ConfigError(f"Invalid JSON in config file '{self._path}': {e}") from e
        validate_document(data, kind, str(self._path))
        self.data = data

    @property
    def path(self) -> Path:
        return self._path

    def as_dataclass(self) -> RunConfig | UniverseConfig:
        """Convert to the dataclass matching this document kind"""
        if self.kind == "run":
            return RunConfig.from_dict(self.data)
        if self.kind == "universe":
            return UniverseConfig.from_dict(self.data)
        raise ConfigError(f"No dataclass for '{self.kind}' documents")
