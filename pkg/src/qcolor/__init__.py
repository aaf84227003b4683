"""
qcolor

Colorings of the nonzero rational numbers that avoid monochromatic solutions
to linear homogeneous equations, together with a propagation-and-branching
prover that emits checkable proof tables.

This package provides tools for:
- Exact rational arithmetic with p-adic valuations and residues
- Building equations such as E(q,n) and deriving their forbidden ratios
- Evaluating a catalog of colorings and scanning them for monochromatic solutions
- Proving r-regularity over finite node universes and checking proof tables

Public API:
    - CLI commands: catalog, eval, verify, ratios, prove, enumerate, check-table, export, clean
    - Core modules: ratcore, equations, colorings, universe, engine, proof
    - Configuration: Config, RunConfig, UniverseConfig, Budget

Example usage:
    >>> from qcolor.equations import forbidden_ratios, make_equation_E
    >>> [str(r.ratio) for r in forbidden_ratios(make_equation_E(2, 3))]
    ['2', '3/2', '4/3']

For CLI usage, see: qcolor --help
"""

import tomllib
from email.message import Message
from importlib import metadata as pkg_metadata
from pathlib import Path
from typing import Any, cast


def _get_project_metadata() -> dict[str, Any]:
    """
    Read project metadata from installed package or pyproject.toml.

    Priority:
    1. Try to read from installed package metadata
    2. Fall back to pyproject.toml (for development)
    3. Use hardcoded fallback values
    """
    try:
        package_metadata = cast(Message, pkg_metadata.metadata("qcolor"))
        return {
            "name": package_metadata.get("Name", "qcolor"),
            "version": package_metadata.get("Version", "0.0.0"),
            "description": package_metadata.get("Summary", "qcolor"),
        }
    except (pkg_metadata.PackageNotFoundError, Exception):
        try:
            pyproject_path = Path(__file__).parent.parent.parent / "pyproject.toml"
            with open(pyproject_path, "rb") as f:
                data = tomllib.load(f)
            project = data.get("project")
            if isinstance(project, dict):
                return project
        except (FileNotFoundError, tomllib.TOMLDecodeError):
            pass

        return {"name": "qcolor", "version": "0.0.0", "description": "qcolor"}


_metadata = _get_project_metadata()

__version__ = _metadata.get("version", "0.0.0")
__title__ = _metadata.get("description", "qcolor")

# Bumped whenever a change can alter proof trees or enumeration output,
# so cached results from older engines are never served.
ENGINE_VERSION = "4"

PATH_PACKAGE = Path(__file__).resolve().parent
PATH_DATA = PATH_PACKAGE / "data"
PATH_SCHEMA = PATH_PACKAGE / "schema.json"

# Environment variables
ENV_CACHE_DIR = "QCOLOR_CACHE_DIR"
ENV_LOG_LEVEL = "QCOLOR_LOG_LEVEL"

__all__ = [
    "ENGINE_VERSION",
    "ENV_CACHE_DIR",
    "ENV_LOG_LEVEL",
    "PATH_DATA",
    "PATH_PACKAGE",
    "PATH_SCHEMA",
    "__title__",
    "__version__",
]
