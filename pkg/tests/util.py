import json
from fractions import Fraction
from pathlib import Path
from typing import Any

PATH_TEST_DATA = Path(__file__).parent / "data"


def fractions(*values: str | int) -> list[Fraction]:
    return [Fraction(v) for v in values]


def write_json(path: Path, data: Any) -> Path:
    path.write_text(json.dumps(data, indent=4), encoding="utf-8")
    return path


def subtree_end(rows: list[dict[str, Any]], index: int) -> int:
    """Index one past the last row of the subtree rooted at ``index``"""
    depth = rows[index]["depth"]
    end = index + 1
    while end < len(rows) and rows[end]["depth"] > depth:
        end += 1
    return end


def drop_subtree(document: dict[str, Any], index: int) -> dict[str, Any]:
    """Copy of a proof document without the subtree rooted at row ``index``"""
    rows = document["rows"]
    return {**document, "rows": rows[:index] + rows[subtree_end(rows, index) :]}
