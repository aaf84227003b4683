"""
Utility functions
"""

import fnmatch
import hashlib
import json
import logging
import shutil
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import Any


def dumps(data: Any) -> str:
    """JSON as written to stdout and result files"""
    return json.dumps(data, indent=4, ensure_ascii=False) + "\n"


def canonical_json(data: Any) -> str:
    """Key-sorted, whitespace-free JSON used for hashing"""
    return json.dumps(data, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def sha256_hex(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def write_document(text: str, output: str | Path | None = None) -> None:
    """
    Write a document to ``output``, or to stdout when no path is given.
    Parent directories are created as needed.
    """
    if output is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    path = Path(output)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    logging.info(f"Wrote {path}")


def format_table(headers: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    """Left-aligned plain text table for --pretty output"""
    cells = [[str(h) for h in headers], *([str(c) for c in row] for row in rows)]
    widths = [max(len(row[i]) for row in cells) for i in range(len(headers))]
    lines = ["  ".join(cell.ljust(width) for cell, width in zip(row, widths, strict=True)).rstrip() for row in cells]
    lines.insert(1, "  ".join("-" * width for width in widths))
    return "\n".join(lines) + "\n"


def purge(path: str | Path, patterns: list[str], recursive: bool = False) -> int:
    """
    Deletes files matching given patterns using Python's standard library.

    Arguments:
        path: Path to look through
        patterns: List of shell-like glob patterns to delete

    Keyword Arguments:
        recursive: Whether to search recursively (default: False)

    Returns:
        Number of removed entries
    """
    base_path = Path(path)
    if not base_path.is_dir() or not patterns:
        return 0

    items = base_path.rglob("*") if recursive else base_path.glob("*")

    removed = 0
    for item in list(items):
        if any(fnmatch.fnmatch(item.name, pattern) for pattern in patterns):
            try:
                if item.is_dir():
                    shutil.rmtree(item)
                else:
                    item.unlink()
                removed += 1
            except OSError as e:
                logging.warning(f"Could not remove {item}: {e}")
    return removed
