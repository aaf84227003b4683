"""
Content-addressed result cache.

Entries live at ``<dir>/<key[:2]>/<key>.json`` and hold the result document
of one run together with its key. A missing or unreadable entry is a miss.
"""

import json
import logging
import os
from pathlib import Path
from typing import Any

from qcolor import ENGINE_VERSION, ENV_CACHE_DIR
from qcolor.utils import dumps, purge


class ResultCache:
    def __init__(self, directory: str | Path | None) -> None:
        self.directory = Path(directory) if directory else None

    @classmethod
    def from_env(cls, override: str | Path | None = None) -> "ResultCache":
        """Cache rooted at ``override`` or $QCOLOR_CACHE_DIR; disabled when neither is set"""
        return cls(override or os.environ.get(ENV_CACHE_DIR) or None)

    @property
    def enabled(self) -> bool:
        return self.directory is not None

    def path_for(self, key: str) -> Path:
        if self.directory is None:
            raise ValueError("Cache is disabled")
        return self.directory / key[:2] / f"{key}.json"

    def lookup(self, key: str) -> dict[str, Any] | None:
        if self.directory is None:
            return None
        path = self.path_for(key)
        if not path.exists():
            return None
        try:
            entry = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, ValueError) as e:
            logging.warning(f"Ignoring corrupt cache entry {path}: {e}")
            return None
        if not isinstance(entry, dict) or entry.get("key") != key or not isinstance(entry.get("result"), dict):
            logging.warning(f"Ignoring corrupt cache entry {path}")
            return None
        logging.debug(f"Cache hit {key}")
        return entry["result"]

    def store(self, key: str, result: dict[str, Any]) -> None:
        if self.directory is None:
            return
        path = self.path_for(key)
        tmp = path.with_suffix(".tmp")
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            tmp.write_text(dumps({"key": key, "engine": ENGINE_VERSION, "result": result}), encoding="utf-8")
            tmp.replace(path)
        except OSError as e:
            logging.warning(f"Could not write cache entry {path}: {e}")

    def clear(self) -> int:
        """Remove every entry; returns the number of removed shard directories and files"""
        if self.directory is None:
            return 0
        return purge(self.directory, ["??", "*.tmp"])
