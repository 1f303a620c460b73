"""Named table registry rooted at a data directory.

Tables are keyed by filename stem. Only files under the configured root are
loadable; traversal outside it is rejected. Loaded tables are immutable, so
readers never need a lock; loads of the same name serialize on a per-name
lock and the last completed load wins.
"""

from __future__ import annotations

import threading
from collections import defaultdict
from pathlib import Path

from .csvio import load_csv
from .errors import UnknownNameError
from .pwct import load_columnar
from .table import ColumnTable

_LOADERS = {".csv": load_csv, ".pwct": load_columnar}


class TableRegistry:
    def __init__(self, data_dir: str | Path | None = None):
        self.data_dir = Path(data_dir).resolve() if data_dir is not None else None
        self._tables: dict[str, ColumnTable] = {}
        self._registry_lock = threading.Lock()
        self._load_locks: dict[str, threading.Lock] = defaultdict(threading.Lock)

    def register(self, table: ColumnTable) -> None:
        """Insert an already-built table (tests, programmatic use)."""
        with self._registry_lock:
            self._tables[table.name] = table

    def get(self, name: str) -> ColumnTable:
        with self._registry_lock:
            try:
                return self._tables[name]
            except KeyError:
                raise UnknownNameError(f"no table named {name!r}") from None

    def names(self) -> list[str]:
        with self._registry_lock:
            return sorted(self._tables)

    def _check_under_root(self, path: Path) -> Path:
        resolved = path.resolve()
        if self.data_dir is None:
            raise UnknownNameError("registry has no data directory configured")
        if not resolved.is_relative_to(self.data_dir):
            raise UnknownNameError(f"{path} is outside the data directory")
        return resolved

    def load_file(self, path: str | Path) -> ColumnTable:
        """Load one .csv or .pwct file under the data directory."""
        path = self._check_under_root(Path(path))
        loader = _LOADERS.get(path.suffix)
        if loader is None:
            raise UnknownNameError(f"unsupported table file suffix {path.suffix!r}")
        name = path.stem
        with self._registry_lock:
            lock = self._load_locks[name]
        with lock:
            table = loader(path)
            self.register(table)
        return table

    def load_all(self) -> list[str]:
        """Load every table file in the data directory; returns loaded names."""
        if self.data_dir is None:
            return []
        loaded = []
        for path in sorted(self.data_dir.iterdir()):
            if path.suffix in _LOADERS and path.is_file():
                self.load_file(path)
                loaded.append(path.stem)
        return loaded
