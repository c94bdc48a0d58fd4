"""Append-only verdict history: one JSON record per line, size-rotated.

Every append is flushed and fsynced before the caller is acknowledged, so
after an abrupt kill the store still holds a readable prefix of all
acknowledged entries. A torn final line is tolerated on read.
"""

from __future__ import annotations

import json
import os
import threading
import time
from pathlib import Path

ROTATE_BYTES_DEFAULT = 1024 * 1024


class HistoryStore:
    def __init__(self, directory: str | Path, rotate_bytes: int = ROTATE_BYTES_DEFAULT):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self.rotate_bytes = rotate_bytes
        self._lock = threading.Lock()
        self._last_ts = 0.0

    def _files(self) -> list[Path]:
        return sorted(self.directory.glob("history-*.log"))

    def _current_file(self) -> Path:
        files = self._files()
        if files and files[-1].stat().st_size < self.rotate_bytes:
            return files[-1]
        index = int(files[-1].stem.split("-")[1]) + 1 if files else 1
        return self.directory / f"history-{index:06d}.log"

    def append(self, verdict: dict, user_action: str) -> dict:
        """Durably append one entry and return it (with its stored_at stamp)."""
        with self._lock:
            # wall clock may step backwards; stamps stay non-decreasing
            ts = max(time.time(), self._last_ts)
            self._last_ts = ts
            entry = {"verdict": verdict, "user_action": user_action, "stored_at": ts}
            line = json.dumps(entry, sort_keys=True) + "\n"
            path = self._current_file()
            with open(path, "a", encoding="utf-8") as fh:
                fh.write(line)
                fh.flush()
                os.fsync(fh.fileno())
            return entry

    def read(self, limit: int | None = None) -> list[dict]:
        """Entries newest first; reading stops at the first corrupt line."""
        entries: list[dict] = []
        for path in self._files():
            with open(path, encoding="utf-8") as fh:
                for line in fh:
                    try:
                        entries.append(json.loads(line))
                    except ValueError:
                        break  # torn tail: keep the prefix
        entries.reverse()
        if limit is not None:
            entries = entries[:limit]
        return entries

    def count(self) -> int:
        return len(self.read())
