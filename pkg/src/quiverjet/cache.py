"""Append-only JSONL store for point counts, keyed by (quiver hash, d, q, n, method).

Reads are lock-free (a torn last line is ignored); writes take a file lock.
"""

from __future__ import annotations

import json
import os
from pathlib import Path
from typing import Optional

from filelock import FileLock


def _key_str(key: tuple) -> str:
    h, d, q, n, method = key
    return json.dumps([h, list(d), int(q), int(n), method], separators=(",", ":"))


class CountCache:
    def __init__(self, path: str | os.PathLike):
        self.path = Path(path)
        self.lock = FileLock(str(self.path) + ".lock")
        self._mem: dict[str, int] = {}
        self._pos = 0

    def _refresh(self) -> None:
        if not self.path.exists():
            return
        with open(self.path, "r", encoding="utf-8") as fh:
            fh.seek(self._pos)
            while True:
                line = fh.readline()
                if not line.endswith("\n"):
                    break
                self._pos = fh.tell()
                try:
                    rec = json.loads(line)
                    self._mem[rec["key"]] = int(rec["count"])
                except (ValueError, KeyError):
                    continue

    def get(self, key: tuple) -> Optional[int]:
        self._refresh()
        return self._mem.get(_key_str(key))

    def put(self, key: tuple, count: int) -> None:
        k = _key_str(key)
        with self.lock:
            self._refresh()
            if k in self._mem:
                if self._mem[k] != count:
                    raise ValueError(f"cache conflict for {k}: {self._mem[k]} vs {count}")
                return
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(json.dumps({"key": k, "count": count}) + "\n")
            self._refresh()

    def __len__(self) -> int:
        self._refresh()
        return len(self._mem)
