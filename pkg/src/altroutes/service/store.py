"""Durable rating storage: schema-versioned JSON lines with compaction.

One record per line. Resubmitting a rating for the same query id appends
a new line; readers keep the latest line per query id, and compaction
rewrites the file down to those survivors. All writes go through a single
lock so concurrent requests serialize cleanly.
"""

from __future__ import annotations

import json
import os
import threading
from pathlib import Path

from ..analytics import RatingRecord
from ..errors import InvalidInputError
from ..geo import GeoPoint

SCHEMA_VERSION = 1


class RatingStore:
    def __init__(self, path: str | Path, compact_every: int = 1000):
        self._path = Path(path)
        self._lock = threading.Lock()
        self._compact_every = compact_every
        self._appends_since_compact = 0

    def append(self, record: dict) -> None:
        payload = dict(record)
        payload["schema_version"] = SCHEMA_VERSION
        line = json.dumps(payload, sort_keys=True)
        with self._lock:
            with open(self._path, "a", encoding="utf-8") as fh:
                fh.write(line + "\n")
                fh.flush()
                os.fsync(fh.fileno())
            self._appends_since_compact += 1
            if self._appends_since_compact >= self._compact_every:
                self._compact_locked()

    def load_latest(self) -> dict[str, dict]:
        """Latest raw record per query id, in file order of last write."""
        if not self._path.exists():
            return {}
        latest: dict[str, dict] = {}
        with open(self._path, encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, 1):
                line = line.strip()
                if not line:
                    continue
                try:
                    rec = json.loads(line)
                except ValueError as exc:
                    raise InvalidInputError(f"{self._path}:{line_no}: corrupt record") from exc
                if rec.get("schema_version") != SCHEMA_VERSION:
                    raise InvalidInputError(
                        f"{self._path}:{line_no}: unsupported schema {rec.get('schema_version')}"
                    )
                latest[rec["query_id"]] = rec
        return latest

    def snapshot(self) -> list[RatingRecord]:
        """Immutable analytics view of the store."""
        out = []
        for rec in self.load_latest().values():
            out.append(
                RatingRecord(
                    response_id=rec["query_id"],
                    city=rec["city"],
                    query=(
                        GeoPoint(rec["source"][0], rec["source"][1]),
                        GeoPoint(rec["target"][0], rec["target"][1]),
                    ),
                    fastest_time=rec["fastest_time_seconds"],
                    resident=rec["resident"],
                    scores={k: int(v) for k, v in rec["scores"].items()},
                    timestamp=rec["timestamp"],
                )
            )
        return out

    def compact(self) -> None:
        with self._lock:
            self._compact_locked()

    def _compact_locked(self) -> None:
        latest = self.load_latest()
        tmp = self._path.with_suffix(".tmp")
        with open(tmp, "w", encoding="utf-8") as fh:
            for rec in latest.values():
                fh.write(json.dumps(rec, sort_keys=True) + "\n")
        tmp.replace(self._path)
        self._appends_since_compact = 0
