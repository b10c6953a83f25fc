"""Append-only event log.

One JSON object per line, schema version 1. Event shapes (field order as
written):

    {"v":1,"type":"prompt_submitted","prompt_id","text","category","ts"}
    {"v":1,"type":"generation_stored","workbook_id","prompt_id","model_id",
     "document":<object|null>,"valid":<bool>,"error":<string|null>,"ts"}
    {"v":1,"type":"battle_created","battle_id","prompt_id",
     "workbook_a","workbook_b","ts"}
    {"v":1,"type":"vote_cast","battle_id","prompt_id","category","model_a",
     "model_b","workbook_a","workbook_b","outcome","voter_token","ts"}

Replaying the log from an empty state reconstructs the service state
exactly; every mutation is appended (and flushed) before any response is
produced.
"""

from __future__ import annotations

import json
import threading
from pathlib import Path
from typing import Any, Iterator

EVENT_VERSION = 1

PROMPT_SUBMITTED = "prompt_submitted"
GENERATION_STORED = "generation_stored"
BATTLE_CREATED = "battle_created"
VOTE_CAST = "vote_cast"

EVENT_TYPES = (PROMPT_SUBMITTED, GENERATION_STORED, BATTLE_CREATED, VOTE_CAST)


def encode_event(event: dict[str, Any]) -> str:
    return json.dumps(event, ensure_ascii=False, separators=(",", ":"))


class EventLog:
    """Single-writer append-only JSONL file."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()
        self._handle = open(self.path, "a", encoding="utf-8")
        self._count = sum(1 for _ in self.read_all())

    def append(self, event: dict[str, Any]) -> int:
        """Write one event; returns the 0-based event index."""
        if event.get("type") not in EVENT_TYPES:
            raise ValueError(f"unknown event type {event.get('type')!r}")
        line = encode_event({"v": EVENT_VERSION, **event})
        with self._lock:
            self._handle.write(line + "\n")
            self._handle.flush()
            index = self._count
            self._count += 1
        return index

    def read_all(self) -> Iterator[dict[str, Any]]:
        if not self.path.exists():
            return
        with open(self.path, "r", encoding="utf-8") as handle:
            for line in handle:
                line = line.strip()
                if line:
                    yield json.loads(line)

    def __len__(self) -> int:
        return self._count

    def close(self) -> None:
        self._handle.close()
