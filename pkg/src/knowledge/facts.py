"""Persistent store of situational facts (where things are kept, what drawers hold).

The store is an append-only JSONL journal of ``add`` and ``supersede`` events;
``compact`` rewrites it with the live assertions only.
"""
from __future__ import annotations

import logging
import threading
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from ..errors import FactConflictError, GroundkitError

logger = logging.getLogger(__name__)

STORAGE_KEY = "storage"


class Provenance(str, Enum):
    HUMAN = "human"
    LLM = "llm"
    OBSERVED = "observed"


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


class Assertion(BaseModel):
    model_config = ConfigDict(frozen=True)

    seq: int = 0
    object_id: str
    key: str
    value: str = Field(description="Comma-joined location ids or category words")
    provenance: Provenance = Provenance.LLM
    confirmed: bool = False
    superseded: bool = False
    recorded_at: str = Field(default_factory=_now)

    @property
    def tokens(self) -> list[str]:
        return [t.strip() for t in self.value.split(",") if t.strip()]

    def cite(self) -> str:
        state = "confirmed" if self.confirmed else "unconfirmed"
        return (
            f"#{self.seq} {self.object_id} {self.key}={self.value} "
            f"({state}, {self.provenance.value})"
        )


class JournalEvent(BaseModel):
    event: Literal["add", "supersede"]
    seq: int
    assertion: Assertion | None = None


class FactStore:
    """Assertions keyed by (object id, key); at most one live confirmed value per key."""

    def __init__(self, path: Path | None = None):
        self.path = path
        self._assertions: dict[int, Assertion] = {}
        self._next = 1
        self._lock = threading.Lock()

    @classmethod
    def open(cls, path: Path) -> FactStore:
        """Replay a journal; a missing file gives an empty store that will write there."""
        store = cls(path)
        if not path.exists():
            return store
        for n, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
            if not line.strip():
                continue
            try:
                event = JournalEvent.model_validate_json(line)
            except ValidationError as e:
                raise GroundkitError(f"{path}:{n}: bad journal event\n{e}") from e
            store._replay(event)
        logger.debug("fact store %s: %d live assertions", path, len(store.live()))
        return store

    def _replay(self, event: JournalEvent) -> None:
        if event.event == "add" and event.assertion is not None:
            self._assertions[event.seq] = event.assertion.model_copy(update={"seq": event.seq})
        elif event.seq in self._assertions:
            self._assertions[event.seq] = self._assertions[event.seq].model_copy(
                update={"superseded": True}
            )
        self._next = max(self._next, event.seq + 1)

    def _append(self, event: JournalEvent) -> None:
        if self.path is None:
            return
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with self.path.open("a", encoding="utf-8") as fh:
            fh.write(event.model_dump_json(exclude_none=True) + "\n")

    def __len__(self) -> int:
        return len(self.live())

    def live(self) -> list[Assertion]:
        return [a for a in self._assertions.values() if not a.superseded]

    def facts_for(self, object_id: str, key: str) -> list[Assertion]:
        return [a for a in self.live() if a.object_id == object_id and a.key == key]

    def confirmed(self, object_id: str, key: str) -> Assertion | None:
        return next((a for a in self.facts_for(object_id, key) if a.confirmed), None)

    def add(self, assertion: Assertion) -> Assertion:
        """Record an assertion.

        Raises:
            FactConflictError: a second live confirmed value for the same (object, key)
        """
        with self._lock:
            if assertion.confirmed:
                current = self.confirmed(assertion.object_id, assertion.key)
                if current is not None:
                    raise FactConflictError(f"already confirmed: {current.cite()}")
            stored = assertion.model_copy(update={"seq": self._next, "superseded": False})
            self._next += 1
            self._assertions[stored.seq] = stored
            self._append(JournalEvent(event="add", seq=stored.seq, assertion=stored))
        logger.info("fact added: %s", stored.cite())
        return stored

    def supersede(self, seq: int) -> None:
        with self._lock:
            current = self._assertions[seq]
            if current.superseded:
                return
            self._assertions[seq] = current.model_copy(update={"superseded": True})
            self._append(JournalEvent(event="supersede", seq=seq))
        logger.debug("fact superseded: %s", current.cite())

    def compact(self) -> int:
        """Rewrite the journal with live assertions only; returns how many were dropped."""
        with self._lock:
            dropped = [seq for seq, a in self._assertions.items() if a.superseded]
            for seq in dropped:
                del self._assertions[seq]
            if self.path is not None:
                lines = [
                    JournalEvent(event="add", seq=a.seq, assertion=a).model_dump_json(
                        exclude_none=True
                    )
                    for a in sorted(self._assertions.values(), key=lambda a: a.seq)
                ]
                tmp = self.path.with_suffix(self.path.suffix + ".tmp")
                tmp.write_text("".join(line + "\n" for line in lines), encoding="utf-8")
                tmp.replace(self.path)
        logger.info("compacted fact store: %d superseded assertion(s) dropped", len(dropped))
        return len(dropped)
