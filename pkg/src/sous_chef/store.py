"""Single-file JSON-lines journal for sessions and profiles.

Each mutation appends one record; load replays the journal last-wins per
(kind, id). A corrupt line is reported by line number and skipped, so one
bad byte never takes the rest of the store with it. The journal compacts
itself once the append count passes a threshold.
"""

from __future__ import annotations

import json
import threading
from pathlib import Path

from .model import PantrySession, UserProfile

KINDS = ("profile", "session")


class LoadError:
    """One unreadable journal record, named by line for the operator."""

    def __init__(self, line_no: int, reason: str):
        self.line_no = line_no
        self.reason = reason

    def __repr__(self):
        return f"LoadError(line {self.line_no}: {self.reason})"


class JournalStore:
    """Append-friendly store; writes are serialized by an internal lock."""

    def __init__(self, path, compact_every: int = 500):
        self.path = Path(path)
        self.compact_every = compact_every
        self._lock = threading.Lock()
        self._appends_since_compact = 0
        self.path.parent.mkdir(parents=True, exist_ok=True)

    def append(self, kind: str, record_id: str, data: dict) -> None:
        if kind not in KINDS:
            raise ValueError(f"unknown record kind {kind!r}")
        line = json.dumps({"kind": kind, "id": record_id, "data": data},
                          ensure_ascii=False)
        with self._lock:
            with self.path.open("a", encoding="utf-8") as handle:
                handle.write(line + "\n")
            self._appends_since_compact += 1
            if self._appends_since_compact >= self.compact_every:
                self._compact_locked()

    def load(self):
        """Replay the journal. Returns ({kind: {id: data}}, [LoadError])."""
        records = {kind: {} for kind in KINDS}
        errors = []
        with self._lock:
            if not self.path.exists():
                return records, errors
            with self.path.open("r", encoding="utf-8") as handle:
                for line_no, line in enumerate(handle, start=1):
                    line = line.strip()
                    if not line:
                        continue
                    try:
                        record = json.loads(line)
                        kind = record["kind"]
                        record_id = record["id"]
                        data = record["data"]
                        if kind not in KINDS or not isinstance(data, dict):
                            raise ValueError(f"bad record shape (kind={kind!r})")
                    except (ValueError, KeyError, TypeError) as exc:
                        errors.append(LoadError(line_no, str(exc)))
                        continue
                    records[kind][record_id] = data
        return records, errors

    def compact(self) -> None:
        with self._lock:
            self._compact_locked()

    def _compact_locked(self) -> None:
        # Rewrite as one latest record per (kind, id); corrupt lines drop here.
        records = {kind: {} for kind in KINDS}
        if self.path.exists():
            with self.path.open("r", encoding="utf-8") as handle:
                for line in handle:
                    line = line.strip()
                    if not line:
                        continue
                    try:
                        record = json.loads(line)
                        records[record["kind"]][record["id"]] = record["data"]
                    except (ValueError, KeyError, TypeError):
                        continue
        tmp = self.path.with_suffix(self.path.suffix + ".tmp")
        with tmp.open("w", encoding="utf-8") as handle:
            for kind in KINDS:
                for record_id, data in records[kind].items():
                    handle.write(json.dumps(
                        {"kind": kind, "id": record_id, "data": data},
                        ensure_ascii=False) + "\n")
        tmp.replace(self.path)
        self._appends_since_compact = 0


class Repository:
    """Typed view over the journal: profiles and sessions by id, in memory.

    The in-memory maps are the source of truth while running; every save
    also appends to the journal so a restart reconstructs the same state.
    """

    def __init__(self, store: JournalStore):
        self.store = store
        self.profiles: dict = {}
        self.sessions: dict = {}
        self.load_errors: list = []
        self._reload()

    def _reload(self) -> None:
        records, errors = self.store.load()
        self.load_errors = list(errors)
        self.profiles = {}
        self.sessions = {}
        for record_id, data in records["profile"].items():
            try:
                self.profiles[record_id] = UserProfile.from_dict(data)
            except (ValueError, KeyError, TypeError) as exc:
                self.load_errors.append(LoadError(0, f"profile {record_id}: {exc}"))
        for record_id, data in records["session"].items():
            try:
                self.sessions[record_id] = PantrySession.from_dict(data)
            except (ValueError, KeyError, TypeError) as exc:
                self.load_errors.append(LoadError(0, f"session {record_id}: {exc}"))

    def save_profile(self, profile: UserProfile) -> None:
        self.profiles[profile.id] = profile
        self.store.append("profile", profile.id, profile.to_dict())

    def save_session(self, session: PantrySession) -> None:
        self.sessions[session.id] = session
        self.store.append("session", session.id, session.to_dict())
