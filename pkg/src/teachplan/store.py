"""On-disk session persistence: one append-only JSON-lines file per session.

A torn trailing line (interrupted write) is dropped with a warning on load;
corruption anywhere before the last line is an error.
"""

from __future__ import annotations

import json
import re
from pathlib import Path

from .session import TeachingSession

_ID_RE = re.compile(r"^[A-Za-z0-9_-]+$")


class StoreError(Exception):
    code = "store_error"


class NotFound(StoreError):
    code = "not_found"


class DuplicateSession(StoreError):
    code = "duplicate_session"


class CorruptLog(StoreError):
    code = "corrupt_log"


class SessionStore:
    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def _path(self, session_id: str) -> Path:
        if not _ID_RE.match(session_id):
            raise ValueError(f"bad session id {session_id!r}")
        return self.root / f"{session_id}.jsonl"

    def list_ids(self) -> list[str]:
        return sorted(p.stem for p in self.root.glob("*.jsonl"))

    def exists(self, session_id: str) -> bool:
        return self._path(session_id).exists()

    def append(self, session_id: str, event: dict) -> None:
        with self._path(session_id).open("a", encoding="utf-8") as fh:
            fh.write(json.dumps(event, sort_keys=True) + "\n")
            fh.flush()

    def sync(self, session: TeachingSession, persisted: int = 0) -> int:
        """Append any events past ``persisted``; returns the new watermark."""
        for event in session.events[persisted:]:
            self.append(session.id, event)
        return len(session.events)

    def save_session(self, session: TeachingSession) -> None:
        """Write the whole event log (overwrites any existing file)."""
        path = self._path(session.id)
        with path.open("w", encoding="utf-8") as fh:
            for event in session.events:
                fh.write(json.dumps(event, sort_keys=True) + "\n")
            fh.flush()

    def load_session(self, session_id: str) -> tuple[TeachingSession, list[str]]:
        """Replay a stored log. Returns the session plus any recovery warnings."""
        path = self._path(session_id)
        if not path.exists():
            raise NotFound(f"no session {session_id}")
        raw = path.read_text(encoding="utf-8")
        lines = raw.split("\n")
        if lines and lines[-1] == "":
            lines.pop()
        events = []
        warnings: list[str] = []
        for index, line in enumerate(lines):
            try:
                events.append(json.loads(line))
            except json.JSONDecodeError:
                if index == len(lines) - 1:
                    warnings.append(
                        f"dropped torn final event on line {index + 1} of {path.name}"
                    )
                    break
                raise CorruptLog(
                    f"{path.name} is corrupt at line {index + 1} (not a trailing write)"
                ) from None
        session = TeachingSession.replay(events)
        return session, warnings
