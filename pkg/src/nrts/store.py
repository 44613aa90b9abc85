"""Durable persistence for traces, sessions and gold-standard revisions.

``SessionStore`` is the storage port; ``FileSessionStore`` is the embedded
file-backed adapter used by default (an external document-database adapter
can implement the same port). Layout under the store root::

    gold/<revision>/taxonomy.json|schedule.json|checklist.json|gold_trace.json
    sessions/<session-id>/session.json
    sessions/<session-id>/traces/<trace-id>.json

All documents are UTF-8 JSON. Every write goes to a temp file in the target
directory and is renamed into place, so readers and crash recovery only ever
see complete documents. Writes within one session are serialized; writes to
different sessions proceed in parallel; stats reads take a directory-listing
snapshot and never block writers.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import os
import threading
import uuid
from collections import defaultdict
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable

from nrts.bundle import BUNDLE_FILES, bundle_to_json, load_bundle
from nrts.distance import DistanceResult
from nrts.model import SESSION_ID_RE, GoldStandard, ProcessTrace
from nrts.wire import parse_wire_trace, trace_to_wire


def iso_utc_now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="milliseconds")


class StorageError(RuntimeError):
    """Underlying store I/O failed."""


class UnknownSessionError(KeyError):
    """Session id does not exist in the store."""


@dataclass(frozen=True)
class SessionRecord:
    session_id: str
    created_at: str
    trace_ids: tuple[str, ...]
    group_ids: frozenset[str]


@dataclass(frozen=True)
class StoredTrace:
    trace_id: str
    trace: ProcessTrace
    distance: float
    percent_display: int
    gold_revision: str
    stored_at: str


@dataclass(frozen=True)
class GroupStats:
    group_id: str
    traces: int
    mean_distance: float


@dataclass(frozen=True)
class SessionStats:
    """Debriefing statistics for one session.

    The session mean is the arithmetic mean over all stored traces, not over
    group means. ``per_action_mean_duration_ms`` covers exactly the actions
    occurring in at least one stored trace.
    """

    per_group: tuple[GroupStats, ...]
    session_mean_distance: float | None
    per_action_mean_duration_ms: dict[str, float]

    def to_json(self) -> dict:
        return {
            "per_group": [
                {
                    "group_id": g.group_id,
                    "traces": g.traces,
                    "mean_distance": g.mean_distance,
                }
                for g in self.per_group
            ],
            "session_mean_distance": self.session_mean_distance,
            "per_action_mean_duration_ms": dict(
                sorted(self.per_action_mean_duration_ms.items())
            ),
        }


class SessionStore:
    """Storage port; see :class:`FileSessionStore` for the default adapter."""

    def create_session(self, session_id: str) -> SessionRecord:
        raise NotImplementedError

    def get_session(self, session_id: str) -> SessionRecord | None:
        raise NotImplementedError

    def put_trace(
        self, trace: ProcessTrace, result: DistanceResult, gold_revision: str
    ) -> str:
        raise NotImplementedError

    def list_traces(self, session_id: str) -> list[StoredTrace]:
        raise NotImplementedError

    def get_stats(self, session_id: str) -> SessionStats:
        raise NotImplementedError

    def put_gold(self, bundle: GoldStandard) -> str:
        raise NotImplementedError

    def get_gold(self, revision: str | None = None) -> tuple[str, GoldStandard] | None:
        raise NotImplementedError

    def list_gold_revisions(self) -> list[str]:
        raise NotImplementedError


def _atomic_write_json(path: Path, document: dict) -> None:
    """Write-temp-then-rename with fsync; a crash leaves old state or new."""
    payload = json.dumps(document, indent=2, ensure_ascii=False) + "\n"
    temp = path.parent / f".tmp-{uuid.uuid4().hex}"
    try:
        with open(temp, "w", encoding="utf-8") as fh:
            fh.write(payload)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(temp, path)
        _fsync_dir(path.parent)
    except OSError as exc:
        temp.unlink(missing_ok=True)
        raise StorageError(f"cannot write {path}: {exc}") from exc


def _fsync_dir(path: Path) -> None:
    fd = os.open(path, os.O_RDONLY)
    try:
        os.fsync(fd)
    finally:
        os.close(fd)


def _read_json(path: Path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise StorageError(f"cannot read {path}: {exc}") from exc


def trace_content_id(trace: ProcessTrace) -> str:
    """Deterministic id: content hash over the wire form plus recorded_at."""
    canonical = json.dumps(
        {"trace": trace_to_wire(trace), "recorded_at": trace.recorded_at},
        sort_keys=True,
        separators=(",", ":"),
        ensure_ascii=False,
    )
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:32]


class FileSessionStore(SessionStore):
    def __init__(self, root, clock: Callable[[], str] = iso_utc_now):
        self.root = Path(root)
        self.clock = clock
        (self.root / "sessions").mkdir(parents=True, exist_ok=True)
        (self.root / "gold").mkdir(parents=True, exist_ok=True)
        self._registry_lock = threading.Lock()
        self._session_locks: dict[str, threading.Lock] = defaultdict(threading.Lock)
        self._gold_lock = threading.Lock()

    def _session_lock(self, session_id: str) -> threading.Lock:
        with self._registry_lock:
            return self._session_locks[session_id]

    def _session_dir(self, session_id: str) -> Path:
        if not SESSION_ID_RE.match(session_id):
            raise ValueError(f"invalid session id {session_id!r}")
        return self.root / "sessions" / session_id

    # -- sessions ---------------------------------------------------------

    def create_session(self, session_id: str) -> SessionRecord:
        directory = self._session_dir(session_id)
        with self._session_lock(session_id):
            self._ensure_session(directory, session_id)
        return self.get_session(session_id)  # type: ignore[return-value]

    def _ensure_session(self, directory: Path, session_id: str) -> None:
        marker = directory / "session.json"
        if marker.exists():
            return
        (directory / "traces").mkdir(parents=True, exist_ok=True)
        _atomic_write_json(
            marker, {"session_id": session_id, "created_at": self.clock()}
        )

    def get_session(self, session_id: str) -> SessionRecord | None:
        directory = self._session_dir(session_id)
        marker = directory / "session.json"
        if not marker.exists():
            return None
        record = _read_json(marker)
        stored = self.list_traces(session_id)
        return SessionRecord(
            session_id=session_id,
            created_at=record["created_at"],
            trace_ids=tuple(t.trace_id for t in stored),
            group_ids=frozenset(t.trace.group_id for t in stored),
        )

    def session_ids(self) -> list[str]:
        base = self.root / "sessions"
        return sorted(p.name for p in base.iterdir() if p.is_dir())

    # -- traces -----------------------------------------------------------

    def put_trace(
        self, trace: ProcessTrace, result: DistanceResult, gold_revision: str
    ) -> str:
        if trace.session_id is None:
            raise ValueError("trace must carry a session_id before storage")
        directory = self._session_dir(trace.session_id)
        trace_id = trace_content_id(trace)
        path = directory / "traces" / f"{trace_id}.json"
        with self._session_lock(trace.session_id):
            self._ensure_session(directory, trace.session_id)
            if path.exists():
                return trace_id
            document = {
                "trace_id": trace_id,
                "trace": trace_to_wire(trace),
                "recorded_at": trace.recorded_at,
                "distance": result.distance,
                "percent_display": result.percent_display,
                "gold_revision": gold_revision,
                "stored_at": self.clock(),
            }
            _atomic_write_json(path, document)
        return trace_id

    def list_traces(self, session_id: str) -> list[StoredTrace]:
        directory = self._session_dir(session_id)
        traces_dir = directory / "traces"
        if not traces_dir.is_dir():
            return []
        stored = []
        for path in traces_dir.iterdir():
            if path.name.startswith(".tmp") or path.suffix != ".json":
                continue
            document = _read_json(path)
            trace, _ = parse_wire_trace(document["trace"])
            trace = dataclasses.replace(trace, recorded_at=document["recorded_at"])
            stored.append(
                StoredTrace(
                    trace_id=document["trace_id"],
                    trace=trace,
                    distance=document["distance"],
                    percent_display=document["percent_display"],
                    gold_revision=document["gold_revision"],
                    stored_at=document["stored_at"],
                )
            )
        stored.sort(key=lambda t: (t.stored_at, t.trace_id))
        return stored

    def get_stats(self, session_id: str) -> SessionStats:
        if self.get_session(session_id) is None:
            raise UnknownSessionError(session_id)
        stored = self.list_traces(session_id)
        by_group: dict[str, list[float]] = defaultdict(list)
        for item in stored:
            by_group[item.trace.group_id].append(item.distance)
        per_group = tuple(
            GroupStats(group_id, len(ds), sum(ds) / len(ds))
            for group_id, ds in sorted(by_group.items())
        )
        session_mean = (
            sum(t.distance for t in stored) / len(stored) if stored else None
        )
        durations: dict[str, list[int]] = defaultdict(list)
        for item in stored:
            for event in item.trace.events:
                durations[event.action].append(event.duration_ms)
        per_action = {
            action: sum(values) / len(values) for action, values in durations.items()
        }
        return SessionStats(per_group, session_mean, per_action)

    # -- gold -------------------------------------------------------------

    def put_gold(self, bundle: GoldStandard) -> str:
        document = bundle_to_json(bundle)
        with self._gold_lock:
            revisions = self.list_gold_revisions()
            next_number = int(revisions[-1]) + 1 if revisions else 1
            revision = f"{next_number:06d}"
            gold_root = self.root / "gold"
            temp = gold_root / f".tmp-{uuid.uuid4().hex}"
            temp.mkdir(parents=True)
            try:
                for name, member in zip(
                    BUNDLE_FILES, ("taxonomy", "schedule", "checklist", "gold_trace")
                ):
                    _atomic_write_json(temp / name, document[member])
                os.replace(temp, gold_root / revision)
                _fsync_dir(gold_root)
            except OSError as exc:
                raise StorageError(f"cannot install gold revision: {exc}") from exc
        return revision

    def get_gold(self, revision: str | None = None) -> tuple[str, GoldStandard] | None:
        if revision is None:
            revisions = self.list_gold_revisions()
            if not revisions:
                return None
            revision = revisions[-1]
        directory = self.root / "gold" / revision
        if not directory.is_dir():
            return None
        return revision, load_bundle(directory)

    def list_gold_revisions(self) -> list[str]:
        gold_root = self.root / "gold"
        return sorted(
            p.name for p in gold_root.iterdir() if p.is_dir() and p.name.isdigit()
        )
