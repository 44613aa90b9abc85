"""HTTP service binding ingestion, scoring and statistics.

The server is stateless apart from the store: restarting it against the same
store directory yields identical responses to identical requests. Scoring is
pure; per-session write serialization is delegated to the store.

Endpoints (JSON, UTF-8, durations and timestamps in integer milliseconds):

    POST /api/v1/sessions                mint a session id
    POST /api/v1/traces                  submit a trace, get its score
    GET  /api/v1/sessions/{id}/stats     debriefing statistics
    PUT  /api/v1/gold                    install a gold-standard revision

Error bodies are ``{"error_code": ..., "message": ..., "violations": [...]}``
with ``violations`` present only on trace/bundle validation failures.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from starlette.concurrency import run_in_threadpool
from starlette.staticfiles import StaticFiles

from nrts.bundle import BundleError, bundle_from_json, bundle_to_json, load_bundle
from nrts.distance import DistanceConfig, trace_distance
from nrts.model import (
    SESSION_ID_RE,
    GoldStandard,
    new_session_id,
    phase_compliance,
    validate_trace,
)
from nrts.store import (
    FileSessionStore,
    SessionStore,
    StorageError,
    UnknownSessionError,
    iso_utc_now,
)
from nrts.wire import WireFormatError, apply_session_temperature, parse_wire_trace


@dataclass
class ServerConfig:
    store_dir: Path
    gold_dir: Path | None = None
    alpha: float = 0.7
    indel_cost: float = 1.0
    admin_token: str | None = None
    ui_dir: Path | None = None
    clock: Callable[[], str] = iso_utc_now

    def distance_config(self) -> DistanceConfig:
        return DistanceConfig(alpha=self.alpha, indel_cost=self.indel_cost)


def _error(
    status: int, code: str, message: str, violations: list[dict] | None = None
) -> JSONResponse:
    body: dict = {"error_code": code, "message": message}
    if violations is not None:
        body["violations"] = violations
    return JSONResponse(body, status_code=status)


class _GoldCache:
    """Per-revision parse cache; the active revision is re-resolved per call."""

    def __init__(self, store: SessionStore):
        self._store = store
        self._parsed: dict[str, GoldStandard] = {}

    def active(self) -> tuple[str, GoldStandard] | None:
        revisions = self._store.list_gold_revisions()
        if not revisions:
            return None
        return self.revision(revisions[-1])

    def revision(self, revision: str) -> tuple[str, GoldStandard]:
        if revision not in self._parsed:
            loaded = self._store.get_gold(revision)
            if loaded is None:
                raise StorageError(f"gold revision {revision} disappeared")
            self._parsed[revision] = loaded[1]
        return revision, self._parsed[revision]


def bootstrap_gold(store: SessionStore, gold_dir: Path) -> str:
    """Install the bootstrap bundle unless it already matches the active one."""
    bundle = load_bundle(gold_dir)
    active = store.get_gold()
    if active is not None and bundle_to_json(active[1]) == bundle_to_json(bundle):
        return active[0]
    return store.put_gold(bundle)


def create_app(config: ServerConfig) -> FastAPI:
    store = FileSessionStore(config.store_dir, clock=config.clock)
    if config.gold_dir is not None:
        bootstrap_gold(store, Path(config.gold_dir))
    gold_cache = _GoldCache(store)
    distance_config = config.distance_config()

    app = FastAPI(title="nrts", docs_url=None, redoc_url=None)
    app.state.store = store
    app.state.config = config

    @app.post("/api/v1/sessions")
    async def create_session() -> JSONResponse:
        session_id = new_session_id()
        await run_in_threadpool(store.create_session, session_id)
        return JSONResponse({"session_id": session_id})

    @app.post("/api/v1/traces")
    async def submit_trace(request: Request) -> JSONResponse:
        body = await request.body()
        return await run_in_threadpool(_submit_trace, body)

    def _submit_trace(body: bytes) -> JSONResponse:
        active = gold_cache.active()
        if active is None:
            return _error(
                409,
                "no_gold_installed",
                "no gold-standard bundle installed; PUT /api/v1/gold first",
            )
        revision, gold = active
        try:
            payload = json.loads(body)
        except json.JSONDecodeError as exc:
            return _error(400, "malformed_body", f"body is not valid JSON: {exc}")
        try:
            trace, session_temperature = parse_wire_trace(payload)
        except WireFormatError as exc:
            return _error(
                400,
                "invalid_trace",
                "trace does not match the wire format",
                [{"where": "wire", "index": None, "reason": p} for p in exc.problems],
            )
        if trace.session_id is None:
            trace = dataclasses.replace(trace, session_id=new_session_id())
        trace = apply_session_temperature(trace, session_temperature, gold.taxonomy)
        violations = validate_trace(trace, gold)
        if violations:
            return _error(
                400,
                "invalid_trace",
                "trace failed validation",
                [v.to_json() for v in violations],
            )
        result = trace_distance(trace, gold, distance_config)
        reports = phase_compliance(trace, gold.schedule)
        trace = dataclasses.replace(trace, recorded_at=config.clock())
        try:
            store.put_trace(trace, result, revision)
        except StorageError as exc:
            return _error(500, "storage_failure", str(exc))
        return JSONResponse(
            {
                "session_id": trace.session_id,
                "distance": result.distance,
                "percent_display": result.percent_display,
                "phase_report": [r.to_json() for r in reports],
            }
        )

    @app.get("/api/v1/sessions/{session_id}/stats")
    async def session_stats(session_id: str) -> JSONResponse:
        if not SESSION_ID_RE.match(session_id):
            return _error(
                400,
                "invalid_session_id",
                f"session id must match {SESSION_ID_RE.pattern}",
            )
        try:
            stats = await run_in_threadpool(store.get_stats, session_id)
        except UnknownSessionError:
            return _error(404, "unknown_session", f"no session {session_id!r}")
        return JSONResponse(stats.to_json())

    @app.get("/api/v1/gold")
    async def get_gold() -> JSONResponse:
        active = await run_in_threadpool(gold_cache.active)
        if active is None:
            return _error(
                404, "no_gold_installed", "no gold-standard bundle installed"
            )
        revision, gold = active
        return JSONResponse(
            {"revision": revision, "bundle": bundle_to_json(gold)}
        )

    @app.put("/api/v1/gold")
    async def put_gold(request: Request) -> JSONResponse:
        if config.admin_token is not None:
            supplied = request.headers.get("x-admin-token")
            if supplied != config.admin_token:
                return _error(
                    403, "admin_token_required", "missing or wrong admin token"
                )
        body = await request.body()
        return await run_in_threadpool(_put_gold, body)

    def _put_gold(body: bytes) -> JSONResponse:
        try:
            payload = json.loads(body)
        except json.JSONDecodeError as exc:
            return _error(400, "malformed_body", f"body is not valid JSON: {exc}")
        try:
            bundle = bundle_from_json(payload)
        except BundleError as exc:
            return _error(400, "invalid_bundle", str(exc))
        try:
            revision = store.put_gold(bundle)
        except StorageError as exc:
            return _error(500, "storage_failure", str(exc))
        return JSONResponse({"revision": revision})

    if config.ui_dir is not None:
        app.mount("/", StaticFiles(directory=config.ui_dir, html=True), name="ui")

    return app
