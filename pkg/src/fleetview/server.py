"""Read-only HTTP API over a loaded run log.

All responses mirror the snapshot log schema.  Errors carry a machine
readable code and message; the log is immutable once loaded, so handlers
are safe under concurrent requests.
"""

from __future__ import annotations

from pathlib import Path
from typing import Optional

from fastapi import FastAPI, Query
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .analytics import NotFoundError, chain_trace
from .runlog import (
    RunLog,
    SCHEMA_VERSION,
    diff_to_jsonable,
    event_to_jsonable,
    snapshot_to_jsonable,
    summary_to_jsonable,
)
from .simulation import config_to_jsonable
from .worldview import AttributeKind, ConfigurationError

ATTRIBUTE_NAMES = {
    "battery": AttributeKind.BATTERY_LEVEL,
    "sciencezone": AttributeKind.SCIENCE_ZONE,
    "comm": AttributeKind.COMMUNICATION,
}


def _error(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"code": code, "message": message})


def create_app(log: RunLog, static_dir: Optional[Path] = None) -> FastAPI:
    app = FastAPI(title="fleetview", docs_url=None, redoc_url=None)
    snapshots = log.snapshots

    def snapshot_at(tick: int):
        if not 0 <= tick < len(snapshots):
            return None
        return snapshots[tick]

    @app.get("/api/meta")
    def meta():
        return {
            "schema": SCHEMA_VERSION,
            "config": config_to_jsonable(log.config),
            "ticks": {"first": 0, "last": len(snapshots) - 1, "count": len(snapshots)},
        }

    @app.get("/api/snapshot/{tick}")
    def snapshot(tick: int):
        snap = snapshot_at(tick)
        if snap is None:
            return _error(404, "unknown_tick", f"no snapshot at tick {tick}")
        return snapshot_to_jsonable(snap)

    @app.get("/api/diff/{attribute}/{tick}")
    def diff(attribute: str, tick: int):
        kind = ATTRIBUTE_NAMES.get(attribute)
        if kind is None:
            return _error(
                400,
                "unknown_attribute",
                f"attribute must be one of {sorted(ATTRIBUTE_NAMES)}, got {attribute!r}",
            )
        snap = snapshot_at(tick)
        if snap is None:
            return _error(404, "unknown_tick", f"no snapshot at tick {tick}")
        matrix = snap.diffs[kind]
        summaries = snap.summary.mini_dwc[kind]
        return {
            "tick": tick,
            "attribute": attribute,
            "matrix": diff_to_jsonable(matrix),
            "columns": [
                {"column": c.column, "similarity_sum": c.similarity_sum, "difference_sum": c.difference_sum}
                for c in summaries
            ],
        }

    @app.get("/api/timeline")
    def timeline(
        from_tick: Optional[int] = Query(default=None, alias="from"),
        to_tick: Optional[int] = Query(default=None, alias="to"),
    ):
        if not snapshots:
            return {"events": []}
        last = snapshots[-1]
        dt = log.config.tick_seconds
        lo = 0.0 if from_tick is None else from_tick * dt
        hi = float("inf") if to_tick is None else (to_tick + 1) * dt
        events = [e for e in last.events if e.start < hi and e.end > lo]
        return {"events": [event_to_jsonable(e) for e in events]}

    @app.get("/api/summary/{tick}")
    def summary(tick: int):
        snap = snapshot_at(tick)
        if snap is None:
            return _error(404, "unknown_tick", f"no snapshot at tick {tick}")
        return {"tick": tick, **summary_to_jsonable(snap.summary)}

    @app.get("/api/trace/{task_id}")
    def trace(task_id: str):
        if not snapshots:
            return _error(404, "empty_log", "log has no snapshots")
        last = snapshots[-1]
        try:
            result = chain_trace(task_id, list(last.events), log.config.n_agents)
        except (NotFoundError, ConfigurationError) as exc:
            return _error(404, "unknown_task", str(exc))
        return {
            "owner": result.owner,
            "chain": result.kind.value,
            "events": [event_to_jsonable(e) for e in result.events],
        }

    if static_dir is None:
        candidate = Path(__file__).resolve().parents[2] / "frontend" / "dist"
        if candidate.is_dir():
            static_dir = candidate
    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")

    return app
