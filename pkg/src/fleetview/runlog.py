"""Append-only JSON-lines run log: one header line, then one snapshot per
tick.  Serialization is canonical (sorted keys, no whitespace), so
re-running the header's config reproduces the file byte for byte, and
read(write(x)) is the identity.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Union

from .analytics import SummaryOverview
from .scheduling import Schedule, ScheduleEntry, TimelineEvent, parse_task_id
from .simulation import (
    Simulator,
    SimConfig,
    Snapshot,
    TrueAgentState,
    Zone,
    ZoneKind,
    config_from_jsonable,
    config_to_jsonable,
)
from .worldview import (
    AttributeKind,
    ColumnSummary,
    DiffCell,
    DiffState,
    DifferenceMatrix,
    MONITORED_KINDS,
    SyncReport,
    Worldview,
    value_from_jsonable,
    value_to_jsonable,
)

SCHEMA_VERSION = "fleetview-log/1"


class LogParseError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass
class RunLog:
    config: SimConfig
    snapshots: list[Snapshot]


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=False)


# -- snapshot <-> jsonable ---------------------------------------------------

def _worldview_to_jsonable(wv: Worldview) -> dict:
    return {
        "owner": wv.owner,
        "beliefs": {
            kind.value: [value_to_jsonable(v) for v in values]
            for kind, values in wv.beliefs.items()
        },
        "freshness": list(wv.freshness),
    }


def _worldview_from_jsonable(obj: dict) -> Worldview:
    return Worldview(
        owner=obj["owner"],
        beliefs={
            AttributeKind(kind): [value_from_jsonable(v) for v in values]
            for kind, values in obj["beliefs"].items()
        },
        freshness=list(obj["freshness"]),
    )


def _schedule_to_jsonable(s: Schedule) -> dict:
    return {
        "computed_by": s.computed_by,
        "entries": [
            {"task": e.task.label, "executor": e.executor, "start": e.start, "end": e.end}
            for e in s.entries
        ],
        "infeasible": list(s.infeasible),
        "partial": list(s.partial),
        "worldview_hash": s.from_worldview_hash,
    }


def _schedule_from_jsonable(obj: dict) -> Schedule:
    return Schedule(
        computed_by=obj["computed_by"],
        entries=tuple(
            ScheduleEntry(
                task=parse_task_id(e["task"]),
                executor=e["executor"],
                start=e["start"],
                end=e["end"],
            )
            for e in obj["entries"]
        ),
        infeasible=tuple(obj["infeasible"]),
        partial=tuple(obj["partial"]),
        from_worldview_hash=obj["worldview_hash"],
    )


def _event_to_jsonable(e: TimelineEvent) -> dict:
    return {
        "task": e.task.label,
        "executor": e.executor,
        "start": e.start,
        "end": e.end,
        "relocated": e.relocated,
        "completed": e.completed,
    }


def _event_from_jsonable(obj: dict) -> TimelineEvent:
    return TimelineEvent(
        task=parse_task_id(obj["task"]),
        executor=obj["executor"],
        start=obj["start"],
        end=obj["end"],
        relocated=obj["relocated"],
        completed=obj["completed"],
    )


def _diff_to_jsonable(d: DifferenceMatrix) -> dict:
    return {
        "kind": d.kind.value,
        "cells": [
            [
                {"s": cell.state.value}
                if cell.presumed is None
                else {"s": cell.state.value, "v": value_to_jsonable(cell.presumed)}
                for cell in row
            ]
            for row in d.cells
        ],
    }


def _diff_from_jsonable(obj: dict) -> DifferenceMatrix:
    return DifferenceMatrix(
        kind=AttributeKind(obj["kind"]),
        cells=tuple(
            tuple(
                DiffCell(
                    state=DiffState(cell["s"]),
                    presumed=value_from_jsonable(cell["v"]) if "v" in cell else None,
                )
                for cell in row
            )
            for row in obj["cells"]
        ),
    )


def _summary_to_jsonable(s: SummaryOverview) -> dict:
    return {
        "fractions": s.fractions,
        "sync_warning": s.sync_warning,
        "mini_dwc": {
            kind.value: [[c.similarity_sum, c.difference_sum] for c in cols]
            for kind, cols in s.mini_dwc.items()
        },
        "report": {
            "in_sync": s.report.in_sync,
            "cells": {
                kind.value: sorted([i, j] for i, j in cells)
                for kind, cells in s.report.per_attribute.items()
            },
            "contrarian_sets": {
                kind.value: [sorted(group) for group in groups]
                for kind, groups in s.report.contrarian_sets.items()
            },
        },
    }


def _summary_from_jsonable(obj: dict) -> SummaryOverview:
    report = obj["report"]
    return SummaryOverview(
        fractions=obj["fractions"],
        sync_warning=obj["sync_warning"],
        mini_dwc={
            AttributeKind(kind): tuple(
                ColumnSummary(column=j, similarity_sum=sim, difference_sum=dif)
                for j, (sim, dif) in enumerate(cols)
            )
            for kind, cols in obj["mini_dwc"].items()
        },
        report=SyncReport(
            in_sync=report["in_sync"],
            per_attribute={
                AttributeKind(kind): frozenset((i, j) for i, j in cells)
                for kind, cells in report["cells"].items()
            },
            contrarian_sets={
                AttributeKind(kind): tuple(frozenset(group) for group in groups)
                for kind, groups in report["contrarian_sets"].items()
            },
        ),
    )


def snapshot_to_jsonable(snap: Snapshot) -> dict:
    return {
        "tick": snap.tick,
        "true_states": [
            {
                "id": t.id,
                "base": t.is_base_station,
                "x": t.x,
                "y": t.y,
                "battery": t.battery,
                "cpu": t.cpu,
                "radio": t.radio_enabled,
            }
            for t in snap.true_states
        ],
        "links": [list(row) for row in snap.links],
        "worldviews": [_worldview_to_jsonable(wv) for wv in snap.worldviews],
        "schedules": {str(a): _schedule_to_jsonable(s) for a, s in snap.schedules.items()},
        "events": [_event_to_jsonable(e) for e in snap.events],
        "diffs": {kind.value: _diff_to_jsonable(d) for kind, d in snap.diffs.items()},
        "eligible": sorted(snap.eligible),
        "avg_cpu": list(snap.avg_cpu),
        "zones": [
            {"kind": z.kind.value, "x0": z.x0, "y0": z.y0, "x1": z.x1, "y1": z.y1}
            for z in snap.zones
        ],
        "summary": _summary_to_jsonable(snap.summary),
    }


def snapshot_from_jsonable(obj: dict) -> Snapshot:
    return Snapshot(
        tick=obj["tick"],
        true_states=tuple(
            TrueAgentState(
                id=t["id"],
                is_base_station=t["base"],
                x=t["x"],
                y=t["y"],
                battery=t["battery"],
                cpu=t["cpu"],
                radio_enabled=t["radio"],
            )
            for t in obj["true_states"]
        ),
        links=tuple(tuple(row) for row in obj["links"]),
        worldviews=tuple(_worldview_from_jsonable(w) for w in obj["worldviews"]),
        schedules={int(a): _schedule_from_jsonable(s) for a, s in obj["schedules"].items()},
        events=tuple(_event_from_jsonable(e) for e in obj["events"]),
        diffs={AttributeKind(k): _diff_from_jsonable(d) for k, d in obj["diffs"].items()},
        eligible=frozenset(obj["eligible"]),
        avg_cpu=tuple(obj["avg_cpu"]),
        zones=tuple(
            Zone(ZoneKind(z["kind"]), z["x0"], z["y0"], z["x1"], z["y1"])
            for z in obj["zones"]
        ),
        summary=_summary_from_jsonable(obj["summary"]),
    )


# -- file I/O ---------------------------------------------------------------

def write_run_log(config: SimConfig, snapshots: list[Snapshot], path: Union[str, Path]) -> None:
    path = Path(path)
    lines = [_dumps({"schema": SCHEMA_VERSION, "config": config_to_jsonable(config)})]
    lines += [_dumps(snapshot_to_jsonable(s)) for s in snapshots]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_run_log(path: Union[str, Path]) -> RunLog:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    lines = text.splitlines()
    if not lines:
        raise LogParseError("empty log file", 1)
    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        raise LogParseError(f"malformed header: {exc.msg}", 1) from exc
    if header.get("schema") != SCHEMA_VERSION:
        raise LogParseError(
            f"schema version mismatch: expected {SCHEMA_VERSION!r}, got {header.get('schema')!r}",
            1,
        )
    config = config_from_jsonable(header["config"])
    snapshots = []
    for idx, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        try:
            snapshots.append(snapshot_from_jsonable(json.loads(line)))
        except json.JSONDecodeError as exc:
            raise LogParseError(f"malformed snapshot record: {exc.msg}", idx) from exc
        except (KeyError, ValueError, TypeError) as exc:
            raise LogParseError(f"invalid snapshot record: {exc}", idx) from exc
    return RunLog(config=config, snapshots=snapshots)


# public aliases for consumers that serve pieces of a snapshot
diff_to_jsonable = _diff_to_jsonable
event_to_jsonable = _event_to_jsonable
summary_to_jsonable = _summary_to_jsonable


def simulate_to_log(config: SimConfig, path: Union[str, Path]) -> list[Snapshot]:
    snapshots = Simulator(config).run()
    write_run_log(config, snapshots, path)
    return snapshots
