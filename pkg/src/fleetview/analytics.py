"""Summary structures derived from executed timelines and diff matrices.

Everything here is a pure function over immutable snapshot pieces: science
objective fractions, per-agent task abstraction glyph states, chain traces,
scatterplot quadrant classification, and the compact per-tick overview.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional

from .scheduling import ChainKind, TaskId, TimelineEvent, parse_task_id
from .worldview import (
    AttributeKind,
    ColumnSummary,
    DifferenceMatrix,
    MONITORED_KINDS,
    SyncReport,
    column_summary,
    detect_desync,
)

# Scatterplot central "grey band" halfwidth, in percent points.
NEUTRAL_BAND = 10.0

# Trailing window (ticks) for the scatterplot's average CPU load.
AVG_CPU_WINDOW = 5


class NotFoundError(KeyError):
    """A requested task or chain does not exist in the run."""


class QuadrantClass(str, Enum):
    LAZY = "lazy"            # low cpu, high battery: could take more work
    OVERWORKED = "overworked"  # high cpu, low battery
    HIGH_POWER = "highpower"   # high cpu, high battery
    DEPLETED = "depleted"      # low cpu, low battery
    NEUTRAL = "neutral"


def quadrant(avg_cpu: float, battery: float, band: float = NEUTRAL_BAND) -> QuadrantClass:
    for name, value in (("cpu", avg_cpu), ("battery", battery)):
        if not 0.0 <= value <= 100.0:
            raise ValueError(f"{name} out of range: {value}")
    if abs(avg_cpu - 50.0) <= band and abs(battery - 50.0) <= band:
        return QuadrantClass.NEUTRAL
    high_cpu = avg_cpu > 50.0
    high_battery = battery > 50.0
    if high_cpu:
        return QuadrantClass.HIGH_POWER if high_battery else QuadrantClass.OVERWORKED
    return QuadrantClass.LAZY if high_battery else QuadrantClass.DEPLETED


def _completed_steps(events: Iterable[TimelineEvent], owner: int, kind: ChainKind) -> set[int]:
    return {
        e.task.step
        for e in events
        if e.completed and e.task.owner == owner and e.task.chain is kind
    }


def science_fractions(
    events: list[TimelineEvent], eligible: frozenset[int]
) -> Optional[list[float]]:
    """fraction[k] = eligible owners whose sci step k+1 completed / |eligible|.

    Completions count toward the chain's owner no matter who executed the
    step.  An empty eligible set has no meaningful fraction and yields None.
    """
    if not eligible:
        return None
    fractions = []
    for step in (1, 2, 3):
        done = sum(
            1
            for owner in eligible
            if step in _completed_steps(events, owner, ChainKind.SCI)
        )
        fractions.append(done / len(eligible))
    return fractions


@dataclass(frozen=True)
class ChainTrace:
    owner: int
    kind: ChainKind
    events: tuple[TimelineEvent, ...]


def chain_trace(
    task_or_chain: str, events: list[TimelineEvent], n_agents: int
) -> ChainTrace:
    """Full trace of the owner's chain, ordered by step then start time.

    Accepts either a full task id ("5-sci-2") or a chain id ("5-sci").
    Relocated steps executed by other agents are included.
    """
    parts = task_or_chain.split("-")
    if len(parts) == 2:
        task = parse_task_id(task_or_chain + "-1")
    else:
        task = parse_task_id(task_or_chain)
    if not 0 <= task.owner < n_agents:
        raise NotFoundError(f"no such agent: {task.owner}")
    matching = sorted(
        (
            e
            for e in events
            if e.task.owner == task.owner and e.task.chain is task.chain
        ),
        key=lambda e: (e.task.step, e.start, e.executor),
    )
    return ChainTrace(owner=task.owner, kind=task.chain, events=tuple(matching))


@dataclass(frozen=True)
class TaskAbstraction:
    agent: int
    nav_done: tuple[bool, bool, bool]
    sci_done: tuple[bool, bool, bool]
    eligible_for_sci: bool


def task_abstraction(
    events: list[TimelineEvent],
    eligible: frozenset[int],
    n_agents: int,
    base_index: int,
) -> list[TaskAbstraction]:
    """Glyph states per rover; the base station has no row."""
    out = []
    for agent in range(n_agents):
        if agent == base_index:
            continue
        nav = _completed_steps(events, agent, ChainKind.NAV)
        sci = _completed_steps(events, agent, ChainKind.SCI)
        out.append(
            TaskAbstraction(
                agent=agent,
                nav_done=tuple(s in nav for s in (1, 2, 3)),
                sci_done=tuple(s in sci for s in (1, 2, 3)),
                eligible_for_sci=agent in eligible,
            )
        )
    return out


@dataclass(frozen=True)
class SummaryOverview:
    fractions: Optional[list[float]]
    sync_warning: bool
    mini_dwc: dict[AttributeKind, tuple[ColumnSummary, ...]]
    report: SyncReport


def summary_overview(
    events: list[TimelineEvent],
    diffs: dict[AttributeKind, DifferenceMatrix],
    eligible: frozenset[int],
) -> SummaryOverview:
    """Compose the top strip: science fractions, desync warning, mini panels."""
    report = detect_desync(diffs)
    mini = {
        kind: tuple(column_summary(diffs[kind], j) for j in range(diffs[kind].n))
        for kind in MONITORED_KINDS
    }
    return SummaryOverview(
        fractions=science_fractions(events, eligible),
        sync_warning=not report.in_sync,
        mini_dwc=mini,
        report=report,
    )
