"""Shared-world scheduling and ground-truth execution.

Each agent runs the same deterministic greedy planner over its *own*
worldview and then executes only the entries assigned to itself.  When
worldviews agree the per-agent plans coincide and the fleet behaves as if
centrally scheduled; when they diverge, the executor surfaces the fallout
(duplicated and orphaned tasks) instead of failing.

Chains are triples with strict precedence.  Step 1 of every chain is
hardware-bound to its owner; steps 2 and 3 are computational and may be
relocated to a helper.  The base station owns no chains, acts as the
preferred helper, and computes twice as fast.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional

from .worldview import (
    AgentId,
    AttributeKind,
    Battery,
    CommRow,
    ConfigurationError,
    ScienceZoneFlag,
    Worldview,
    worldview_digest,
)

NAV_STEP_SECONDS = 4.0
SCI_STEP_SECONDS = 6.0
BASE_SPEEDUP = 2.0
MAX_BATTERY_SCALE = 4.0


class ExecutorIneligibleError(ValueError):
    """An agent with a dead battery cannot execute tasks."""


class ChainKind(str, Enum):
    NAV = "nav"
    SCI = "sci"


@dataclass(frozen=True, order=True)
class TaskId:
    owner: int
    chain: ChainKind
    step: int  # 1..3

    @property
    def label(self) -> str:
        return f"{self.owner}-{self.chain.value}-{self.step}"

    @property
    def chain_label(self) -> str:
        return f"{self.owner}-{self.chain.value}"

    @property
    def relocatable(self) -> bool:
        # step 1 needs the owner's hardware (cameras, instruments)
        return self.step > 1

    @property
    def nominal_duration(self) -> float:
        return NAV_STEP_SECONDS if self.chain is ChainKind.NAV else SCI_STEP_SECONDS

    def predecessor(self) -> Optional["TaskId"]:
        if self.step == 1:
            return None
        return TaskId(self.owner, self.chain, self.step - 1)


def parse_task_id(text: str) -> TaskId:
    try:
        owner, chain, step = text.split("-")
        task = TaskId(int(owner), ChainKind(chain), int(step))
    except (ValueError, KeyError) as exc:
        raise ConfigurationError(f"malformed task id: {text!r}") from exc
    if task.step not in (1, 2, 3):
        raise ConfigurationError(f"task step out of range: {text!r}")
    return task


@dataclass(frozen=True)
class TaskChain:
    owner: int
    kind: ChainKind
    mandatory: bool

    @property
    def tasks(self) -> tuple[TaskId, TaskId, TaskId]:
        return tuple(TaskId(self.owner, self.kind, s) for s in (1, 2, 3))


def battery_scale(level: int) -> float:
    """Task slowdown factor: 1.0 at full battery, 2.0 at 50%, capped at 4.0."""
    if level <= 0:
        raise ExecutorIneligibleError(f"battery level {level} cannot execute")
    if level >= 100:
        return 1.0
    if level >= 50:
        return 1.0 + (100 - level) / 50.0
    return min(MAX_BATTERY_SCALE, 2.0 + (50 - level) * (2.0 / 40.0))


def duration(task: TaskId, executor_battery: int, executor_is_base: bool = False) -> float:
    scale = battery_scale(executor_battery)
    if executor_is_base:
        scale /= BASE_SPEEDUP
    return task.nominal_duration * scale


def build_task_set(wv: Worldview, fleet: list[AgentId]) -> list[TaskChain]:
    """Chains implied by a worldview: nav for every rover, sci for believed
    science-zone occupants.  The base station owns nothing."""
    sz = wv.beliefs[AttributeKind.SCIENCE_ZONE]
    chains = [
        TaskChain(a.index, ChainKind.NAV, mandatory=True)
        for a in fleet
        if not a.is_base_station
    ]
    chains += [
        TaskChain(a.index, ChainKind.SCI, mandatory=False)
        for a in fleet
        if not a.is_base_station and sz[a.index].flag
    ]
    return chains


@dataclass(frozen=True)
class ScheduleEntry:
    task: TaskId
    executor: int
    start: float
    end: float

    @property
    def relocated(self) -> bool:
        return self.executor != self.task.owner


@dataclass(frozen=True)
class Schedule:
    computed_by: int
    entries: tuple[ScheduleEntry, ...]
    infeasible: tuple[str, ...]  # mandatory tasks that could not be placed
    partial: tuple[str, ...]  # optional tasks dropped for lack of capacity
    from_worldview_hash: str

    def plan_key(self) -> tuple:
        """Everything except computed_by; equal worldviews yield equal keys."""
        return (self.entries, self.infeasible, self.partial, self.from_worldview_hash)


def _believed_edges(wv: Worldview, threshold: int) -> list[list[bool]]:
    rows = wv.beliefs[AttributeKind.COMMUNICATION]
    n = wv.n
    return [
        [
            i != j
            and max(rows[i].bandwidths[j], rows[j].bandwidths[i]) >= threshold
            for j in range(n)
        ]
        for i in range(n)
    ]


def _has_path(edges: list[list[bool]], src: int, dst: int) -> bool:
    if src == dst:
        return True
    seen = {src}
    queue = deque([src])
    while queue:
        cur = queue.popleft()
        for nxt, ok in enumerate(edges[cur]):
            if ok and nxt not in seen:
                if nxt == dst:
                    return True
                seen.add(nxt)
                queue.append(nxt)
    return False


def compute_schedule(
    wv: Worldview,
    chains: list[TaskChain],
    horizon: float,
    fleet: list[AgentId],
    threshold: int,
) -> Schedule:
    """Deterministic greedy planner over one agent's beliefs.

    Nav chains are packed first, earliest-first by owner id.  An owner that
    also believes it has a sci chain may hand its computational nav steps to
    a helper (base station preferred, then idle rovers) when the helper
    finishes strictly earlier.  Sci steps then pack greedily onto whichever
    eligible executor finishes first; sci step 3 additionally needs a
    believed relay path from its executor to the base station.  Ties prefer
    the owner, then the base station, then the lowest agent id.
    """
    base = next(a.index for a in fleet if a.is_base_station)
    battery = {a.index: wv.beliefs[AttributeKind.BATTERY_LEVEL][a.index].level for a in fleet}
    edges = _believed_edges(wv, threshold)
    free: dict[int, float] = {a.index: 0.0 for a in fleet}
    entries: list[ScheduleEntry] = []
    infeasible: list[str] = []
    partial: list[str] = []

    nav_chains = sorted((c for c in chains if c.kind is ChainKind.NAV), key=lambda c: c.owner)
    sci_chains = sorted((c for c in chains if c.kind is ChainKind.SCI), key=lambda c: c.owner)
    sci_owners = {c.owner for c in sci_chains}
    idle_rovers = [
        a.index
        for a in fleet
        if not a.is_base_station and a.index not in sci_owners
    ]

    def can_execute(agent: int) -> bool:
        return battery[agent] > 0

    def option(task: TaskId, executor: int, earliest: float) -> tuple[float, float]:
        start = max(free[executor], earliest)
        end = start + duration(task, battery[executor], executor == base)
        return start, end

    def rank(executor: int, owner: int) -> tuple[int, int]:
        if executor == owner:
            return (0, executor)
        if executor == base:
            return (1, executor)
        return (2, executor)

    def commit(task: TaskId, executor: int, start: float, end: float) -> None:
        entries.append(ScheduleEntry(task=task, executor=executor, start=start, end=end))
        free[executor] = end

    # -- mandatory nav chains -------------------------------------------------
    for chain in nav_chains:
        owner = chain.owner
        prev_end = 0.0
        broken = False
        for task in chain.tasks:
            if broken:
                infeasible.append(task.label)
                continue
            if not can_execute(owner) and task.step == 1:
                infeasible.append(task.label)
                broken = True
                continue
            candidates = [owner] if can_execute(owner) else []
            if task.relocatable and owner in sci_owners:
                for helper in [base] + idle_rovers:
                    if helper != owner and edges[owner][helper] and can_execute(helper):
                        candidates.append(helper)
            options = [(option(task, c, prev_end), c) for c in candidates]
            if not options:
                infeasible.append(task.label)
                broken = True
                continue
            (start, end), executor = min(
                options, key=lambda item: (item[0][1], rank(item[1], owner))
            )
            if end > horizon:
                infeasible.append(task.label)
                broken = True
                continue
            commit(task, executor, start, end)
            prev_end = end

    # -- optional sci chains --------------------------------------------------
    for chain in sci_chains:
        owner = chain.owner
        prev_end = 0.0
        dropped = False
        for task in chain.tasks:
            if dropped:
                partial.append(task.label)
                continue
            if task.step == 1:
                candidates = [owner] if can_execute(owner) else []
            else:
                candidates = [owner] if can_execute(owner) else []
                for helper in sorted(a.index for a in fleet):
                    if helper != owner and edges[owner][helper] and can_execute(helper):
                        candidates.append(helper)
                if task.step == 3:
                    candidates = [c for c in candidates if _has_path(edges, c, base)]
            options = [
                (option(task, c, prev_end), c)
                for c in candidates
                if option(task, c, prev_end)[1] <= horizon
            ]
            if not options:
                partial.append(task.label)
                dropped = True
                continue
            (start, end), executor = min(
                options, key=lambda item: (item[0][1], rank(item[1], owner))
            )
            commit(task, executor, start, end)
            prev_end = end

    entries.sort(key=lambda e: (e.start, e.task.owner, e.task.chain.value, e.task.step))
    return Schedule(
        computed_by=wv.owner,
        entries=tuple(entries),
        infeasible=tuple(infeasible),
        partial=tuple(partial),
        from_worldview_hash=worldview_digest(wv),
    )


# --------------------------------------------------------------------------
# Ground-truth execution
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class TimelineEvent:
    task: TaskId
    executor: int
    start: float
    end: float
    relocated: bool
    completed: bool  # False when a relocated sci step 3 had no relay path

    @property
    def owner(self) -> int:
        return self.task.owner


def start_event_id(task: TaskId, start: float) -> str:
    return f"start:{task.label}@{start!r}"


def done_event_id(task: TaskId, end: float) -> str:
    return f"done:{task.label}@{end!r}"


def parse_action_log(events: Iterable[str]) -> tuple[set[str], dict[str, float]]:
    """Split an action log into (labels ever started, label -> earliest
    completion time)."""
    started: set[str] = set()
    done: dict[str, float] = {}
    for ev in events:
        verb, _, rest = ev.partition(":")
        label, _, stamp = rest.rpartition("@")
        if not label:
            continue
        started.add(label)
        if verb == "done":
            t = float(stamp)
            if label not in done or t < done[label]:
                done[label] = t
    return started, done


@dataclass
class ExecutionState:
    """Mutable execution record applied against the true world, tick by tick.

    Agents execute only entries assigned to themselves in their own
    schedule, and skip tasks whose completion they know about (their own
    history plus completions learned through worldview propagation).  This
    keeps a synchronized fleet free of re-executions while letting
    partitioned fleets duplicate work, exactly the anomaly the diff views
    are meant to expose.
    """
    n_agents: int
    base_index: int
    free_time: dict[int, float] = field(default_factory=dict)
    done: dict[int, dict[TaskId, float]] = field(default_factory=dict)
    completed: dict[TaskId, float] = field(default_factory=dict)
    executions: dict[TaskId, list[int]] = field(default_factory=dict)
    events: list[TimelineEvent] = field(default_factory=list)

    def _known_actions(self, agent: int, worldview: Worldview) -> tuple[set[str], dict[str, float]]:
        """(labels known started by anyone, label -> earliest known end).

        Drawn from the agent's believed action logs plus its own history,
        so knowledge spreads only as far as communication does.
        """
        started: set[str] = set()
        done: dict[str, float] = {}
        for log in worldview.beliefs[AttributeKind.ACTIONS]:
            log_started, log_done = parse_action_log(log.events)
            started |= log_started
            for label, end in log_done.items():
                if label not in done or end < done[label]:
                    done[label] = end
        for task, end in self.done.get(agent, {}).items():
            started.add(task.label)
            if task.label not in done or end < done[task.label]:
                done[task.label] = end
        return started, done

    def advance(
        self,
        schedules: dict[int, Schedule],
        worldviews: list[Worldview],
        links: list[list[int]],
        threshold: int,
        window_start: float,
        window_end: float,
    ) -> dict[int, float]:
        """Run one tick window; returns per-agent busy seconds in the window."""
        busy = {a: 0.0 for a in range(self.n_agents)}
        link_edges = [
            [links[i][j] >= threshold for j in range(self.n_agents)]
            for i in range(self.n_agents)
        ]
        for agent in range(self.n_agents):
            # time still owed to a task started in an earlier window
            carried = self.free_time.get(agent, 0.0)
            if carried > window_start:
                busy[agent] += min(carried, window_end) - window_start
            schedule = schedules.get(agent)
            if schedule is None:
                continue
            mine = [e for e in schedule.entries if e.executor == agent]
            known_started, known_done = self._known_actions(agent, worldviews[agent])
            agent_done = self.done.setdefault(agent, {})
            while True:
                t_free = max(self.free_time.get(agent, 0.0), window_start)
                if t_free >= window_end:
                    break
                best = None
                for entry in mine:
                    if entry.task in agent_done or entry.task.label in known_started:
                        continue
                    pred = entry.task.predecessor()
                    pred_end = 0.0
                    if pred is not None:
                        if pred in agent_done:
                            pred_end = agent_done[pred]
                        elif pred.label in known_done:
                            pred_end = known_done[pred.label]
                        else:
                            continue
                    start = max(t_free, entry.start, pred_end)
                    if start >= window_end:
                        continue
                    key = (start, entry.start, entry.task)
                    if best is None or key < best[0]:
                        best = (key, entry, start)
                if best is None:
                    break
                _, entry, start = best
                end = start + (entry.end - entry.start)
                delivered = True
                if (
                    entry.task.chain is ChainKind.SCI
                    and entry.task.step == 3
                    and entry.relocated
                ):
                    delivered = _has_path(link_edges, agent, self.base_index)
                self.events.append(
                    TimelineEvent(
                        task=entry.task,
                        executor=agent,
                        start=start,
                        end=end,
                        relocated=entry.relocated,
                        completed=delivered,
                    )
                )
                agent_done[entry.task] = end
                self.executions.setdefault(entry.task, []).append(agent)
                if delivered:
                    prev = self.completed.get(entry.task)
                    if prev is None or end < prev:
                        self.completed[entry.task] = end
                busy[agent] += min(end, window_end) - start
                self.free_time[agent] = end
        return busy

    def duplicates(self) -> dict[TaskId, tuple[int, ...]]:
        return {
            task: tuple(sorted(set(execs)))
            for task, execs in self.executions.items()
            if len(set(execs)) > 1
        }

    def orphans(self, schedules: dict[int, Schedule]) -> frozenset[TaskId]:
        """Tasks present in some agent's final plan that nobody ever ran."""
        planned = {e.task for s in schedules.values() for e in s.entries}
        return frozenset(t for t in planned if t not in self.executions)
