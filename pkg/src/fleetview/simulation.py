"""Deterministic discrete-tick fleet simulation with fault injection.

Each tick runs a fixed pipeline: true-state evolution, fault injection,
link computation, worldview propagation, per-agent scheduling, and
ground-truth execution, ending in an immutable snapshot.  Given the same
config (including seed) the emitted snapshot sequence is byte-identical.

Communication is gossip-style: any pair whose link meets the propagation
threshold exchanges full worldviews, and a receiver adopts the sender's
belief about a third agent only when the sender's information is strictly
fresher.  Faults (a disabled radio, or a partition cut through the map)
starve that exchange and let beliefs drift apart.
"""

from __future__ import annotations

import math
import random
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Union

from .analytics import AVG_CPU_WINDOW, SummaryOverview, summary_overview
from .scheduling import (
    ExecutionState,
    Schedule,
    TimelineEvent,
    build_task_set,
    compute_schedule,
)
from .worldview import (
    ActionLog,
    AgentId,
    AttributeKind,
    Battery,
    CommRow,
    ConfigurationError,
    Cpu,
    DifferenceMatrix,
    Location,
    MONITORED_KINDS,
    ScienceZoneFlag,
    Worldview,
    attribute_matrix,
    build_difference_matrix,
    make_fleet,
    worldview_digest,
)

DEFAULT_MAX_BANDWIDTH = 10
DEFAULT_THRESHOLD = 2
BATTERY_DRAIN_STEP = 10


class ZoneKind(str, Enum):
    SCIENCE = "science"
    COMM_CUTOFF = "comm_cutoff"


@dataclass(frozen=True)
class Zone:
    kind: ZoneKind
    x0: float
    y0: float
    x1: float
    y1: float

    def __post_init__(self):
        if not (self.x0 < self.x1 and self.y0 < self.y1):
            raise ConfigurationError(f"degenerate zone rectangle: {self}")

    def contains(self, x: float, y: float) -> bool:
        return self.x0 <= x <= self.x1 and self.y0 <= y <= self.y1

    def blocks_segment(self, p: tuple[float, float], q: tuple[float, float]) -> bool:
        """Liang-Barsky clip: does the segment p-q intersect this rectangle?"""
        (x0, y0), (x1, y1) = p, q
        dx, dy = x1 - x0, y1 - y0
        t0, t1 = 0.0, 1.0
        for pc, qc in (
            (-dx, x0 - self.x0),
            (dx, self.x1 - x0),
            (-dy, y0 - self.y0),
            (dy, self.y1 - y0),
        ):
            if pc == 0.0:
                if qc < 0.0:
                    return False
            else:
                r = qc / pc
                if pc < 0.0:
                    t0 = max(t0, r)
                else:
                    t1 = min(t1, r)
                if t0 > t1:
                    return False
        return True


@dataclass(frozen=True)
class MapSpec:
    width: float
    height: float
    zones: tuple[Zone, ...] = ()

    @property
    def diagonal(self) -> float:
        return math.hypot(self.width, self.height)


@dataclass(frozen=True)
class AllSync:
    kind: str = "all_sync"


@dataclass(frozen=True)
class IsolatedAgent:
    target: int
    at_tick: int
    kind: str = "isolated_agent"


@dataclass(frozen=True)
class Bipartition:
    cut: frozenset[int]
    at_tick: int
    kind: str = "bipartition"


Scenario = Union[AllSync, IsolatedAgent, Bipartition]


@dataclass(frozen=True)
class Perturbation:
    """Scripted true-state mutation: battery level or position."""
    tick: int
    agent: int
    attribute: str  # "battery" | "position"
    value: object


@dataclass(frozen=True)
class SimConfig:
    n_agents: int = 10
    seed: int = 0
    tick_seconds: float = 10.0
    horizon: int = 40
    map: MapSpec = field(default_factory=lambda: MapSpec(100.0, 100.0))
    scenario: Scenario = field(default_factory=AllSync)
    perturbations: tuple[Perturbation, ...] = ()
    propagation_threshold: int = DEFAULT_THRESHOLD
    max_bandwidth: int = DEFAULT_MAX_BANDWIDTH
    base_index: Optional[int] = None
    positions: Optional[tuple[tuple[float, float], ...]] = None

    def validate(self) -> None:
        if self.n_agents < 2:
            raise ConfigurationError("need at least 2 agents")
        if self.horizon < 0:
            raise ConfigurationError("horizon must be >= 0")
        if self.propagation_threshold < 1:
            raise ConfigurationError("propagation threshold must be >= 1")
        if self.positions is not None and len(self.positions) != self.n_agents:
            raise ConfigurationError("positions length must match n_agents")
        sc = self.scenario
        if isinstance(sc, IsolatedAgent):
            if not 0 <= sc.target < self.n_agents:
                raise ConfigurationError(f"unknown agent id in scenario: {sc.target}")
        if isinstance(sc, Bipartition):
            if not sc.cut or len(sc.cut) >= self.n_agents:
                raise ConfigurationError("bipartition cut must be a proper nonempty subset")
            bad = [a for a in sc.cut if not 0 <= a < self.n_agents]
            if bad:
                raise ConfigurationError(f"unknown agent ids in cut: {bad}")
        fault_tick = getattr(sc, "at_tick", None)
        for p in self.perturbations:
            if not 0 <= p.agent < self.n_agents:
                raise ConfigurationError(f"unknown agent id in perturbation: {p.agent}")
            if fault_tick is not None and p.tick < fault_tick:
                raise ConfigurationError(
                    f"perturbation at tick {p.tick} precedes the fault at {fault_tick}"
                )


def default_positions(config: SimConfig) -> tuple[tuple[float, float], ...]:
    """Seeded random layout, kept away from the map edge."""
    rng = random.Random(config.seed)
    mx, my = config.map.width, config.map.height
    return tuple(
        (round(rng.uniform(0.1 * mx, 0.9 * mx), 3), round(rng.uniform(0.1 * my, 0.9 * my), 3))
        for _ in range(config.n_agents)
    )


# --------------------------------------------------------------------------
# Link model and worldview propagation
# --------------------------------------------------------------------------

def compute_links(
    positions: list[tuple[float, float]],
    zones: list[Zone],
    radios: list[bool],
    max_bandwidth: int = DEFAULT_MAX_BANDWIDTH,
    max_distance: float = None,
) -> list[list[int]]:
    """Symmetric bandwidth matrix: linear distance decay, severed by
    communication cut-off zones and disabled radios."""
    n = len(positions)
    if max_distance is None:
        max_distance = math.hypot(100.0, 100.0)
    cutoffs = [z for z in zones if z.kind is ZoneKind.COMM_CUTOFF]
    links = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if not (radios[i] and radios[j]):
                continue
            if any(z.blocks_segment(positions[i], positions[j]) for z in cutoffs):
                continue
            d = math.dist(positions[i], positions[j])
            bw = round(max_bandwidth * (1.0 - d / max_distance))
            bw = max(0, min(max_bandwidth, bw))
            links[i][j] = links[j][i] = bw
    return links


def _merge_from(receiver: Worldview, sender: Worldview) -> None:
    for k in range(receiver.n):
        if k == receiver.owner:
            continue
        if sender.freshness[k] > receiver.freshness[k]:
            for kind in AttributeKind:
                receiver.beliefs[kind][k] = sender.beliefs[kind][k]
            receiver.freshness[k] = sender.freshness[k]


def propagate(
    worldviews: list[Worldview],
    links: list[list[int]],
    threshold: int,
    tick: int,
) -> list[Worldview]:
    """One synchronous gossip round over all links meeting the threshold.

    Receivers merge from the senders' start-of-round views, so information
    crosses at most one hop per tick; pairs are processed in ascending
    (i, j) order for determinism.
    """
    if threshold < 1:
        raise ConfigurationError("propagation threshold must be >= 1")
    old = [wv.copy() for wv in worldviews]
    new = [wv.copy() for wv in worldviews]
    n = len(worldviews)
    for i in range(n):
        for j in range(i + 1, n):
            if links[i][j] >= threshold:
                _merge_from(new[i], old[j])
                _merge_from(new[j], old[i])
    return new


# --------------------------------------------------------------------------
# Snapshots
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class TrueAgentState:
    id: int
    is_base_station: bool
    x: float
    y: float
    battery: int
    cpu: int
    radio_enabled: bool


@dataclass(frozen=True)
class Snapshot:
    tick: int
    true_states: tuple[TrueAgentState, ...]
    links: tuple[tuple[int, ...], ...]
    worldviews: tuple[Worldview, ...]
    schedules: dict[int, Schedule]
    events: tuple[TimelineEvent, ...]  # cumulative over the run
    diffs: dict[AttributeKind, DifferenceMatrix]
    eligible: frozenset[int]  # rovers ever seen inside a science zone
    avg_cpu: tuple[float, ...]
    zones: tuple[Zone, ...]  # map zones plus any injected cut-off
    summary: SummaryOverview


class Simulator:
    """Single-run simulation loop; distinct configs can run in parallel."""

    def __init__(self, config: SimConfig):
        config.validate()
        self.config = config
        self.fleet = make_fleet(config.n_agents, config.base_index)
        self.base = next(a.index for a in self.fleet if a.is_base_station)
        self.n = config.n_agents
        self.positions = list(config.positions or default_positions(config))
        self.battery = [100] * self.n
        self.cpu = [0] * self.n
        self.radios = [True] * self.n
        self.injected_zone: Optional[Zone] = None
        self.severed: set[tuple[int, int]] = set()
        self.action_log: list[list[str]] = [[] for _ in range(self.n)]
        self.pending_actions: list[list[tuple[float, str]]] = [[] for _ in range(self.n)]
        self.exec_state = ExecutionState(n_agents=self.n, base_index=self.base)
        self.schedules: dict[int, Schedule] = {}
        self.last_digest: dict[int, str] = {}
        self.busy_prev: dict[int, float] = {a: 0.0 for a in range(self.n)}
        self.cpu_history: list[deque] = [deque(maxlen=AVG_CPU_WINDOW) for _ in range(self.n)]
        self.ever_eligible: set[int] = set()
        self._events_seen = 0
        self.worldviews = self._initial_worldviews()

    def _initial_worldviews(self) -> list[Worldview]:
        shared: dict[AttributeKind, list] = {
            AttributeKind.LOCATION: [Location(x, y) for x, y in self.positions],
            AttributeKind.SCIENCE_ZONE: [
                ScienceZoneFlag(self._in_science_zone(a)) for a in range(self.n)
            ],
            AttributeKind.BATTERY_LEVEL: [Battery(b) for b in self.battery],
            AttributeKind.CPU_UTILIZATION: [Cpu(c) for c in self.cpu],
            AttributeKind.ACTIONS: [ActionLog() for _ in range(self.n)],
            AttributeKind.COMMUNICATION: [
                CommRow((0,) * self.n, a) for a in range(self.n)
            ],
        }
        return [
            Worldview(
                owner=a,
                beliefs={k: list(v) for k, v in shared.items()},
                freshness=[-1] * self.n,
            )
            for a in range(self.n)
        ]

    def _in_science_zone(self, agent: int) -> bool:
        x, y = self.positions[agent]
        return any(
            z.kind is ZoneKind.SCIENCE and z.contains(x, y) for z in self.config.map.zones
        )

    def _active_zones(self) -> list[Zone]:
        zones = list(self.config.map.zones)
        if self.injected_zone is not None:
            zones.append(self.injected_zone)
        return zones

    # -- tick pipeline stages ------------------------------------------------

    def _evolve(self, tick: int) -> None:
        dt = self.config.tick_seconds
        for a in range(self.n):
            busy = self.busy_prev.get(a, 0.0)
            if busy > 0.0:
                self.battery[a] = max(0, self.battery[a] - BATTERY_DRAIN_STEP)
            self.cpu[a] = min(100, int(round(busy / dt * 10)) * 10) if dt > 0 else 0
        for p in self.config.perturbations:
            if p.tick == tick:
                if p.attribute == "battery":
                    self.battery[p.agent] = int(p.value)
                elif p.attribute == "position":
                    self.positions[p.agent] = (float(p.value[0]), float(p.value[1]))
                else:
                    raise ConfigurationError(f"unknown perturbation attribute: {p.attribute}")
        now = tick * dt
        for a in range(self.n):
            ready = [item for item in self.pending_actions[a] if item[0] <= now]
            self.pending_actions[a] = [item for item in self.pending_actions[a] if item[0] > now]
            for _, label in sorted(ready):
                self.action_log[a].append(label)
        for a in range(self.n):
            wv = self.worldviews[a]
            wv.beliefs[AttributeKind.LOCATION][a] = Location(*self.positions[a])
            wv.beliefs[AttributeKind.SCIENCE_ZONE][a] = ScienceZoneFlag(self._in_science_zone(a))
            wv.beliefs[AttributeKind.BATTERY_LEVEL][a] = Battery(self.battery[a])
            wv.beliefs[AttributeKind.CPU_UTILIZATION][a] = Cpu(self.cpu[a])
            wv.beliefs[AttributeKind.ACTIONS][a] = ActionLog(tuple(self.action_log[a]))
            wv.freshness[a] = tick
            if not self.fleet[a].is_base_station and self._in_science_zone(a):
                self.ever_eligible.add(a)

    def inject_fault(self, tick: int) -> None:
        sc = self.config.scenario
        if isinstance(sc, IsolatedAgent) and tick >= sc.at_tick:
            self.radios[sc.target] = False
        if isinstance(sc, Bipartition) and tick == sc.at_tick:
            cut = sc.cut
            rest = frozenset(range(self.n)) - cut
            self.severed = {
                (min(i, j), max(i, j)) for i in cut for j in rest
            }
            self.injected_zone = self._separating_zone(cut, rest)

    def _separating_zone(self, left: frozenset[int], right: frozenset[int]) -> Optional[Zone]:
        """A cut-off strip between the two groups, when an axis gap exists."""
        for axis in (0, 1):
            for lo_group, hi_group in ((left, right), (right, left)):
                lo = max(self.positions[a][axis] for a in lo_group)
                hi = min(self.positions[a][axis] for a in hi_group)
                gap = hi - lo
                if gap > 1.0:
                    a0 = lo + 0.25 * gap
                    a1 = hi - 0.25 * gap
                    if axis == 0:
                        return Zone(ZoneKind.COMM_CUTOFF, a0, 0.0, a1, self.config.map.height)
                    return Zone(ZoneKind.COMM_CUTOFF, 0.0, a0, self.config.map.width, a1)
        return None

    def _links(self) -> list[list[int]]:
        links = compute_links(
            self.positions,
            self._active_zones(),
            self.radios,
            self.config.max_bandwidth,
            self.config.map.diagonal,
        )
        for i, j in self.severed:
            links[i][j] = links[j][i] = 0
        return links

    def step(self, tick: int) -> Snapshot:
        dt = self.config.tick_seconds
        self._evolve(tick)
        self.inject_fault(tick)
        links = self._links()
        for a in range(self.n):
            self.worldviews[a].beliefs[AttributeKind.COMMUNICATION][a] = CommRow(
                tuple(links[a]), a
            )
        self.worldviews = propagate(
            self.worldviews, links, self.config.propagation_threshold, tick
        )
        horizon_seconds = self.config.horizon * dt
        for a in range(self.n):
            digest = worldview_digest(self.worldviews[a])
            if self.last_digest.get(a) != digest:
                wv = self.worldviews[a]
                self.schedules[a] = compute_schedule(
                    wv,
                    build_task_set(wv, self.fleet),
                    horizon_seconds,
                    self.fleet,
                    self.config.propagation_threshold,
                )
                self.last_digest[a] = digest
        self.busy_prev = self.exec_state.advance(
            self.schedules,
            self.worldviews,
            links,
            self.config.propagation_threshold,
            tick * dt,
            (tick + 1) * dt,
        )
        for ev in self.exec_state.events[self._events_seen:]:
            self.pending_actions[ev.executor].append(
                (ev.start, f"start:{ev.task.label}@{ev.start!r}")
            )
            if ev.completed:
                self.pending_actions[ev.executor].append(
                    (ev.end, f"done:{ev.task.label}@{ev.end!r}")
                )
        self._events_seen = len(self.exec_state.events)
        for a in range(self.n):
            self.cpu_history[a].append(self.cpu[a])
        return self._snapshot(tick, links)

    def _snapshot(self, tick: int, links: list[list[int]]) -> Snapshot:
        diffs = {
            kind: build_difference_matrix(attribute_matrix(self.worldviews, kind))
            for kind in MONITORED_KINDS
        }
        events = tuple(self.exec_state.events)
        eligible = frozenset(self.ever_eligible)
        return Snapshot(
            tick=tick,
            true_states=tuple(
                TrueAgentState(
                    id=a,
                    is_base_station=self.fleet[a].is_base_station,
                    x=self.positions[a][0],
                    y=self.positions[a][1],
                    battery=self.battery[a],
                    cpu=self.cpu[a],
                    radio_enabled=self.radios[a],
                )
                for a in range(self.n)
            ),
            links=tuple(tuple(row) for row in links),
            worldviews=tuple(wv.copy() for wv in self.worldviews),
            schedules=dict(self.schedules),
            events=events,
            diffs=diffs,
            eligible=eligible,
            avg_cpu=tuple(
                sum(h) / len(h) if h else 0.0 for h in self.cpu_history
            ),
            zones=tuple(self._active_zones()),
            summary=summary_overview(list(events), diffs, eligible),
        )

    def run(self) -> list[Snapshot]:
        return [self.step(tick) for tick in range(self.config.horizon)]


def run_simulation(config: SimConfig) -> list[Snapshot]:
    return Simulator(config).run()


# --------------------------------------------------------------------------
# Config (de)serialization, shared by the YAML config file and the log header
# --------------------------------------------------------------------------

def scenario_to_jsonable(scenario: Scenario) -> dict:
    if isinstance(scenario, AllSync):
        return {"type": "all_sync"}
    if isinstance(scenario, IsolatedAgent):
        return {"type": "isolated_agent", "target": scenario.target, "at_tick": scenario.at_tick}
    if isinstance(scenario, Bipartition):
        return {
            "type": "bipartition",
            "cut": sorted(scenario.cut),
            "at_tick": scenario.at_tick,
        }
    raise ConfigurationError(f"unknown scenario: {scenario!r}")


def scenario_from_jsonable(obj: dict) -> Scenario:
    kind = obj.get("type", "all_sync")
    if kind == "all_sync":
        return AllSync()
    if kind == "isolated_agent":
        return IsolatedAgent(target=int(obj["target"]), at_tick=int(obj["at_tick"]))
    if kind == "bipartition":
        return Bipartition(cut=frozenset(int(a) for a in obj["cut"]), at_tick=int(obj["at_tick"]))
    raise ConfigurationError(f"unknown scenario type: {kind!r}")


def config_to_jsonable(config: SimConfig) -> dict:
    return {
        "n_agents": config.n_agents,
        "seed": config.seed,
        "tick_seconds": config.tick_seconds,
        "horizon": config.horizon,
        "map": {
            "width": config.map.width,
            "height": config.map.height,
            "zones": [
                {"kind": z.kind.value, "x0": z.x0, "y0": z.y0, "x1": z.x1, "y1": z.y1}
                for z in config.map.zones
            ],
        },
        "scenario": scenario_to_jsonable(config.scenario),
        "perturbations": [
            {
                "tick": p.tick,
                "agent": p.agent,
                "attribute": p.attribute,
                "value": list(p.value) if p.attribute == "position" else p.value,
            }
            for p in config.perturbations
        ],
        "propagation_threshold": config.propagation_threshold,
        "max_bandwidth": config.max_bandwidth,
        "base_index": config.base_index,
        "positions": [list(p) for p in config.positions] if config.positions else None,
    }


def config_from_jsonable(obj: dict) -> SimConfig:
    map_obj = obj.get("map", {})
    zones = tuple(
        Zone(ZoneKind(z["kind"]), float(z["x0"]), float(z["y0"]), float(z["x1"]), float(z["y1"]))
        for z in map_obj.get("zones", [])
    )
    positions = obj.get("positions")
    perturbations = tuple(
        Perturbation(
            tick=int(p["tick"]),
            agent=int(p["agent"]),
            attribute=p["attribute"],
            value=tuple(float(v) for v in p["value"])
            if p["attribute"] == "position"
            else int(p["value"]),
        )
        for p in obj.get("perturbations", [])
    )
    config = SimConfig(
        n_agents=int(obj.get("n_agents", 10)),
        seed=int(obj.get("seed", 0)),
        tick_seconds=float(obj.get("tick_seconds", 10.0)),
        horizon=int(obj.get("horizon", 40)),
        map=MapSpec(
            width=float(map_obj.get("width", 100.0)),
            height=float(map_obj.get("height", 100.0)),
            zones=zones,
        ),
        scenario=scenario_from_jsonable(obj.get("scenario", {"type": "all_sync"})),
        perturbations=perturbations,
        propagation_threshold=int(obj.get("propagation_threshold", DEFAULT_THRESHOLD)),
        max_bandwidth=int(obj.get("max_bandwidth", DEFAULT_MAX_BANDWIDTH)),
        base_index=obj.get("base_index"),
        positions=tuple((float(x), float(y)) for x, y in positions) if positions else None,
    )
    config.validate()
    return config
