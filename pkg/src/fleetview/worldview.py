"""Worldview data model and the per-attribute diff pipeline.

Every agent carries beliefs about all n agents across six attributes.
For one attribute the fleet's beliefs form an n x n matrix whose diagonal
holds each agent's own (ego) value.  The diff pass compares every entry
against its *column's* ego value and classifies it:

  state 1 -- the ego cell itself (diagonal),
  state 2 -- agrees with the column ego,
  state 3 -- disagrees; the cell keeps the contrarian's presumed value.

Per-column counts of state-2 and state-3 cells always sum to n - 1.
All functions here are pure over immutable inputs.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Union


class VariantMismatchError(TypeError):
    """Two attribute values of different variants were compared."""


class ConfigurationError(ValueError):
    """A required attribute kind is missing or an id is unknown."""


# Comparison tolerances.  Locations are continuous, so equality means
# "within EPS_LOCATION metres"; bandwidths compare exactly.
EPS_LOCATION = 0.5
EPS_BANDWIDTH = 0

# Battery / CPU levels live on a coarse percent grid.
ORDINAL_GRID = tuple(range(0, 101, 10))


class AttributeKind(str, Enum):
    LOCATION = "location"
    SCIENCE_ZONE = "sciencezone"
    BATTERY_LEVEL = "battery"
    CPU_UTILIZATION = "cpu"
    ACTIONS = "actions"
    COMMUNICATION = "comm"


# The three attributes that drive scheduling decisions and therefore the
# desync warning.  Order matches the summary strip (CN, BT, SZ).
MONITORED_KINDS = (
    AttributeKind.COMMUNICATION,
    AttributeKind.BATTERY_LEVEL,
    AttributeKind.SCIENCE_ZONE,
)


@dataclass(frozen=True, order=True)
class AgentId:
    index: int
    is_base_station: bool = False

    @property
    def label(self) -> str:
        return "ST" if self.is_base_station else str(self.index)


def make_fleet(n_agents: int, base_index: Optional[int] = None) -> list[AgentId]:
    """Dense agent ids 0..n-1 with exactly one base station (default: last)."""
    if n_agents < 2:
        raise ConfigurationError(f"need at least 2 agents, got {n_agents}")
    base = n_agents - 1 if base_index is None else base_index
    if not 0 <= base < n_agents:
        raise ConfigurationError(f"base station index {base} out of range")
    return [AgentId(i, is_base_station=(i == base)) for i in range(n_agents)]


# --------------------------------------------------------------------------
# Attribute values (tagged union)
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Location:
    x: float
    y: float


@dataclass(frozen=True)
class ScienceZoneFlag:
    flag: bool


@dataclass(frozen=True)
class Battery:
    level: int  # percent on ORDINAL_GRID


@dataclass(frozen=True)
class Cpu:
    level: int  # percent on ORDINAL_GRID


@dataclass(frozen=True)
class ActionLog:
    events: tuple[str, ...] = ()


@dataclass(frozen=True)
class CommRow:
    """Bandwidths from one agent to every agent; the self entry is undefined."""
    bandwidths: tuple[int, ...]
    self_index: int


AttributeValue = Union[Location, ScienceZoneFlag, Battery, Cpu, ActionLog, CommRow]

_VARIANT_OF = {
    AttributeKind.LOCATION: Location,
    AttributeKind.SCIENCE_ZONE: ScienceZoneFlag,
    AttributeKind.BATTERY_LEVEL: Battery,
    AttributeKind.CPU_UTILIZATION: Cpu,
    AttributeKind.ACTIONS: ActionLog,
    AttributeKind.COMMUNICATION: CommRow,
}


def _check_variant(kind: AttributeKind, *values: AttributeValue) -> None:
    expected = _VARIANT_OF[kind]
    for v in values:
        if not isinstance(v, expected):
            raise VariantMismatchError(
                f"expected {expected.__name__} for {kind.value}, got {type(v).__name__}"
            )


def attribute_equals(kind: AttributeKind, a: AttributeValue, b: AttributeValue) -> bool:
    """Equality under the per-kind tolerances used by the diff pass."""
    _check_variant(kind, a, b)
    if kind is AttributeKind.LOCATION:
        return math.hypot(a.x - b.x, a.y - b.y) <= EPS_LOCATION
    if kind is AttributeKind.COMMUNICATION:
        if len(a.bandwidths) != len(b.bandwidths):
            return False
        return all(
            abs(x - y) <= EPS_BANDWIDTH
            for k, (x, y) in enumerate(zip(a.bandwidths, b.bandwidths))
            if k != a.self_index
        )
    # booleans, ordinals, and event sequences compare exactly
    return a == b


def diff_entry(
    ego: AttributeValue, presumed: AttributeValue, kind: AttributeKind
) -> Optional[AttributeValue]:
    """None when the presumed value matches the ego value, else the presumed value."""
    if attribute_equals(kind, ego, presumed):
        return None
    return presumed


# --------------------------------------------------------------------------
# Worldviews and matrices
# --------------------------------------------------------------------------

@dataclass
class Worldview:
    """One agent's beliefs about all n agents, with per-agent freshness ticks."""
    owner: int
    beliefs: dict[AttributeKind, list[AttributeValue]]
    freshness: list[int]

    @property
    def n(self) -> int:
        return len(self.freshness)

    def copy(self) -> "Worldview":
        return Worldview(
            owner=self.owner,
            beliefs={k: list(v) for k, v in self.beliefs.items()},
            freshness=list(self.freshness),
        )


@dataclass(frozen=True)
class AttributeMatrix:
    """entries[i][j] is agent i's belief about agent j; the diagonal is ego."""
    kind: AttributeKind
    entries: tuple[tuple[AttributeValue, ...], ...]

    @property
    def n(self) -> int:
        return len(self.entries)


def attribute_matrix(worldviews: list[Worldview], kind: AttributeKind) -> AttributeMatrix:
    rows = tuple(tuple(wv.beliefs[kind]) for wv in worldviews)
    return AttributeMatrix(kind=kind, entries=rows)


class DiffState(Enum):
    EGO = 1
    AGREE = 2
    DISAGREE = 3


@dataclass(frozen=True)
class DiffCell:
    state: DiffState
    presumed: Optional[AttributeValue] = None  # set only for DISAGREE


@dataclass(frozen=True)
class DifferenceMatrix:
    kind: AttributeKind
    cells: tuple[tuple[DiffCell, ...], ...]

    @property
    def n(self) -> int:
        return len(self.cells)

    def disagreements(self) -> frozenset[tuple[int, int]]:
        return frozenset(
            (i, j)
            for i, row in enumerate(self.cells)
            for j, cell in enumerate(row)
            if cell.state is DiffState.DISAGREE
        )


def build_difference_matrix(matrix: AttributeMatrix) -> DifferenceMatrix:
    """Classify every entry against its column's ego value."""
    n = matrix.n
    cells = []
    for i in range(n):
        row = []
        for j in range(n):
            if i == j:
                row.append(DiffCell(DiffState.EGO))
                continue
            delta = diff_entry(matrix.entries[j][j], matrix.entries[i][j], matrix.kind)
            if delta is None:
                row.append(DiffCell(DiffState.AGREE))
            else:
                row.append(DiffCell(DiffState.DISAGREE, presumed=delta))
        cells.append(tuple(row))
    return DifferenceMatrix(kind=matrix.kind, cells=tuple(cells))


@dataclass(frozen=True)
class ColumnSummary:
    column: int
    similarity_sum: int
    difference_sum: int


def column_summary(diff: DifferenceMatrix, column: int) -> ColumnSummary:
    sim = sum(1 for i in range(diff.n) if diff.cells[i][column].state is DiffState.AGREE)
    dif = sum(1 for i in range(diff.n) if diff.cells[i][column].state is DiffState.DISAGREE)
    return ColumnSummary(column=column, similarity_sum=sim, difference_sum=dif)


@dataclass(frozen=True)
class SyncReport:
    in_sync: bool
    per_attribute: dict[AttributeKind, frozenset[tuple[int, int]]]
    contrarian_sets: dict[AttributeKind, tuple[frozenset[int], ...]]


def _contrarian_partition(diff: DifferenceMatrix) -> tuple[frozenset[int], ...]:
    """Group agents by their full column-agreement signature.

    A network bipartition shows up as exactly two groups that are
    complements of each other.  A fully synchronized matrix yields no
    partition at all.
    """
    if not diff.disagreements():
        return ()
    n = diff.n
    groups: dict[tuple[bool, ...], set[int]] = {}
    for i in range(n):
        signature = tuple(diff.cells[i][j].state is not DiffState.DISAGREE for j in range(n))
        groups.setdefault(signature, set()).add(i)
    return tuple(
        frozenset(members) for members in sorted(groups.values(), key=min)
    )


def detect_desync(matrices: dict[AttributeKind, DifferenceMatrix]) -> SyncReport:
    """Warn when any monitored attribute has a disagreeing cell."""
    for kind in MONITORED_KINDS:
        if kind not in matrices:
            raise ConfigurationError(f"missing monitored attribute: {kind.value}")
    per_attribute = {kind: matrices[kind].disagreements() for kind in MONITORED_KINDS}
    contrarians = {kind: _contrarian_partition(matrices[kind]) for kind in MONITORED_KINDS}
    in_sync = all(not cells for cells in per_attribute.values())
    return SyncReport(in_sync=in_sync, per_attribute=per_attribute, contrarian_sets=contrarians)


# --------------------------------------------------------------------------
# Serialization helpers (shared by the run log and the worldview digest)
# --------------------------------------------------------------------------

def value_to_jsonable(value: AttributeValue):
    if isinstance(value, Location):
        return {"t": "loc", "x": value.x, "y": value.y}
    if isinstance(value, ScienceZoneFlag):
        return {"t": "sz", "flag": value.flag}
    if isinstance(value, Battery):
        return {"t": "bt", "level": value.level}
    if isinstance(value, Cpu):
        return {"t": "cpu", "level": value.level}
    if isinstance(value, ActionLog):
        return {"t": "act", "events": list(value.events)}
    if isinstance(value, CommRow):
        return {"t": "cn", "bw": list(value.bandwidths), "self": value.self_index}
    raise TypeError(f"not an attribute value: {value!r}")


def value_from_jsonable(obj) -> AttributeValue:
    tag = obj["t"]
    if tag == "loc":
        return Location(obj["x"], obj["y"])
    if tag == "sz":
        return ScienceZoneFlag(obj["flag"])
    if tag == "bt":
        return Battery(obj["level"])
    if tag == "cpu":
        return Cpu(obj["level"])
    if tag == "act":
        return ActionLog(tuple(obj["events"]))
    if tag == "cn":
        return CommRow(tuple(obj["bw"]), obj["self"])
    raise ValueError(f"unknown attribute value tag: {tag!r}")


def worldview_digest(wv: Worldview) -> str:
    """Stable digest of the beliefs that feed scheduling decisions.

    Freshness ticks are excluded: a worldview whose *values* did not
    change should not trigger a reschedule.
    """
    payload = {
        kind.value: [value_to_jsonable(v) for v in wv.beliefs[kind]]
        for kind in MONITORED_KINDS
    }
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()
