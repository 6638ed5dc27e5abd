"""Canned desk-scale scenario configs: a healthy fleet, one isolated agent,
and a communication-network bipartition.

All three use ten agents (the last one is the base station, rendered ST)
on a 100 x 100 m map with four science zones, so rovers 1, 3, 5 and 6 are
science-eligible.  Layouts keep every pre-fault link above the propagation
threshold.
"""

from __future__ import annotations

from .simulation import (
    AllSync,
    Bipartition,
    IsolatedAgent,
    MapSpec,
    Perturbation,
    SimConfig,
    Zone,
    ZoneKind,
)


def _science_zone(cx: float, cy: float, half: float = 5.0) -> Zone:
    return Zone(ZoneKind.SCIENCE, cx - half, cy - half, cx + half, cy + half)


_CLUSTER_POSITIONS = (
    (20.0, 20.0),  # 0
    (45.0, 20.0),  # 1  science
    (70.0, 20.0),  # 2
    (20.0, 45.0),  # 3  science
    (45.0, 45.0),  # 4
    (70.0, 45.0),  # 5  science
    (20.0, 70.0),  # 6  science
    (45.0, 70.0),  # 7
    (70.0, 70.0),  # 8
    (45.0, 90.0),  # 9  base station
)

_CLUSTER_MAP = MapSpec(
    width=100.0,
    height=100.0,
    zones=(
        _science_zone(45.0, 20.0),
        _science_zone(20.0, 45.0),
        _science_zone(70.0, 45.0),
        _science_zone(20.0, 70.0),
    ),
)

# Bipartition layout: the cut group lives on the left, the rest on the right,
# so the injected cut-off strip between them explains the fault visually.
_SPLIT_POSITIONS = (
    (15.0, 20.0),  # 0  left
    (70.0, 20.0),  # 1  right, science
    (85.0, 20.0),  # 2  right
    (70.0, 45.0),  # 3  right, science
    (85.0, 45.0),  # 4  right
    (70.0, 70.0),  # 5  right, science
    (15.0, 45.0),  # 6  left, science
    (30.0, 45.0),  # 7  left
    (15.0, 70.0),  # 8  left
    (30.0, 70.0),  # 9  left, base station
)

_SPLIT_MAP = MapSpec(
    width=100.0,
    height=100.0,
    zones=(
        _science_zone(70.0, 20.0),
        _science_zone(70.0, 45.0),
        _science_zone(70.0, 70.0),
        _science_zone(15.0, 45.0),
    ),
)

BIPARTITION_CUT = frozenset({0, 6, 7, 8, 9})


def all_sync_config(horizon: int = 40, seed: int = 7) -> SimConfig:
    return SimConfig(
        n_agents=10,
        seed=seed,
        horizon=horizon,
        map=_CLUSTER_MAP,
        positions=_CLUSTER_POSITIONS,
        scenario=AllSync(),
    )


def isolated_config(horizon: int = 40, seed: int = 7) -> SimConfig:
    return SimConfig(
        n_agents=10,
        seed=seed,
        horizon=horizon,
        map=_CLUSTER_MAP,
        positions=_CLUSTER_POSITIONS,
        scenario=IsolatedAgent(target=3, at_tick=5),
        perturbations=(
            Perturbation(tick=7, agent=3, attribute="battery", value=60),
            # step just outside agent 3's science zone
            Perturbation(tick=8, agent=3, attribute="position", value=(32.0, 45.0)),
        ),
    )


def bipartition_config(horizon: int = 40, seed: int = 7) -> SimConfig:
    return SimConfig(
        n_agents=10,
        seed=seed,
        horizon=horizon,
        map=_SPLIT_MAP,
        positions=_SPLIT_POSITIONS,
        scenario=Bipartition(cut=BIPARTITION_CUT, at_tick=5),
        perturbations=(
            # battery drops visible only on each agent's own side of the cut
            Perturbation(tick=7, agent=1, attribute="battery", value=50),
            Perturbation(tick=7, agent=6, attribute="battery", value=50),
            # science-zone exits, one per side
            Perturbation(tick=8, agent=5, attribute="position", value=(82.0, 70.0)),
            Perturbation(tick=8, agent=6, attribute="position", value=(15.0, 57.0)),
        ),
    )


BUILTIN_SCENARIOS = {
    "allsync": all_sync_config,
    "isolated": isolated_config,
    "bipartition": bipartition_config,
}


def builtin_config(name: str, **kwargs) -> SimConfig:
    try:
        return BUILTIN_SCENARIOS[name](**kwargs)
    except KeyError:
        raise ValueError(
            f"unknown scenario {name!r}; choose from {sorted(BUILTIN_SCENARIOS)}"
        ) from None
