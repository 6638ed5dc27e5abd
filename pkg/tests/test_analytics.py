"""Science fractions, quadrant classification, traces, and the summary strip."""

import pytest

from fleetview.analytics import (
    NotFoundError,
    QuadrantClass,
    chain_trace,
    quadrant,
    science_fractions,
    summary_overview,
    task_abstraction,
)
from fleetview.scheduling import ChainKind, TaskId, TimelineEvent


def event(label, executor=None, start=0.0, end=1.0, completed=True):
    owner, chain, step = label.split("-")
    task = TaskId(int(owner), ChainKind(chain), int(step))
    if executor is None:
        executor = task.owner
    return TimelineEvent(
        task=task,
        executor=executor,
        start=start,
        end=end,
        relocated=executor != task.owner,
        completed=completed,
    )


# -- science fractions -------------------------------------------------------

def test_fractions_two_two_one_over_four():
    eligible = frozenset({1, 3, 5, 6})
    events = [
        event("1-sci-1"), event("1-sci-2"), event("1-sci-3"),
        event("3-sci-1"), event("3-sci-2"),
        # an incomplete delivery does not count
        event("5-sci-3", completed=False),
    ]
    assert science_fractions(events, eligible) == [0.5, 0.5, 0.25]


def test_fractions_credit_owner_not_executor():
    eligible = frozenset({1, 2})
    events = [event("1-sci-1"), event("1-sci-2", executor=9)]
    assert science_fractions(events, eligible) == [0.5, 0.5, 0.0]


def test_fractions_none_when_no_eligible_agents():
    assert science_fractions([event("1-sci-1")], frozenset()) is None


def test_fractions_monotone_over_run(allsync_run):
    _, snaps = allsync_run
    previous = [0.0, 0.0, 0.0]
    for snap in snaps:
        fr = snap.summary.fractions
        if fr is None:
            continue
        for a, b in zip(previous, fr):
            assert b >= a
        previous = fr
    assert previous == [1.0, 1.0, 1.0]


# -- quadrants ---------------------------------------------------------------

def test_quadrant_corners_and_band():
    assert quadrant(10.0, 90.0) is QuadrantClass.LAZY
    assert quadrant(90.0, 20.0) is QuadrantClass.OVERWORKED
    assert quadrant(90.0, 90.0) is QuadrantClass.HIGH_POWER
    assert quadrant(10.0, 10.0) is QuadrantClass.DEPLETED
    assert quadrant(50.0, 50.0) is QuadrantClass.NEUTRAL
    assert quadrant(60.0, 45.0) is QuadrantClass.NEUTRAL  # inside the band
    assert quadrant(61.0, 45.0) is QuadrantClass.OVERWORKED  # just past the band edge


def test_quadrant_band_is_two_dimensional():
    # only one metric inside the band is not enough to be neutral
    assert quadrant(50.0, 90.0) is QuadrantClass.LAZY
    # exactly 50 counts as the low side
    assert quadrant(90.0, 50.0) is QuadrantClass.OVERWORKED


def test_quadrant_rejects_out_of_range():
    with pytest.raises(ValueError):
        quadrant(101.0, 50.0)
    with pytest.raises(ValueError):
        quadrant(50.0, -1.0)


def test_quadrant_band_rescaling_preserves_region_membership():
    for band in (5.0, 10.0, 14.9):
        assert quadrant(70.0, 80.0, band) is QuadrantClass.HIGH_POWER
        assert quadrant(30.0, 20.0, band) is QuadrantClass.DEPLETED


# -- traces ------------------------------------------------------------------

def test_chain_trace_accepts_chain_or_task_id():
    events = [
        event("5-sci-2", executor=9, start=10.0, end=13.0),
        event("5-sci-1", start=0.0, end=6.0),
        event("3-nav-1"),
    ]
    for query in ("5-sci", "5-sci-2"):
        trace = chain_trace(query, events, n_agents=10)
        assert trace.owner == 5 and trace.kind is ChainKind.SCI
        assert [e.task.step for e in trace.events] == [1, 2]
        assert trace.events[1].relocated


def test_chain_trace_is_time_and_step_ordered():
    events = [
        event("2-nav-2", start=8.0, end=12.0),
        event("2-nav-1", start=0.0, end=4.0),
        event("2-nav-2", executor=7, start=6.0, end=10.0),
    ]
    trace = chain_trace("2-nav", events, n_agents=10)
    keys = [(e.task.step, e.start) for e in trace.events]
    assert keys == sorted(keys)


def test_chain_trace_unknown_agent_raises():
    with pytest.raises(NotFoundError):
        chain_trace("42-sci", [], n_agents=10)


# -- task abstraction --------------------------------------------------------

def test_task_abstraction_skips_base_and_tracks_steps():
    events = [event("0-nav-1"), event("0-nav-2"), event("1-sci-1")]
    rows = task_abstraction(events, frozenset({1}), n_agents=4, base_index=3)
    assert [r.agent for r in rows] == [0, 1, 2]
    assert rows[0].nav_done == (True, True, False)
    assert rows[1].sci_done == (True, False, False)
    assert rows[1].eligible_for_sci and not rows[0].eligible_for_sci


def test_task_abstraction_respects_precedence_in_runs(allsync_run):
    _, snaps = allsync_run
    rows = task_abstraction(
        list(snaps[-1].events), snaps[-1].eligible, 10, base_index=9
    )
    for row in rows:
        for done in (row.nav_done, row.sci_done):
            # a completed later step implies the earlier ones completed
            assert list(done) == sorted(done, reverse=True)


# -- summary -----------------------------------------------------------------

def test_summary_overview_composes_warning_and_minis(bipartition_run):
    _, snaps = bipartition_run
    early, late = snaps[0].summary, snaps[-1].summary
    assert not early.sync_warning
    assert late.sync_warning
    for kind, cols in late.mini_dwc.items():
        matrix = snaps[-1].diffs[kind]
        for col in cols:
            assert col.similarity_sum + col.difference_sum == matrix.n - 1
