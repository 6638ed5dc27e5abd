"""HTTP API behavior over an in-memory run log."""

import pytest
from fastapi.testclient import TestClient

from fleetview.runlog import RunLog
from fleetview.server import create_app


@pytest.fixture(scope="module")
def allsync_client():
    from fleetview.scenarios import all_sync_config
    from fleetview.simulation import run_simulation

    config = all_sync_config()
    log = RunLog(config=config, snapshots=run_simulation(config))
    return TestClient(create_app(log))


@pytest.fixture(scope="module")
def bipartition_client():
    from fleetview.scenarios import bipartition_config
    from fleetview.simulation import run_simulation

    config = bipartition_config()
    log = RunLog(config=config, snapshots=run_simulation(config))
    return TestClient(create_app(log))


def test_meta_reports_tick_range_and_config(allsync_client):
    body = allsync_client.get("/api/meta").json()
    assert body["ticks"] == {"first": 0, "last": 39, "count": 40}
    assert body["config"]["n_agents"] == 10


def test_snapshot_contains_world_and_worldviews(allsync_client):
    body = allsync_client.get("/api/snapshot/0").json()
    assert body["tick"] == 0
    assert len(body["true_states"]) == 10
    assert len(body["worldviews"]) == 10
    assert body["true_states"][9]["base"] is True


def test_unknown_tick_is_404_with_error_shape(allsync_client):
    response = allsync_client.get("/api/snapshot/999999")
    assert response.status_code == 404
    body = response.json()
    assert body["code"] == "unknown_tick"
    assert "999999" in body["message"]


def test_diff_allsync_has_no_disagreements(allsync_client):
    body = allsync_client.get("/api/diff/battery/0").json()
    states = {cell["s"] for row in body["matrix"]["cells"] for cell in row}
    assert states == {1, 2}
    assert all(col["difference_sum"] == 0 for col in body["columns"])


def test_diff_bipartition_shows_divergence(bipartition_client):
    body = bipartition_client.get("/api/diff/comm/39").json()
    diverged = [c for c in body["columns"] if c["difference_sum"] > 0]
    assert diverged
    assert all(c["difference_sum"] == 5 for c in diverged)


def test_unknown_attribute_is_400(allsync_client):
    response = allsync_client.get("/api/diff/altitude/0")
    assert response.status_code == 400
    assert response.json()["code"] == "unknown_attribute"


def test_timeline_supports_tick_range_filter(allsync_client):
    everything = allsync_client.get("/api/timeline").json()["events"]
    window = allsync_client.get("/api/timeline?from=0&to=0").json()["events"]
    assert everything
    assert window
    assert len(window) < len(everything)
    assert all(e["start"] < 10.0 for e in window)


def test_summary_tracks_desync_over_time(bipartition_client):
    early = bipartition_client.get("/api/summary/0").json()
    late = bipartition_client.get("/api/summary/39").json()
    assert early["sync_warning"] is False
    assert late["sync_warning"] is True
    assert late["report"]["contrarian_sets"]["comm"] == [
        [0, 6, 7, 8, 9],
        [1, 2, 3, 4, 5],
    ]


def test_trace_includes_relocated_executions(bipartition_client):
    body = bipartition_client.get("/api/trace/6-sci").json()
    assert body["owner"] == 6 and body["chain"] == "sci"
    assert any(e["relocated"] for e in body["events"])


def test_trace_unknown_task_is_404(allsync_client):
    response = allsync_client.get("/api/trace/42-sci")
    assert response.status_code == 404
    assert response.json()["code"] == "unknown_task"
