"""Shared fixtures (one full run per built-in scenario, computed once) and
the acceptance-criteria verdict block in the terminal summary."""

import sys

import pytest

from fleetview.scenarios import all_sync_config, bipartition_config, isolated_config
from fleetview.simulation import run_simulation


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    module = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    results = getattr(module, "RESULTS", None)
    if not results:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for name, ok in results:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}")


@pytest.fixture(scope="session")
def allsync_run():
    config = all_sync_config()
    return config, run_simulation(config)


@pytest.fixture(scope="session")
def isolated_run():
    config = isolated_config()
    return config, run_simulation(config)


@pytest.fixture(scope="session")
def bipartition_run():
    config = bipartition_config()
    return config, run_simulation(config)


@pytest.fixture(scope="session")
def bipartition_log_path(tmp_path_factory, bipartition_run):
    from fleetview.runlog import write_run_log

    config, snaps = bipartition_run
    path = tmp_path_factory.mktemp("logs") / "bipartition.jsonl"
    write_run_log(config, snaps, path)
    return path


@pytest.fixture(scope="session")
def allsync_log_path(tmp_path_factory, allsync_run):
    from fleetview.runlog import write_run_log

    config, snaps = allsync_run
    path = tmp_path_factory.mktemp("logs") / "allsync.jsonl"
    write_run_log(config, snaps, path)
    return path
