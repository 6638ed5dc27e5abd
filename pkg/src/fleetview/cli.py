"""Command-line entry points over scenario configs and run logs.

Exit codes: 0 success, 2 desync found (detect), 64 usage error,
66 missing input file.
"""

from __future__ import annotations

import os
import sys

import click
import yaml

from .analytics import NotFoundError, chain_trace
from .runlog import LogParseError, RunLog, read_run_log, simulate_to_log
from .scenarios import BUILTIN_SCENARIOS, builtin_config
from .simulation import config_from_jsonable
from .worldview import (
    ActionLog,
    AttributeKind,
    Battery,
    CommRow,
    DiffState,
    Location,
    ScienceZoneFlag,
    column_summary,
)

EX_USAGE = 64
EX_NOINPUT = 66
EX_DESYNC = 2

ATTRIBUTE_NAMES = {
    "battery": AttributeKind.BATTERY_LEVEL,
    "sciencezone": AttributeKind.SCIENCE_ZONE,
    "comm": AttributeKind.COMMUNICATION,
}


def _load_log(path: str) -> RunLog:
    return read_run_log(path)


def _agent_label(index: int, log: RunLog) -> str:
    base = log.config.base_index
    if base is None:
        base = log.config.n_agents - 1
    return "ST" if index == base else str(index)


def _value_text(value) -> str:
    if isinstance(value, Battery):
        return str(value.level)
    if isinstance(value, ScienceZoneFlag):
        return "T" if value.flag else "F"
    if isinstance(value, CommRow):
        return ",".join(
            "-" if k == value.self_index else str(b) for k, b in enumerate(value.bandwidths)
        )
    if isinstance(value, Location):
        return f"({value.x:.1f},{value.y:.1f})"
    if isinstance(value, ActionLog):
        return f"{len(value.events)} events"
    return str(value.level)


@click.group()
def cli():
    """Fleet simulator, worldview diff, and snapshot service."""


@cli.command()
@click.option("--config", "config_path", type=str, default=None, help="YAML scenario config.")
@click.option(
    "--scenario",
    type=click.Choice(sorted(BUILTIN_SCENARIOS)),
    default=None,
    help="Built-in scenario instead of a config file.",
)
@click.option("--out", "out_path", type=str, required=True, help="Output run log (.jsonl).")
def simulate(config_path, scenario, out_path):
    """Run a scenario and write its snapshot log."""
    if (config_path is None) == (scenario is None):
        raise click.UsageError("provide exactly one of --config or --scenario")
    if config_path is not None:
        with open(config_path, "r", encoding="utf-8") as fh:
            config = config_from_jsonable(yaml.safe_load(fh))
    else:
        config = builtin_config(scenario)
    snapshots = simulate_to_log(config, out_path)
    click.echo(f"wrote {len(snapshots)} snapshots to {out_path}")


@cli.command("diff")
@click.option("--log", "log_path", type=str, required=True)
@click.option("--tick", type=int, required=True)
@click.option("--attribute", type=click.Choice(sorted(ATTRIBUTE_NAMES)), required=True)
def diff_cmd(log_path, tick, attribute):
    """Print the Difference Matrix and column summaries at one tick."""
    log = _load_log(log_path)
    if not 0 <= tick < len(log.snapshots):
        raise click.ClickException(f"tick {tick} outside run range 0..{len(log.snapshots) - 1}")
    kind = ATTRIBUTE_NAMES[attribute]
    diff = log.snapshots[tick].diffs[kind]
    labels = [_agent_label(i, log) for i in range(diff.n)]
    cells = []
    for i in range(diff.n):
        row = []
        for j in range(diff.n):
            cell = diff.cells[i][j]
            if cell.state is DiffState.EGO:
                row.append("[ego]")
            elif cell.state is DiffState.AGREE:
                row.append(".")
            else:
                row.append(_value_text(cell.presumed))
        cells.append(row)
    width = max(3, max(len(c) for row in cells for c in row), max(len(l) for l in labels)) + 1
    click.echo(f"{attribute} difference matrix, tick {tick} (rows: believer, cols: subject)")
    click.echo(" " * 4 + "".join(l.rjust(width) for l in labels))
    for i, row in enumerate(cells):
        click.echo(labels[i].rjust(4) + "".join(c.rjust(width) for c in row))
    sims = [column_summary(diff, j) for j in range(diff.n)]
    click.echo(" sim".rjust(4) + "".join(str(s.similarity_sum).rjust(width) for s in sims))
    click.echo(" dif".rjust(4) + "".join(str(s.difference_sum).rjust(width) for s in sims))


@cli.command()
@click.option("--log", "log_path", type=str, required=True)
def detect(log_path):
    """Report the first desynchronized tick and the contrarian sets."""
    log = _load_log(log_path)
    for snap in log.snapshots:
        if snap.summary.sync_warning:
            click.echo(f"desync first detected at tick {snap.tick}")
            for kind, groups in snap.summary.report.contrarian_sets.items():
                if groups:
                    sets = " vs ".join(
                        "{" + ",".join(_agent_label(a, log) for a in sorted(g)) + "}"
                        for g in groups
                    )
                    click.echo(f"  {kind.value}: {sets}")
            sys.exit(EX_DESYNC)
    click.echo("in sync")


@cli.command()
@click.option("--log", "log_path", type=str, required=True)
@click.option("--task", "task_id", type=str, required=True, help='e.g. "5-sci" or "5-sci-2"')
def trace(log_path, task_id):
    """Print a chain trace: every execution of the owner's chain."""
    log = _load_log(log_path)
    if not log.snapshots:
        raise click.ClickException("log has no snapshots")
    last = log.snapshots[-1]
    try:
        result = chain_trace(task_id, list(last.events), log.config.n_agents)
    except (NotFoundError, ValueError) as exc:
        raise click.ClickException(str(exc))
    click.echo(f"chain {result.owner}-{result.kind.value}")
    if not result.events:
        click.echo("  (never started)")
    for e in result.events:
        mark = "*" if e.relocated else " "
        status = "" if e.completed else "  [not completed]"
        click.echo(
            f"  step {e.task.step}{mark} executor={_agent_label(e.executor, log)}"
            f" t={e.start:.1f}..{e.end:.1f}{status}"
        )


@cli.command()
@click.option("--log", "log_path", type=str, required=True)
def report(log_path):
    """Per-tick summary overview: science fractions and sync state."""
    log = _load_log(log_path)
    for snap in log.snapshots:
        fr = snap.summary.fractions
        fr_text = " ".join(f"{f:.2f}" for f in fr) if fr else "-"
        state = "DESYNC" if snap.summary.sync_warning else "ok"
        click.echo(f"tick {snap.tick:3d}  sci [{fr_text}]  sync {state}")


@cli.command()
@click.option("--log", "log_path", type=str, required=True)
@click.option("--port", type=int, default=None, help="Defaults to $FLEETVIEW_PORT or 8000.")
@click.option("--host", type=str, default="127.0.0.1")
def serve(log_path, port, host):
    """Serve the run log over the read-only HTTP API."""
    import uvicorn

    from .server import create_app

    log = _load_log(log_path)
    if port is None:
        port = int(os.environ.get("FLEETVIEW_PORT", "8000"))
    uvicorn.run(create_app(log), host=host, port=port)


def main(argv=None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.UsageError as exc:
        click.echo(f"error: {exc.format_message()}", err=True)
        if exc.ctx is not None:
            click.echo(exc.ctx.get_usage(), err=True)
        return EX_USAGE
    except click.ClickException as exc:
        exc.show()
        return 1
    except FileNotFoundError as exc:
        click.echo(f"error: file not found: {exc.filename or exc}", err=True)
        return EX_NOINPUT
    except LogParseError as exc:
        click.echo(f"error: {exc}", err=True)
        return 1
    except SystemExit as exc:
        return int(exc.code or 0)
    return 0


if __name__ == "__main__":
    sys.exit(main())
