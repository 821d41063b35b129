"""Operator command line: ingest road data, run scenario analyses, serve HTTP.

Exit codes: 0 success, 1 input/config error, 2 domain infeasibility.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import __version__
from .config import ServiceConfig, load_config
from .geo import ValidationError
from .network import DEFAULT_SNAP_TOLERANCE_M, ParseError, build_graph, load_geojson
from .reports import catalog_from_rows
from .routing import (
    VehicleProfile,
    alternative_routes,
    compare_scenarios,
    fmt2,
    shortest_path,
    simulate_naive_drive,
)
from .store import Store, StoreLoadError

EXIT_INPUT_ERROR = 1
EXIT_INFEASIBLE = 2


@click.group()
@click.version_option(version=__version__, prog_name="frmp")
def main() -> None:
    """Forest road management platform."""


def _open_store(path: str) -> Store:
    try:
        return Store.open(path)
    except StoreLoadError as exc:
        raise click.ClickException(str(exc)) from exc


@main.command()
@click.argument("geojson", type=click.Path(exists=True, dir_okay=False))
@click.option("--store", "store_path", required=True, type=click.Path(dir_okay=False))
@click.option("--snap-tolerance", default=DEFAULT_SNAP_TOLERANCE_M, show_default=True, type=float)
def ingest(geojson: str, store_path: str, snap_tolerance: float) -> None:
    """Parse a GeoJSON road file, validate it, and commit it to the store."""
    try:
        raw = Path(geojson).read_bytes()
        segments = load_geojson(raw)
    except (OSError, ParseError, ValidationError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_INPUT_ERROR)

    store = _open_store(store_path)

    def mutate(draft):
        for seg in segments:
            draft.segments[seg.id] = seg

    try:
        store.commit(mutate)
    except Exception as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_INPUT_ERROR)

    all_segments = list(store.snapshot.segments.values())
    graph = build_graph(all_segments, snap_tolerance)
    total_km = sum(s.length_m for s in all_segments) / 1000.0
    click.echo(
        f"{len(all_segments)} segments, {len(graph.junctions)} junctions, "
        f"{total_km:.3f} km total"
    )


def _human_tables(comparison) -> str:
    lines = []
    lines.append("Scenario parameters")
    lines.append(f"{'Scenario':<22}{'d (km)':>10}{'t (min)':>10}")
    rows = [("A (shortest path)", comparison.baseline.distance_m, comparison.baseline.time_min)]
    if comparison.naive is not None:
        rows.append(("B (naive drive)", comparison.naive.total_distance_m, comparison.naive.total_time_min))
    for i, plan in enumerate(comparison.alternatives):
        rows.append((f"{chr(ord('C') + i)} (alternative {i + 1})", plan.distance_m, plan.time_min))
    for name, dist, minutes in rows:
        lines.append(f"{name:<22}{dist / 1000.0:>10.3f}{fmt2(minutes):>10}")
    if comparison.pct_change_d:
        lines.append("")
        lines.append("Change vs scenario A (%)")
        lines.append(f"{'Scenario':<22}{'d %':>10}{'t %':>10}")
        for label in comparison.pct_change_d:
            lines.append(
                f"{label:<22}{fmt2(comparison.pct_change_d[label]):>10}"
                f"{fmt2(comparison.pct_change_t[label]):>10}"
            )
    if comparison.time_improvement_vs_naive:
        lines.append("")
        lines.append("Time improvement vs naive drive (relative to A)")
        for label, value in comparison.time_improvement_vs_naive.items():
            lines.append(f"{label:<22}{fmt2(value):>10}%")
    return "\n".join(lines)


@main.command()
@click.option("--store", "store_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--from", "origin", required=True, type=int, help="Origin junction id.")
@click.option("--to", "dest", required=True, type=int, help="Destination junction id.")
@click.option("--block", "block", multiple=True, type=int, help="Blocked segment id (repeatable).")
@click.option("--k", default=2, show_default=True, type=int, help="Alternative route count.")
@click.option("--speed", default=14.0, show_default=True, type=float, help="Speed in km/h.")
@click.option("--snap-tolerance", default=DEFAULT_SNAP_TOLERANCE_M, show_default=True, type=float)
@click.option("--json", "as_json", is_flag=True, help="Emit machine-readable JSON.")
@click.option(
    "--report-dir",
    type=click.Path(file_okay=False),
    default=None,
    help="Write CSV tables and figures into this directory.",
)
def scenario(
    store_path: str,
    origin: int,
    dest: int,
    block: tuple[int, ...],
    k: int,
    speed: float,
    snap_tolerance: float,
    as_json: bool,
    report_dir: str | None,
) -> None:
    """Compare the shortest route against naive and informed detours."""
    store = _open_store(store_path)
    segments = list(store.snapshot.segments.values())
    if not segments:
        click.echo("error: store has no road segments", err=True)
        sys.exit(EXIT_INPUT_ERROR)
    graph = build_graph(segments, snap_tolerance)
    for jid in (origin, dest):
        if jid not in graph.junctions:
            click.echo(f"error: unknown junction {jid}", err=True)
            sys.exit(EXIT_INPUT_ERROR)
    unknown_blocks = [sid for sid in block if sid not in graph.segments]
    if unknown_blocks:
        click.echo(f"error: unknown segment ids {unknown_blocks}", err=True)
        sys.exit(EXIT_INPUT_ERROR)

    try:
        profile = VehicleProfile(name="cli", speed_kmh=speed)
    except ValidationError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_INPUT_ERROR)

    blocked = frozenset(block)
    baseline = shortest_path(graph, origin, dest, profile=profile)
    if not baseline.feasible:
        click.echo("error: destination not reachable from origin", err=True)
        sys.exit(EXIT_INFEASIBLE)

    naive = None
    alternatives = []
    if blocked:
        naive = simulate_naive_drive(graph, origin, dest, blocked, profile=profile)
        if not naive.feasible:
            click.echo("error: no blockage-free route exists", err=True)
            sys.exit(EXIT_INFEASIBLE)
        alternatives = alternative_routes(graph, origin, dest, blocked, k=k, profile=profile)

    comparison = compare_scenarios(baseline, naive, alternatives)

    if report_dir is not None:
        from .figures import write_scenario_report

        written = write_scenario_report(
            Path(report_dir), graph, comparison, set(blocked), origin, dest
        )
        for path in written:
            click.echo(f"wrote {path}", err=True)

    if as_json:
        payload = comparison.to_dict()
        payload["blocked_segments"] = sorted(blocked)
        click.echo(json.dumps(payload, indent=1))
    else:
        click.echo(_human_tables(comparison))


@main.command()
@click.option("--store", "store_path", required=True, type=click.Path(dir_okay=False))
@click.option(
    "--config",
    "config_path",
    type=click.Path(exists=True, dir_okay=False),
    envvar="FRMP_CONFIG",
    default=None,
    help="Service config file (JSON); FRMP_CONFIG is the default source.",
)
@click.option("--host", default=None, help="Override the configured listen host.")
@click.option("--port", default=None, type=int, help="Override the configured listen port.")
def serve(store_path: str, config_path: str | None, host: str | None, port: int | None) -> None:
    """Run the HTTP service until interrupted."""
    import uvicorn

    from .api import configure_stdout_logging, create_app

    try:
        config = load_config(config_path) if config_path else ServiceConfig()
    except ValidationError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_INPUT_ERROR)
    config.store_path = store_path
    if host:
        config.host = host
    if port:
        config.port = port

    if not Path(store_path).exists():
        click.echo(f"warning: store {store_path} does not exist, starting empty", err=True)
    store = _open_store(store_path)

    if config.users:
        def seed_users(draft):
            for user in config.users:
                draft.users[user.id] = user

        store.commit(seed_users)
    if config.catalog_path:
        try:
            rows = json.loads(Path(config.catalog_path).read_text(encoding="utf-8"))
            catalog = catalog_from_rows(rows)
        except (OSError, json.JSONDecodeError, ValidationError, KeyError) as exc:
            click.echo(f"error: bad catalog file: {exc}", err=True)
            sys.exit(EXIT_INPUT_ERROR)

        def seed_catalog(draft):
            draft.catalog = catalog

        store.commit(seed_catalog)

    configure_stdout_logging()
    app = create_app(store, config)
    try:
        uvicorn.run(app, host=config.host, port=config.port, log_level="warning")
    except (OSError, SystemExit) as exc:
        if isinstance(exc, SystemExit) and not exc.code:
            return
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_INPUT_ERROR)


if __name__ == "__main__":
    main()
