"""Render scenario reports: network maps and comparison charts plus CSV tables."""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .network import NetworkGraph
from .routing import DriveTrace, RoutePlan, ScenarioComparison, fmt2

ROUTE_COLORS = ["#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#8c564b", "#e377c2"]


def _plot_segments(ax, graph: NetworkGraph, blocked: set[int]) -> None:
    for seg in graph.segments.values():
        lons = [p.lon for p in seg.geometry]
        lats = [p.lat for p in seg.geometry]
        if seg.id in blocked:
            ax.plot(lons, lats, color="#aa2222", linestyle="--", linewidth=1.6, zorder=2)
        else:
            ax.plot(lons, lats, color="#888888", linewidth=1.0, zorder=1)


def _route_lonlat(graph: NetworkGraph, segment_ids, junction_ids):
    lons: list[float] = []
    lats: list[float] = []
    for sid, from_j in zip(segment_ids, junction_ids[:-1]):
        seg = graph.segments[sid]
        pts = list(seg.geometry)
        if graph.endpoint_of[(sid, "start")] != from_j:
            pts = pts[::-1]
        lons.extend(p.lon for p in pts)
        lats.extend(p.lat for p in pts)
    return lons, lats


def render_network_map(
    graph: NetworkGraph,
    blocked: set[int],
    routes: list[tuple[str, RoutePlan]],
    path: Path,
    origin: int | None = None,
    dest: int | None = None,
) -> None:
    """Draw the network with blocked segments dashed and routes overlaid."""
    fig, ax = plt.subplots(figsize=(8, 8))
    _plot_segments(ax, graph, blocked)
    for i, (label, plan) in enumerate(routes):
        if not plan.segment_ids:
            continue
        lons, lats = _route_lonlat(graph, plan.segment_ids, plan.junction_ids)
        ax.plot(
            lons,
            lats,
            color=ROUTE_COLORS[i % len(ROUTE_COLORS)],
            linewidth=2.4,
            alpha=0.85,
            zorder=3,
            label=f"{label} ({plan.distance_m / 1000.0:.3f} km)",
        )
    for jid, marker, text in ((origin, "o", "origin"), (dest, "s", "destination")):
        if jid is not None and jid in graph.junctions:
            p = graph.junctions[jid].position
            ax.plot([p.lon], [p.lat], marker=marker, color="black", markersize=9, zorder=4)
            ax.annotate(text, (p.lon, p.lat), textcoords="offset points", xytext=(6, 6))
    ax.set_xlabel("longitude")
    ax.set_ylabel("latitude")
    if graph.junctions:
        import math

        mean_lat = sum(j.position.lat for j in graph.junctions.values()) / len(graph.junctions)
        ax.set_aspect(1.0 / max(0.05, math.cos(math.radians(mean_lat))))
    if routes:
        ax.legend(loc="best", fontsize=9)
    ax.set_title("Road network and routes")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_comparison_chart(comparison: ScenarioComparison, path: Path) -> None:
    """Grouped bars of distance and time per scenario."""
    labels = ["A"]
    distances = [comparison.baseline.distance_m / 1000.0]
    times = [comparison.baseline.time_min]
    if comparison.naive is not None:
        labels.append("B")
        distances.append(comparison.naive.total_distance_m / 1000.0)
        times.append(comparison.naive.total_time_min)
    for i, plan in enumerate(comparison.alternatives):
        labels.append(chr(ord("C") + i))
        distances.append(plan.distance_m / 1000.0)
        times.append(plan.time_min)

    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 4))
    ax1.bar(labels, distances, color="#1f77b4")
    ax1.set_ylabel("distance (km)")
    ax1.set_title("Distance traveled per scenario")
    ax2.bar(labels, times, color="#ff7f0e")
    ax2.set_ylabel("time (min)")
    ax2.set_title("Travel time per scenario")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def write_scenario_report(
    out_dir: Path,
    graph: NetworkGraph,
    comparison: ScenarioComparison,
    blocked: set[int],
    origin: int,
    dest: int,
    naive_trace: DriveTrace | None = None,
) -> list[Path]:
    """Write the CSV tables and figures for one scenario analysis."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    params_path = out_dir / "scenario_parameters.csv"
    with open(params_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["scenario", "distance_km", "time_min"])
        writer.writerow(["A", f"{comparison.baseline.distance_m / 1000.0:.3f}", fmt2(comparison.baseline.time_min)])
        if comparison.naive is not None:
            writer.writerow(
                ["B", f"{comparison.naive.total_distance_m / 1000.0:.3f}", fmt2(comparison.naive.total_time_min)]
            )
        for i, plan in enumerate(comparison.alternatives):
            writer.writerow(
                [chr(ord("C") + i), f"{plan.distance_m / 1000.0:.3f}", fmt2(plan.time_min)]
            )
    written.append(params_path)

    changes_path = out_dir / "scenario_changes.csv"
    with open(changes_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["scenario", "pct_change_d", "pct_change_t", "time_improvement_vs_naive"])
        for label in comparison.pct_change_d:
            writer.writerow(
                [
                    label,
                    fmt2(comparison.pct_change_d[label]),
                    fmt2(comparison.pct_change_t[label]),
                    fmt2(comparison.time_improvement_vs_naive[label])
                    if label in comparison.time_improvement_vs_naive
                    else "",
                ]
            )
    written.append(changes_path)

    routes: list[tuple[str, RoutePlan]] = [("A", comparison.baseline)]
    for i, plan in enumerate(comparison.alternatives):
        routes.append((chr(ord("C") + i), plan))
    map_path = out_dir / "network_map.png"
    render_network_map(graph, blocked, routes, map_path, origin=origin, dest=dest)
    written.append(map_path)

    chart_path = out_dir / "scenario_comparison.png"
    render_comparison_chart(comparison, chart_path)
    written.append(chart_path)
    return written
