"""Blockage-aware routing and scenario comparison over a network snapshot.

Everything here is a pure function of an immutable NetworkGraph: baseline
shortest paths, k shortest loopless alternatives, a simulation of a driver
who learns about blockages only on arrival, and the percentage comparison
between those scenarios.

Tie-breaking is deterministic throughout: among equal-length paths the one
whose segment-id sequence is lexicographically smallest wins ("prefer lower
next-segment id").
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

from .geo import ValidationError
from .network import NetworkGraph, NotFoundError


@dataclass(frozen=True)
class VehicleProfile:
    """Travel speed parameters for time estimates."""

    name: str = "standard"
    speed_kmh: float = 14.0
    payload_note: str = ""

    def __post_init__(self) -> None:
        if self.speed_kmh <= 0:
            raise ValidationError("speed_kmh must be > 0")


# Effective speed of a loaded timber truck on a low-class forest road;
# configurable per profile.
DEFAULT_PROFILE = VehicleProfile(name="standard", speed_kmh=14.0, payload_note="loaded timber truck")


def travel_time(distance_m: float, profile: VehicleProfile = DEFAULT_PROFILE) -> float:
    """Travel time in minutes at full precision."""
    if distance_m < 0:
        raise ValidationError("distance_m must be >= 0")
    return (distance_m / 1000.0) * 60.0 / profile.speed_kmh


def truncate2(value: float) -> float:
    """Truncate toward zero to 2 decimals (display convention; never rounds)."""
    return math.trunc(value * 100.0) / 100.0


def fmt2(value: float) -> str:
    return f"{truncate2(value):.2f}"


@dataclass(frozen=True)
class RoutePlan:
    """A computed route: ordered segments, the junction walk, distance, time."""

    segment_ids: tuple[int, ...]
    junction_ids: tuple[int, ...]
    distance_m: float
    time_min: float
    feasible: bool = True

    def to_dict(self) -> dict:
        return {
            "segment_ids": list(self.segment_ids),
            "junction_ids": list(self.junction_ids),
            "distance_m": self.distance_m,
            "time_min": self.time_min,
            "time_min_display": fmt2(self.time_min),
            "feasible": self.feasible,
        }


@dataclass(frozen=True)
class Leg:
    segment_id: int
    direction: str  # "forward" | "reverse" relative to segment geometry
    purpose: str  # "advance" | "backtrack" | "reroute"


@dataclass(frozen=True)
class DriveTrace:
    """The walk of a driver who discovers blockages only upon reaching them."""

    legs: tuple[Leg, ...]
    total_distance_m: float
    total_time_min: float
    encountered_blockages: tuple[int, ...]
    feasible: bool = True

    def to_dict(self) -> dict:
        return {
            "legs": [
                {"segment_id": leg.segment_id, "direction": leg.direction, "purpose": leg.purpose}
                for leg in self.legs
            ],
            "total_distance_m": self.total_distance_m,
            "total_time_min": self.total_time_min,
            "time_min_display": fmt2(self.total_time_min),
            "encountered_blockages": list(self.encountered_blockages),
            "feasible": self.feasible,
        }


def _infeasible_plan() -> RoutePlan:
    return RoutePlan(segment_ids=(), junction_ids=(), distance_m=0.0, time_min=0.0, feasible=False)


def _path_distance(graph: NetworkGraph, segment_ids: tuple[int, ...]) -> float:
    # Left-to-right accumulation keeps float sums identical for identical paths
    # regardless of how the path was assembled.
    total = 0.0
    for sid in segment_ids:
        total += graph.segments[sid].length_m
    return total


def _check_junctions(graph: NetworkGraph, *junction_ids: int) -> None:
    for jid in junction_ids:
        if jid not in graph.junctions:
            raise NotFoundError(f"unknown junction {jid}")


def _dijkstra(
    graph: NetworkGraph,
    origin: int,
    dest: int,
    banned_segments: frozenset[int],
    banned_junctions: frozenset[int] = frozenset(),
) -> tuple[float, tuple[int, ...], tuple[int, ...]] | None:
    """Minimum-(distance, segment-id sequence) simple path, or None.

    Heap entries carry the full segment-id sequence so equal-distance paths
    settle in lexicographic order; with strictly positive weights the first
    pop per junction is optimal under that order.
    """
    if origin in banned_junctions or dest in banned_junctions:
        return None
    heap: list = [(0.0, (), origin, (origin,))]
    settled: set[int] = set()
    while heap:
        dist, seq, node, walk = heapq.heappop(heap)
        if node in settled:
            continue
        settled.add(node)
        if node == dest:
            return dist, seq, walk
        for nbr, sid, w in graph.neighbors(node):
            if sid in banned_segments or nbr in settled or nbr in banned_junctions:
                continue
            heapq.heappush(heap, (dist + w, seq + (sid,), nbr, walk + (nbr,)))
    return None


def shortest_path(
    graph: NetworkGraph,
    origin: int,
    dest: int,
    blocked: frozenset[int] | set[int] = frozenset(),
    profile: VehicleProfile = DEFAULT_PROFILE,
) -> RoutePlan:
    """Minimum-total-length route avoiding blocked segments.

    Returns an infeasible plan with an empty path when the destination is
    unreachable.
    """
    _check_junctions(graph, origin, dest)
    hit = _dijkstra(graph, origin, dest, frozenset(blocked))
    if hit is None:
        return _infeasible_plan()
    dist, seq, walk = hit
    return RoutePlan(
        segment_ids=seq,
        junction_ids=walk,
        distance_m=dist,
        time_min=travel_time(dist, profile),
        feasible=True,
    )


def alternative_routes(
    graph: NetworkGraph,
    origin: int,
    dest: int,
    blocked: frozenset[int] | set[int] = frozenset(),
    k: int = 1,
    profile: VehicleProfile = DEFAULT_PROFILE,
) -> list[RoutePlan]:
    """The k shortest loopless routes avoiding blocked segments (Yen).

    Ascending by (distance, segment-id sequence); fewer than k are returned
    when the graph does not contain that many simple paths.
    """
    if k < 1:
        raise ValidationError("k must be >= 1")
    _check_junctions(graph, origin, dest)
    blocked = frozenset(blocked)

    first = _dijkstra(graph, origin, dest, blocked)
    if first is None:
        return []
    accepted: list[tuple[float, tuple[int, ...], tuple[int, ...]]] = [first]
    candidates: list[tuple[float, tuple[int, ...], tuple[int, ...]]] = []
    candidate_seqs: set[tuple[int, ...]] = set()
    accepted_seqs = {first[1]}

    while len(accepted) < k:
        _, prev_seq, prev_walk = accepted[-1]
        for i in range(len(prev_seq)):
            spur_node = prev_walk[i]
            root_seq = prev_seq[:i]
            root_walk = prev_walk[: i + 1]
            banned = set(blocked)
            for _, seq, _ in accepted:
                if seq[:i] == root_seq and len(seq) > i:
                    banned.add(seq[i])
            spur = _dijkstra(
                graph, spur_node, dest, frozenset(banned), frozenset(root_walk[:-1])
            )
            if spur is None:
                continue
            _, spur_seq, spur_walk = spur
            total_seq = root_seq + spur_seq
            if total_seq in accepted_seqs or total_seq in candidate_seqs:
                continue
            total_walk = root_walk + spur_walk[1:]
            heapq.heappush(
                candidates, (_path_distance(graph, total_seq), total_seq, total_walk)
            )
            candidate_seqs.add(total_seq)
        if not candidates:
            break
        best = heapq.heappop(candidates)
        candidate_seqs.discard(best[1])
        accepted.append(best)
        accepted_seqs.add(best[1])

    return [
        RoutePlan(
            segment_ids=seq,
            junction_ids=walk,
            distance_m=dist,
            time_min=travel_time(dist, profile),
            feasible=True,
        )
        for dist, seq, walk in accepted
    ]


def _leg_direction(graph: NetworkGraph, segment_id: int, from_junction: int) -> str:
    start = graph.endpoint_of[(segment_id, "start")]
    return "forward" if start == from_junction else "reverse"


def simulate_naive_drive(
    graph: NetworkGraph,
    origin: int,
    dest: int,
    blockages: frozenset[int] | set[int] = frozenset(),
    profile: VehicleProfile = DEFAULT_PROFILE,
) -> DriveTrace:
    """Trace a driver who plans without blockage knowledge.

    The driver follows the unaware optimum; upon reaching a junction whose
    next planned segment turns out blocked, the segment joins the driver's
    knowledge and the driver backtracks along the driven path, stopping at
    the first junction offering a feasible route whose first segment leaves
    the driven-plus-planned corridor (falling back to the origin if none
    does). The recovery route is then driven the same way, so newly met
    blockages repeat the cycle.
    """
    _check_junctions(graph, origin, dest)
    blockages = frozenset(blockages)

    initial = shortest_path(graph, origin, dest)
    if not initial.feasible:
        return DriveTrace((), 0.0, 0.0, (), feasible=False)

    known: set[int] = set()
    encountered: list[int] = []
    legs: list[Leg] = []
    distance = 0.0
    feasible = True

    # Driven position as a simple path from the origin: advancing pushes,
    # backtracking pops.
    stack: list[int] = [origin]
    stack_segs: list[int] = []
    queue = list(zip(initial.segment_ids, initial.junction_ids[1:]))
    purpose = "advance"

    while queue:
        sid, nxt = queue[0]
        here = stack[-1]
        if sid in blockages:
            known.add(sid)
            encountered.append(sid)
            corridor = set(stack_segs) | {s for s, _ in queue}
            found: tuple[int, RoutePlan] | None = None
            for idx in range(len(stack) - 1, -1, -1):
                sp = shortest_path(graph, stack[idx], dest, blocked=frozenset(known))
                if not sp.feasible:
                    continue
                if idx == 0 or sp.segment_ids[0] not in corridor:
                    found = (idx, sp)
                    break
            if found is None:
                feasible = False
                break
            target_idx, recovery = found
            while len(stack) - 1 > target_idx:
                seg = stack_segs.pop()
                top = stack.pop()
                legs.append(Leg(seg, _leg_direction(graph, seg, top), "backtrack"))
                distance += graph.segments[seg].length_m
            queue = list(zip(recovery.segment_ids, recovery.junction_ids[1:]))
            purpose = "reroute"
            continue
        legs.append(Leg(sid, _leg_direction(graph, sid, here), purpose))
        distance += graph.segments[sid].length_m
        stack.append(nxt)
        stack_segs.append(sid)
        queue.pop(0)

    return DriveTrace(
        legs=tuple(legs),
        total_distance_m=distance,
        total_time_min=travel_time(distance, profile),
        encountered_blockages=tuple(encountered),
        feasible=feasible,
    )


ALTERNATIVE_LABELS = "CDEFGHIJKLMNOPQRSTUVWXYZ"


@dataclass(frozen=True)
class ScenarioComparison:
    """Baseline (A) against the naive trace (B) and informed alternatives (C...)."""

    baseline: RoutePlan
    naive: DriveTrace | None
    alternatives: tuple[RoutePlan, ...]
    pct_change_d: dict[str, float] = field(default_factory=dict)
    pct_change_t: dict[str, float] = field(default_factory=dict)
    time_improvement_vs_naive: dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> dict:
        payload = {
            "baseline": {"label": "A", **self.baseline.to_dict()},
            "naive": {"label": "B", **self.naive.to_dict()} if self.naive else None,
            "alternatives": [
                {"label": ALTERNATIVE_LABELS[i], **plan.to_dict()}
                for i, plan in enumerate(self.alternatives)
            ],
            "pct_change_d": dict(self.pct_change_d),
            "pct_change_t": dict(self.pct_change_t),
            "time_improvement_vs_naive": dict(self.time_improvement_vs_naive),
            "display": {
                "pct_change_d": {k: fmt2(v) for k, v in self.pct_change_d.items()},
                "pct_change_t": {k: fmt2(v) for k, v in self.pct_change_t.items()},
                "time_improvement_vs_naive": {
                    k: fmt2(v) for k, v in self.time_improvement_vs_naive.items()
                },
            },
        }
        return payload


def compare_scenarios(
    baseline: RoutePlan,
    naive: DriveTrace | None,
    alternatives: list[RoutePlan],
) -> ScenarioComparison:
    """Percentage changes of each scenario against the baseline.

    All figures are kept at full precision; display layers truncate to two
    decimals. A zero-length baseline is only comparable against zero-length
    scenarios (everything 0%).
    """
    if not baseline.feasible:
        raise ValidationError("baseline route is infeasible")

    scenarios: list[tuple[str, float, float]] = []
    if naive is not None:
        scenarios.append(("B", naive.total_distance_m, naive.total_time_min))
    for i, plan in enumerate(alternatives):
        scenarios.append((ALTERNATIVE_LABELS[i], plan.distance_m, plan.time_min))

    d_a, t_a = baseline.distance_m, baseline.time_min
    pct_d: dict[str, float] = {}
    pct_t: dict[str, float] = {}
    if d_a == 0:
        if any(d != 0 for _, d, _ in scenarios):
            raise ValidationError("zero-length baseline cannot be compared to non-zero scenarios")
        pct_d = {label: 0.0 for label, _, _ in scenarios}
        pct_t = {label: 0.0 for label, _, _ in scenarios}
    else:
        for label, d, t in scenarios:
            pct_d[label] = 100.0 * (d - d_a) / d_a
            pct_t[label] = 100.0 * (t - t_a) / t_a

    improvement: dict[str, float] = {}
    if naive is not None and t_a > 0:
        for i, plan in enumerate(alternatives):
            label = ALTERNATIVE_LABELS[i]
            improvement[label] = 100.0 * (naive.total_time_min - plan.time_min) / t_a

    return ScenarioComparison(
        baseline=baseline,
        naive=naive,
        alternatives=tuple(alternatives),
        pct_change_d=pct_d,
        pct_change_t=pct_t,
        time_improvement_vs_naive=improvement,
    )
