"""Problem-report lifecycle: creation, triage, assignment, resolution, costing.

Reports move Active -> Assigned -> Resolved (resolution may skip assignment);
no other transition exists. Non-resolved reports whose problem type is
traffic-blocking make their segment impassable for routing.
"""

from __future__ import annotations

import datetime as dt
import enum
from dataclasses import dataclass, replace
from typing import Callable, Iterable

from .geo import GeoPoint, ValidationError
from .network import NetworkGraph, NotFoundError
from .routing import shortest_path

Clock = Callable[[], dt.datetime]


def utc_now() -> dt.datetime:
    return dt.datetime.now(dt.timezone.utc)


class StateError(RuntimeError):
    """Raised on an illegal report state transition."""


class ReportStatus(str, enum.Enum):
    ACTIVE = "Active"
    ASSIGNED = "Assigned"
    RESOLVED = "Resolved"


ALLOWED_TRANSITIONS = {
    (ReportStatus.ACTIVE, ReportStatus.ASSIGNED),
    (ReportStatus.ACTIVE, ReportStatus.RESOLVED),
    (ReportStatus.ASSIGNED, ReportStatus.RESOLVED),
}


@dataclass(frozen=True)
class ProblemType:
    """Catalog row: problem class, whether it closes the road, repair pricing."""

    code: str
    blocks_traffic: bool
    base_cost: float
    rate_per_km: float

    def __post_init__(self) -> None:
        if self.base_cost < 0 or self.rate_per_km < 0:
            raise ValidationError(f"problem type {self.code}: negative cost parameters")


# Drainage and erosion issues impede maintenance but not passage, so they do
# not block. All of this is catalog-configurable.
DEFAULT_CATALOG: dict[str, ProblemType] = {
    t.code: t
    for t in (
        ProblemType("Landslide", True, 2000.0, 150.0),
        ProblemType("ClosedRoad", True, 800.0, 90.0),
        ProblemType("RockCollapse", True, 1500.0, 120.0),
        ProblemType("DitchBlocking", False, 400.0, 60.0),
        ProblemType("Erosion", False, 900.0, 80.0),
        ProblemType("Other", False, 300.0, 50.0),
    )
}


def catalog_from_rows(rows: Iterable[dict]) -> dict[str, ProblemType]:
    catalog: dict[str, ProblemType] = {}
    for row in rows:
        t = ProblemType(
            code=str(row["code"]),
            blocks_traffic=bool(row["blocks_traffic"]),
            base_cost=float(row["base_cost"]),
            rate_per_km=float(row["rate_per_km"]),
        )
        if t.code in catalog:
            raise ValidationError(f"duplicate problem type code {t.code!r}")
        catalog[t.code] = t
    return catalog


def catalog_to_rows(catalog: dict[str, ProblemType]) -> list[dict]:
    return [
        {
            "code": t.code,
            "blocks_traffic": t.blocks_traffic,
            "base_cost": t.base_cost,
            "rate_per_km": t.rate_per_km,
        }
        for t in catalog.values()
    ]


@dataclass(frozen=True)
class ProblemReport:
    """One reported road problem, keyed to a segment by its feature id."""

    id: int
    report_code: str
    report_comments: str
    segment_ref: int
    location: GeoPoint | None
    creation_date: dt.datetime
    last_update_date: dt.datetime
    report_status: ReportStatus
    reporter: str
    assignee: str | None = None

    def __post_init__(self) -> None:
        if self.last_update_date < self.creation_date:
            raise ValidationError(f"report {self.id}: last_update_date before creation_date")
        if self.report_status is ReportStatus.ASSIGNED and not self.assignee:
            raise ValidationError(f"report {self.id}: Assigned without assignee")

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "report_code": self.report_code,
            "report_comments": self.report_comments,
            "ogr_fid": self.segment_ref,
            "location": self.location.as_pair() if self.location else None,
            "creation_date": self.creation_date.isoformat(),
            "last_update_date": self.last_update_date.isoformat(),
            "report_status": self.report_status.value,
            "reporter": self.reporter,
            "assignee": self.assignee,
        }


@dataclass(frozen=True)
class RepairAssignment:
    id: int
    report_ids: frozenset[int]
    assignee: str
    estimated_cost: float
    created: dt.datetime

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "report_ids": sorted(self.report_ids),
            "assignee": self.assignee,
            "estimated_cost": self.estimated_cost,
            "created": self.created.isoformat(),
        }


@dataclass(frozen=True)
class CostEstimate:
    """Repair cost split into its base and distance terms.

    ``distance_km`` is None when the segment cannot be reached from the
    depot, in which case the total falls back to the base cost alone.
    """

    base_cost: float
    rate_per_km: float
    distance_km: float | None
    total: float

    @property
    def distance_available(self) -> bool:
        return self.distance_km is not None


def blocked_segments(
    reports: Iterable[ProblemReport], catalog: dict[str, ProblemType]
) -> set[int]:
    """Segment ids with at least one non-resolved traffic-blocking report."""
    blocked: set[int] = set()
    for report in reports:
        if report.report_status is ReportStatus.RESOLVED:
            continue
        ptype = catalog.get(report.report_code)
        if ptype is not None and ptype.blocks_traffic:
            blocked.add(report.segment_ref)
    return blocked


def estimate_repair_cost(
    report: ProblemReport,
    catalog: dict[str, ProblemType],
    depot: int,
    graph: NetworkGraph,
) -> CostEstimate:
    """Cost = base(type) + rate(type) * km from depot to the segment.

    The distance term uses the network shortest path from the depot junction
    to the nearer endpoint junction of the report's segment.
    """
    ptype = catalog.get(report.report_code)
    if ptype is None:
        raise ValidationError(f"unknown problem type {report.report_code!r}")
    start_j, end_j = graph.segment_junctions(report.segment_ref)
    distances = []
    for jid in {start_j, end_j}:
        plan = shortest_path(graph, depot, jid)
        if plan.feasible:
            distances.append(plan.distance_m)
    if not distances:
        return CostEstimate(ptype.base_cost, ptype.rate_per_km, None, ptype.base_cost)
    km = min(distances) / 1000.0
    return CostEstimate(
        ptype.base_cost, ptype.rate_per_km, km, ptype.base_cost + ptype.rate_per_km * km
    )


class ReportService:
    """Lifecycle operations over the store's committed state.

    Every mutation is one atomic store commit; timestamps come from the
    injected clock so tests stay deterministic.
    """

    def __init__(self, store, clock: Clock = utc_now):
        self._store = store
        self._clock = clock

    @property
    def catalog(self) -> dict[str, ProblemType]:
        return self._store.snapshot.catalog

    def get_report(self, report_id: int) -> ProblemReport:
        report = self._store.snapshot.reports.get(report_id)
        if report is None:
            raise NotFoundError(f"unknown report {report_id}")
        return report

    def create_report(
        self,
        code: str,
        comments: str,
        segment_ref: int,
        reporter: str,
        location: GeoPoint | None = None,
    ) -> ProblemReport:
        snap = self._store.snapshot
        if segment_ref not in snap.segments:
            raise NotFoundError(f"unknown segment {segment_ref}")
        if code not in snap.catalog:
            raise ValidationError(f"unknown problem type {code!r}")
        now = self._clock()
        report = ProblemReport(
            id=max(snap.reports, default=0) + 1,
            report_code=code,
            report_comments=comments,
            segment_ref=segment_ref,
            location=location,
            creation_date=now,
            last_update_date=now,
            report_status=ReportStatus.ACTIVE,
            reporter=reporter,
        )

        def mutate(draft):
            draft.reports[report.id] = report

        self._store.commit(mutate)
        return report

    def list_reports(
        self,
        status: ReportStatus | str | None = None,
        code: str | None = None,
        segment_ref: int | None = None,
    ) -> list[ProblemReport]:
        if isinstance(status, str):
            status = ReportStatus(status)
        out = [
            r
            for r in self._store.snapshot.reports.values()
            if (status is None or r.report_status is status)
            and (code is None or r.report_code == code)
            and (segment_ref is None or r.segment_ref == segment_ref)
        ]
        out.sort(key=lambda r: (r.creation_date, -r.id), reverse=True)
        return out

    def update_report(self, report_id: int, patch: dict) -> ProblemReport:
        unknown = set(patch) - {"report_comments", "report_code", "location"}
        if unknown:
            raise ValidationError(f"unknown report fields: {sorted(unknown)}")
        current = self.get_report(report_id)
        if current.report_status is ReportStatus.RESOLVED:
            raise StateError(f"report {report_id} is Resolved and cannot be edited")
        changes = dict(patch)
        if "report_code" in changes and changes["report_code"] not in self.catalog:
            raise ValidationError(f"unknown problem type {changes['report_code']!r}")
        if "location" in changes and changes["location"] is not None:
            loc = changes["location"]
            changes["location"] = loc if isinstance(loc, GeoPoint) else GeoPoint.from_pair(loc)
        updated = replace(current, last_update_date=self._clock(), **changes)

        def mutate(draft):
            draft.reports[report_id] = updated

        self._store.commit(mutate)
        return updated

    def assign_repairs(
        self,
        report_ids: Iterable[int],
        assignee: str,
        depot: int,
        graph: NetworkGraph,
    ) -> RepairAssignment:
        ids = frozenset(int(i) for i in report_ids)
        if not ids:
            raise ValidationError("assignment needs at least one report")
        snap = self._store.snapshot
        total = 0.0
        for rid in sorted(ids):
            report = snap.reports.get(rid)
            if report is None:
                raise NotFoundError(f"unknown report {rid}")
            if report.report_status is not ReportStatus.ACTIVE:
                raise StateError(f"report {rid} is {report.report_status.value}, not Active")
            total += estimate_repair_cost(report, snap.catalog, depot, graph).total
        now = self._clock()
        assignment = RepairAssignment(
            id=max(snap.assignments, default=0) + 1,
            report_ids=ids,
            assignee=assignee,
            estimated_cost=total,
            created=now,
        )

        def mutate(draft):
            for rid in ids:
                draft.reports[rid] = replace(
                    draft.reports[rid],
                    report_status=ReportStatus.ASSIGNED,
                    assignee=assignee,
                    last_update_date=now,
                )
            draft.assignments[assignment.id] = assignment

        self._store.commit(mutate)
        return assignment

    def resolve_reports(self, report_ids: Iterable[int]) -> int:
        ids = sorted(int(i) for i in report_ids)
        snap = self._store.snapshot
        to_resolve = []
        for rid in ids:
            report = snap.reports.get(rid)
            if report is None:
                raise NotFoundError(f"unknown report {rid}")
            if report.report_status is not ReportStatus.RESOLVED:
                to_resolve.append(rid)
        if not to_resolve:
            return 0
        now = self._clock()

        def mutate(draft):
            for rid in to_resolve:
                draft.reports[rid] = replace(
                    draft.reports[rid],
                    report_status=ReportStatus.RESOLVED,
                    last_update_date=now,
                )

        self._store.commit(mutate)
        return len(to_resolve)

    def delete_report(self, report_id: int) -> None:
        self.get_report(report_id)

        def mutate(draft):
            del draft.reports[report_id]
            for aid, assignment in list(draft.assignments.items()):
                if report_id in assignment.report_ids:
                    remaining = assignment.report_ids - {report_id}
                    if remaining:
                        draft.assignments[aid] = replace(assignment, report_ids=remaining)
                    else:
                        del draft.assignments[aid]

        self._store.commit(mutate)

    def blocked_segments(self) -> set[int]:
        snap = self._store.snapshot
        return blocked_segments(snap.reports.values(), snap.catalog)
