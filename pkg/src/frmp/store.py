"""Single-file persistence with atomic commits and restart recovery.

The whole platform state serializes to one JSON document; commits write a
temp file, fsync it, and atomically rename over the old snapshot, so a crash
at any point leaves either the previous or the new state on disk, never a
mixture. Readers always see the last committed snapshot (writes are
serialized, reads are lock-free against the swapped-in object).
"""

from __future__ import annotations

import copy
import datetime as dt
import json
import os
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from .geo import GeoPoint, ValidationError
from .network import NotFoundError, RoadSegment
from .reports import (
    DEFAULT_CATALOG,
    ProblemReport,
    ProblemType,
    RepairAssignment,
    ReportStatus,
    catalog_from_rows,
    catalog_to_rows,
)

SCHEMA_VERSION = 1

ROLES = ("CCO", "AM")


class StoreLoadError(RuntimeError):
    """Raised when the store file cannot be read back."""


class IntegrityError(ValueError):
    """Raised when a commit would break referential integrity."""


@dataclass(frozen=True)
class User:
    id: str
    display_name: str
    role: str

    def __post_init__(self) -> None:
        if self.role not in ROLES:
            raise ValidationError(f"user {self.id}: unknown role {self.role!r}")

    def to_dict(self) -> dict:
        return {"id": self.id, "display_name": self.display_name, "role": self.role}


DEFAULT_USERS = [
    User("cco1", "Call Center Operator", "CCO"),
    User("am1", "Application Manager", "AM"),
]


@dataclass
class Snapshot:
    """One committed state of the platform; treat as read-only once exposed."""

    segments: dict[int, RoadSegment] = field(default_factory=dict)
    reports: dict[int, ProblemReport] = field(default_factory=dict)
    assignments: dict[int, RepairAssignment] = field(default_factory=dict)
    users: dict[str, User] = field(default_factory=dict)
    catalog: dict[str, ProblemType] = field(default_factory=dict)


def _segment_to_record(seg: RoadSegment) -> dict:
    return {
        "id": seg.id,
        "geometry": [p.as_pair() for p in seg.geometry],
        "road_type": seg.road_type,
        "road_width": seg.road_width,
        "slope": seg.slope,
        "transverse_slope": seg.transverse_slope,
        "ditch": seg.ditch,
        "ditch_type": seg.ditch_type,
        "aspect": seg.aspect,
        "slope_height": seg.slope_height,
        "creation_date": seg.creation_date.isoformat() if seg.creation_date else None,
        "soil_category": seg.soil_category,
        "soil_profile": seg.soil_profile,
        "technical_works": seg.technical_works,
        "type_of_technical_work": seg.type_of_technical_work,
        "length_m": seg.length_m,
    }


def _segment_from_record(rec: dict) -> RoadSegment:
    return RoadSegment(
        id=int(rec["id"]),
        geometry=tuple(GeoPoint.from_pair(p) for p in rec["geometry"]),
        road_type=rec.get("road_type", "Unclassified"),
        road_width=float(rec.get("road_width", 0.0)),
        slope=float(rec.get("slope", 0.0)),
        transverse_slope=float(rec.get("transverse_slope", 0.0)),
        ditch=bool(rec.get("ditch", False)),
        ditch_type=rec.get("ditch_type", ""),
        aspect=float(rec.get("aspect", 0.0)),
        slope_height=float(rec.get("slope_height", 0.0)),
        creation_date=(
            dt.date.fromisoformat(rec["creation_date"]) if rec.get("creation_date") else None
        ),
        soil_category=rec.get("soil_category", ""),
        soil_profile=rec.get("soil_profile", ""),
        technical_works=bool(rec.get("technical_works", False)),
        type_of_technical_work=rec.get("type_of_technical_work", ""),
        length_m=float(rec.get("length_m", 0.0)),
    )


def _report_from_record(rec: dict) -> ProblemReport:
    return ProblemReport(
        id=int(rec["id"]),
        report_code=rec["report_code"],
        report_comments=rec.get("report_comments", ""),
        segment_ref=int(rec["ogr_fid"]),
        location=GeoPoint.from_pair(rec["location"]) if rec.get("location") else None,
        creation_date=dt.datetime.fromisoformat(rec["creation_date"]),
        last_update_date=dt.datetime.fromisoformat(rec["last_update_date"]),
        report_status=ReportStatus(rec["report_status"]),
        reporter=rec.get("reporter", ""),
        assignee=rec.get("assignee"),
    )


def _assignment_from_record(rec: dict) -> RepairAssignment:
    return RepairAssignment(
        id=int(rec["id"]),
        report_ids=frozenset(int(i) for i in rec["report_ids"]),
        assignee=rec["assignee"],
        estimated_cost=float(rec["estimated_cost"]),
        created=dt.datetime.fromisoformat(rec["created"]),
    )


def snapshot_to_document(snap: Snapshot, revision: int) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "revision": revision,
        "segments": [_segment_to_record(s) for _, s in sorted(snap.segments.items())],
        "reports": [r.to_dict() for _, r in sorted(snap.reports.items())],
        "assignments": [a.to_dict() for _, a in sorted(snap.assignments.items())],
        "users": [u.to_dict() for _, u in sorted(snap.users.items())],
        "catalog": catalog_to_rows(snap.catalog),
    }


def _snapshot_from_document(doc: dict) -> tuple[Snapshot, int]:
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise StoreLoadError(f"unrecognized schema_version {version!r}")
    snap = Snapshot()
    for kind, loader, target in (
        ("segments", _segment_from_record, snap.segments),
        ("reports", _report_from_record, snap.reports),
        ("assignments", _assignment_from_record, snap.assignments),
    ):
        for i, rec in enumerate(doc.get(kind, [])):
            try:
                obj = loader(rec)
            except Exception as exc:
                raise StoreLoadError(f"{kind} record {i}: {exc}") from exc
            target[obj.id] = obj
    for i, rec in enumerate(doc.get("users", [])):
        try:
            user = User(rec["id"], rec.get("display_name", rec["id"]), rec["role"])
        except Exception as exc:
            raise StoreLoadError(f"users record {i}: {exc}") from exc
        snap.users[user.id] = user
    try:
        snap.catalog = catalog_from_rows(doc.get("catalog", []))
    except Exception as exc:
        raise StoreLoadError(f"catalog: {exc}") from exc
    return snap, int(doc.get("revision", 0))


def validate_integrity(snap: Snapshot) -> None:
    for report in snap.reports.values():
        if report.segment_ref not in snap.segments:
            raise IntegrityError(
                f"report {report.id} references missing segment {report.segment_ref}"
            )
        if report.report_code not in snap.catalog:
            raise IntegrityError(
                f"report {report.id} references unknown problem type {report.report_code!r}"
            )
    for assignment in snap.assignments.values():
        for rid in assignment.report_ids:
            if rid not in snap.reports:
                raise IntegrityError(
                    f"assignment {assignment.id} references missing report {rid}"
                )


class FileIO:
    """Primitive filesystem steps of a commit, overridable for fault injection."""

    def __init__(self, chunk_size: int = 4096):
        self.chunk_size = chunk_size

    def open_temp(self, path: Path):
        return open(path, "wb")

    def write_chunk(self, handle, chunk: bytes) -> None:
        handle.write(chunk)

    def fsync_file(self, handle) -> None:
        handle.flush()
        os.fsync(handle.fileno())

    def close(self, handle) -> None:
        handle.close()

    def replace(self, tmp: Path, path: Path) -> None:
        os.replace(tmp, path)

    def fsync_dir(self, directory: Path) -> None:
        fd = os.open(directory, os.O_RDONLY)
        try:
            os.fsync(fd)
        finally:
            os.close(fd)

    def write_atomic(self, path: Path, data: bytes) -> None:
        tmp = path.with_name(path.name + ".tmp")
        handle = self.open_temp(tmp)
        try:
            for start in range(0, len(data), self.chunk_size):
                self.write_chunk(handle, data[start : start + self.chunk_size])
            self.fsync_file(handle)
        finally:
            self.close(handle)
        self.replace(tmp, path)
        self.fsync_dir(path.parent)


class Store:
    """Durable platform state with serialized writes and snapshot reads."""

    def __init__(self, path: str | Path, io: FileIO | None = None):
        self.path = Path(path)
        self._io = io or FileIO()
        self._lock = threading.Lock()
        if self.path.exists():
            try:
                raw = self.path.read_bytes()
                doc = json.loads(raw.decode("utf-8"))
            except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
                raise StoreLoadError(f"cannot read store file {self.path}: {exc}") from exc
            self._snapshot, self._revision = _snapshot_from_document(doc)
            validate_integrity(self._snapshot)
        else:
            self._snapshot = Snapshot(
                users={u.id: u for u in DEFAULT_USERS}, catalog=dict(DEFAULT_CATALOG)
            )
            self._revision = 0

    @classmethod
    def open(cls, path: str | Path) -> "Store":
        return cls(path)

    @property
    def snapshot(self) -> Snapshot:
        return self._snapshot

    @property
    def revision(self) -> int:
        return self._revision

    def commit(self, mutator: Callable[[Snapshot], None]) -> int:
        """Apply a mutation batch all-or-nothing; returns the revision id.

        A batch that leaves the state identical is a no-op and keeps the
        current revision.
        """
        with self._lock:
            draft = copy.deepcopy(self._snapshot)
            mutator(draft)
            validate_integrity(draft)
            if snapshot_to_document(draft, 0) == snapshot_to_document(self._snapshot, 0):
                return self._revision
            revision = self._revision + 1
            data = json.dumps(snapshot_to_document(draft, revision), indent=1).encode("utf-8")
            self.path.parent.mkdir(parents=True, exist_ok=True)
            self._io.write_atomic(self.path, data)
            self._snapshot = draft
            self._revision = revision
            return revision

    def query(self, kind: str, predicate: Callable | None = None) -> list:
        """Read-only scan over one entity kind of the committed state."""
        snap = self._snapshot
        collections = {
            "segments": snap.segments,
            "reports": snap.reports,
            "assignments": snap.assignments,
            "users": snap.users,
        }
        if kind not in collections:
            raise NotFoundError(f"unknown entity kind {kind!r}")
        values = list(collections[kind].values())
        if predicate is not None:
            values = [v for v in values if predicate(v)]
        return values
