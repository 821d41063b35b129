"""Road segments, GeoJSON ingest/export, and junction graph construction.

Segment endpoints are snapped into junctions by transitive proximity within a
configurable tolerance; nothing mid-segment is ever split.
"""

from __future__ import annotations

import datetime as dt
import math
from dataclasses import dataclass, field, replace

from .geo import GeoPoint, ValidationError, haversine_m, polyline_length_m

DEFAULT_SNAP_TOLERANCE_M = 1.0

# MultiLineString parts are assigned id*K + part_index so derived ids stay
# deterministic and collisions with plain feature ids are detectable.
MULTILINESTRING_ID_FACTOR = 100000

# Attribute defaults used when ingest meets sparse data: booleans false,
# numerics zero, text empty, road_type "Unclassified".
ATTRIBUTE_DEFAULTS = {
    "road_type": "Unclassified",
    "road_width": 0.0,
    "slope": 0.0,
    "transverse_slope": 0.0,
    "ditch": False,
    "ditch_type": "",
    "aspect": 0.0,
    "slope_height": 0.0,
    "creation_date": None,
    "soil_category": "",
    "soil_profile": "",
    "technical_works": False,
    "type_of_technical_work": "",
}


class ParseError(ValueError):
    """Raised on malformed GeoJSON input; carries the offending feature index."""

    def __init__(self, message: str, feature_index: int | None = None):
        self.feature_index = feature_index
        if feature_index is not None:
            message = f"feature {feature_index}: {message}"
        super().__init__(message)


class NotFoundError(KeyError):
    """Raised when an entity id does not exist."""


@dataclass(frozen=True)
class RoadSegment:
    """One forest-road edge with the attribute set of the details screen."""

    id: int
    geometry: tuple[GeoPoint, ...]
    road_type: str = "Unclassified"
    road_width: float = 0.0
    slope: float = 0.0
    transverse_slope: float = 0.0
    ditch: bool = False
    ditch_type: str = ""
    aspect: float = 0.0
    slope_height: float = 0.0
    creation_date: dt.date | None = None
    soil_category: str = ""
    soil_profile: str = ""
    technical_works: bool = False
    type_of_technical_work: str = ""
    length_m: float = field(default=0.0)

    def __post_init__(self) -> None:
        if len(self.geometry) < 2:
            raise ValidationError(f"segment {self.id}: geometry needs >=2 points")
        if self.road_width < 0:
            raise ValidationError(f"segment {self.id}: road_width must be > 0")
        if self.slope_height < 0:
            raise ValidationError(f"segment {self.id}: slope_height must be >= 0")
        computed = polyline_length_m(list(self.geometry))
        if self.length_m == 0.0:
            object.__setattr__(self, "length_m", computed)
        elif not math.isclose(self.length_m, computed, rel_tol=1e-6):
            raise ValidationError(
                f"segment {self.id}: length_m {self.length_m} does not match geometry ({computed})"
            )
        if self.length_m <= 0:
            raise ValidationError(f"segment {self.id}: zero-length geometry")

    @property
    def start(self) -> GeoPoint:
        return self.geometry[0]

    @property
    def end(self) -> GeoPoint:
        return self.geometry[-1]


PATCHABLE_FIELDS = (
    "road_type",
    "road_width",
    "slope",
    "transverse_slope",
    "ditch",
    "ditch_type",
    "aspect",
    "slope_height",
    "creation_date",
    "soil_category",
    "soil_profile",
    "technical_works",
    "type_of_technical_work",
    "geometry",
)


def apply_segment_patch(segment: RoadSegment, patch: dict) -> RoadSegment:
    """Return a copy of ``segment`` with patched attribute values.

    Geometry edits recompute length_m; invariants are re-validated. The caller
    is responsible for rebuilding the graph before routing over the change.
    """
    unknown = set(patch) - set(PATCHABLE_FIELDS)
    if unknown:
        raise ValidationError(f"unknown segment fields: {sorted(unknown)}")
    changes = dict(patch)
    if "geometry" in changes:
        pts = tuple(
            p if isinstance(p, GeoPoint) else GeoPoint.from_pair(p) for p in changes["geometry"]
        )
        if len(pts) < 2:
            raise ValidationError(f"segment {segment.id}: geometry needs >=2 points")
        changes["geometry"] = pts
        changes["length_m"] = 0.0  # force recompute in __post_init__
    if "creation_date" in changes and isinstance(changes["creation_date"], str):
        changes["creation_date"] = dt.date.fromisoformat(changes["creation_date"])
    if "road_width" in changes and not (float(changes["road_width"]) > 0):
        raise ValidationError(f"segment {segment.id}: road_width must be > 0")
    return replace(segment, **changes)


def _read_attributes(props: dict, index: int) -> dict:
    out = {}
    for name, default in ATTRIBUTE_DEFAULTS.items():
        raw = props.get(name, default)
        if raw is None or raw == "" and not isinstance(default, str):
            raw = default
        try:
            if name == "creation_date":
                out[name] = dt.date.fromisoformat(raw) if raw else None
            elif isinstance(default, bool):
                if isinstance(raw, str):
                    out[name] = raw.strip().lower() in ("true", "1", "yes")
                else:
                    out[name] = bool(raw)
            elif isinstance(default, float):
                out[name] = float(raw)
            else:
                out[name] = str(raw)
        except (TypeError, ValueError) as exc:
            raise ParseError(f"bad value for {name!r}: {raw!r} ({exc})", index) from exc
    return out


def _feature_id(feature: dict, index: int) -> int:
    props = feature.get("properties") or {}
    raw = props.get("ogr_fid", feature.get("id"))
    if raw is None:
        raise ParseError("missing numeric id ('ogr_fid' property or feature id)", index)
    try:
        fid = int(raw)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"non-numeric feature id {raw!r}", index) from exc
    return fid


def load_geojson(document: bytes | str | dict) -> list[RoadSegment]:
    """Parse a GeoJSON FeatureCollection of LineString/MultiLineString roads.

    Each MultiLineString part becomes its own segment under the derived-id
    rule. Duplicate ids and degenerate geometries are rejected.
    """
    import json

    if isinstance(document, (bytes, str)):
        try:
            doc = json.loads(document)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from exc
    else:
        doc = document
    if not isinstance(doc, dict) or doc.get("type") != "FeatureCollection":
        raise ParseError("document is not a FeatureCollection")
    features = doc.get("features")
    if not isinstance(features, list):
        raise ParseError("FeatureCollection has no feature list")

    segments: list[RoadSegment] = []
    seen: set[int] = set()
    for index, feature in enumerate(features):
        if not isinstance(feature, dict) or feature.get("type") != "Feature":
            raise ParseError("not a Feature object", index)
        geom = feature.get("geometry") or {}
        gtype = geom.get("type")
        coords = geom.get("coordinates")
        if gtype == "LineString":
            parts = [coords]
        elif gtype == "MultiLineString":
            parts = coords or []
        else:
            raise ParseError(f"unsupported geometry type {gtype!r}", index)
        fid = _feature_id(feature, index)
        attrs = _read_attributes(feature.get("properties") or {}, index)
        for part_index, part in enumerate(parts):
            if not isinstance(part, list) or len(part) < 2:
                raise ParseError("geometry part has fewer than 2 points", index)
            sid = fid if gtype == "LineString" else fid * MULTILINESTRING_ID_FACTOR + part_index
            if sid in seen:
                raise ParseError(f"duplicate segment id {sid}", index)
            seen.add(sid)
            try:
                points = tuple(GeoPoint.from_pair(p) for p in part)
                segments.append(RoadSegment(id=sid, geometry=points, **attrs))
            except (ValidationError, TypeError, IndexError) as exc:
                raise ParseError(str(exc), index) from exc
    return segments


def segment_properties(segment: RoadSegment) -> dict:
    """The attribute set as GeoJSON properties (dates ISO-8601)."""
    return {
        "ogr_fid": segment.id,
        "road_type": segment.road_type,
        "road_width": segment.road_width,
        "slope": segment.slope,
        "transverse_slope": segment.transverse_slope,
        "ditch": segment.ditch,
        "ditch_type": segment.ditch_type,
        "aspect": segment.aspect,
        "slope_height": segment.slope_height,
        "creation_date": segment.creation_date.isoformat() if segment.creation_date else None,
        "soil_category": segment.soil_category,
        "soil_profile": segment.soil_profile,
        "technical_works": segment.technical_works,
        "type_of_technical_work": segment.type_of_technical_work,
        "length_m": segment.length_m,
    }


def segments_to_geojson(segments: list[RoadSegment], extra_properties=None) -> dict:
    """Export segments as a FeatureCollection; one LineString per segment."""
    features = []
    for seg in sorted(segments, key=lambda s: s.id):
        props = segment_properties(seg)
        if extra_properties is not None:
            props.update(extra_properties(seg))
        features.append(
            {
                "type": "Feature",
                "id": seg.id,
                "geometry": {
                    "type": "LineString",
                    "coordinates": [p.as_pair() for p in seg.geometry],
                },
                "properties": props,
            }
        )
    return {"type": "FeatureCollection", "features": features}


@dataclass(frozen=True)
class Junction:
    """A graph vertex formed by snapped segment endpoints."""

    id: int
    position: GeoPoint
    incident: frozenset[tuple[int, str]]  # (segment id, "start"|"end")


@dataclass(frozen=True)
class NetworkGraph:
    """Immutable routable snapshot of the road network.

    ``endpoint_of`` maps (segment id, marker) to the junction the endpoint
    snapped into; adjacency is undirected and derived once at build time.
    """

    junctions: dict[int, Junction]
    segments: dict[int, RoadSegment]
    endpoint_of: dict[tuple[int, str], int]
    snap_tolerance: float
    _adjacency: dict[int, tuple[tuple[int, int, float], ...]] = field(repr=False, default_factory=dict)

    def neighbors(self, junction_id: int) -> tuple[tuple[int, int, float], ...]:
        """Edges leaving a junction as (other junction, segment id, length)."""
        if junction_id not in self.junctions:
            raise NotFoundError(f"unknown junction {junction_id}")
        return self._adjacency.get(junction_id, ())

    def segment_junctions(self, segment_id: int) -> tuple[int, int]:
        if segment_id not in self.segments:
            raise NotFoundError(f"unknown segment {segment_id}")
        return self.endpoint_of[(segment_id, "start")], self.endpoint_of[(segment_id, "end")]


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, i: int) -> int:
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, i: int, j: int) -> None:
        ri, rj = self.find(i), self.find(j)
        if ri != rj:
            self.parent[rj] = ri


def build_graph(
    segments: list[RoadSegment], snap_tolerance: float = DEFAULT_SNAP_TOLERANCE_M
) -> NetworkGraph:
    """Snap segment endpoints into junctions and assemble the graph.

    Endpoints within ``snap_tolerance`` meters merge transitively; a junction
    sits at the centroid of its snapped endpoints. Junction ids are assigned
    in ascending order of (lowest contributing segment id, endpoint marker),
    so the same segment set always yields the same ids.
    """
    if snap_tolerance < 0:
        raise ValidationError("snap_tolerance must be >= 0")
    ids = [s.id for s in segments]
    if len(ids) != len(set(ids)):
        raise ValidationError("duplicate segment ids")

    endpoints: list[tuple[int, str, GeoPoint]] = []
    for seg in segments:
        endpoints.append((seg.id, "start", seg.start))
        endpoints.append((seg.id, "end", seg.end))

    uf = _UnionFind(len(endpoints))
    # Coarse spatial hash keeps pairwise proximity checks near-linear; cell
    # sizing assumes |lat| < ~75 degrees, fine for any forest road network.
    cell_deg = max(snap_tolerance, 0.001) / 111000.0 * 4.0
    grid: dict[tuple[int, int], list[int]] = {}
    for i, (_, _, p) in enumerate(endpoints):
        key = (int(math.floor(p.lon / cell_deg)), int(math.floor(p.lat / cell_deg)))
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                for j in grid.get((key[0] + dx, key[1] + dy), ()):
                    q = endpoints[j][2]
                    if haversine_m(p, q) <= snap_tolerance:
                        uf.union(i, j)
        grid.setdefault(key, []).append(i)

    groups: dict[int, list[int]] = {}
    for i in range(len(endpoints)):
        groups.setdefault(uf.find(i), []).append(i)

    marker_rank = {"start": 0, "end": 1}

    def group_key(members: list[int]) -> tuple[int, int]:
        return min((endpoints[i][0], marker_rank[endpoints[i][1]]) for i in members)

    ordered = sorted(groups.values(), key=group_key)

    junctions: dict[int, Junction] = {}
    endpoint_of: dict[tuple[int, str], int] = {}
    for jid, members in enumerate(ordered, start=1):
        lon = sum(endpoints[i][2].lon for i in members) / len(members)
        lat = sum(endpoints[i][2].lat for i in members) / len(members)
        incident = frozenset((endpoints[i][0], endpoints[i][1]) for i in members)
        junctions[jid] = Junction(id=jid, position=GeoPoint(lon, lat), incident=incident)
        for i in members:
            endpoint_of[(endpoints[i][0], endpoints[i][1])] = jid

    adjacency: dict[int, list[tuple[int, int, float]]] = {jid: [] for jid in junctions}
    for seg in segments:
        a = endpoint_of[(seg.id, "start")]
        b = endpoint_of[(seg.id, "end")]
        adjacency[a].append((b, seg.id, seg.length_m))
        if a != b:
            adjacency[b].append((a, seg.id, seg.length_m))
    frozen = {jid: tuple(sorted(edges, key=lambda e: e[1])) for jid, edges in adjacency.items()}

    return NetworkGraph(
        junctions=junctions,
        segments={s.id: s for s in segments},
        endpoint_of=endpoint_of,
        snap_tolerance=snap_tolerance,
        _adjacency=frozen,
    )
