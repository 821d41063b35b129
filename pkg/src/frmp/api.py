"""HTTP/JSON service: segments, report lifecycle, routing what-ifs, map feed.

Auth is a static bearer-token -> user mapping from the service config; the
CCO role may create and edit, the AM role may additionally resolve, assign,
and delete. GET endpoints are open to anonymous callers when the config's
public-read flag is on.
"""

from __future__ import annotations

import json
import logging
import sys
import time
from typing import Callable

from fastapi import Depends, FastAPI, Request, Response
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .config import ServiceConfig
from .geo import GeoPoint, ValidationError
from .network import (
    NetworkGraph,
    NotFoundError,
    apply_segment_patch,
    build_graph,
    segment_properties,
    segments_to_geojson,
)
from .reports import (
    Clock,
    ReportService,
    StateError,
    blocked_segments,
    estimate_repair_cost,
    utc_now,
)
from .routing import (
    alternative_routes,
    compare_scenarios,
    shortest_path,
    simulate_naive_drive,
)
from .store import Store, User

log = logging.getLogger("frmp.api")


class ApiException(Exception):
    """Maps a domain failure onto a stable machine code and HTTP status."""

    def __init__(self, status: int, code: str, message: str):
        self.status = status
        self.code = code
        self.message = message
        super().__init__(message)


def _not_found(message: str) -> ApiException:
    return ApiException(404, "not_found", message)


def _forbidden(message: str = "insufficient role") -> ApiException:
    return ApiException(403, "role_forbidden", message)


class ReportCreateBody(BaseModel):
    report_code: str
    report_comments: str = ""
    ogr_fid: int
    location: tuple[float, float] | None = None


class ReportPatchBody(BaseModel):
    report_code: str | None = None
    report_comments: str | None = None
    location: tuple[float, float] | None = None


class ResolveBody(BaseModel):
    report_ids: list[int]


class AssignmentBody(BaseModel):
    report_ids: list[int]
    assignee: str
    depot_junction: int


class RouteRequest(BaseModel):
    origin: int
    dest: int
    profile: str = "standard"
    respect_blockages: bool = True
    k: int = Field(default=2, ge=1)
    simulate_naive: bool = False


def create_app(store: Store, config: ServiceConfig, clock: Clock = utc_now) -> FastAPI:
    app = FastAPI(title="Forest Road Management Platform", version="0.1.0")
    service = ReportService(store, clock)

    state = {"graph": build_graph(list(store.snapshot.segments.values()), config.snap_tolerance)}

    def rebuild_graph() -> None:
        state["graph"] = build_graph(
            list(store.snapshot.segments.values()), config.snap_tolerance
        )

    app.state.store = store
    app.state.config = config
    app.state.rebuild_graph = rebuild_graph

    def current_user(request: Request) -> User | None:
        header = request.headers.get("authorization", "")
        if not header.lower().startswith("bearer "):
            return None
        token = header[7:].strip()
        user_id = config.tokens.get(token)
        if user_id is None:
            return None
        for user in config.users:
            if user.id == user_id:
                return user
        return store.snapshot.users.get(user_id)

    def require_reader(request: Request) -> User | None:
        user = current_user(request)
        if user is None and not config.public_read:
            raise _forbidden("authentication required")
        return user

    def require_role(*roles: str) -> Callable:
        def dependency(request: Request) -> User:
            user = current_user(request)
            if user is None:
                raise _forbidden("authentication required")
            if user.role not in roles:
                raise _forbidden(f"requires role in {roles}")
            return user

        return dependency

    @app.exception_handler(ApiException)
    async def handle_api_exception(request: Request, exc: ApiException):
        return JSONResponse(status_code=exc.status, content={"code": exc.code, "message": exc.message})

    @app.middleware("http")
    async def request_log(request: Request, call_next):
        started = time.perf_counter()
        response = await call_next(request)
        log.info(
            json.dumps(
                {
                    "method": request.method,
                    "path": request.url.path,
                    "status": response.status_code,
                    "duration_ms": round((time.perf_counter() - started) * 1000.0, 2),
                }
            )
        )
        return response

    def translate_errors(fn: Callable):
        try:
            return fn()
        except NotFoundError as exc:
            raise _not_found(str(exc.args[0] if exc.args else exc)) from exc
        except StateError as exc:
            raise ApiException(409, "state_conflict", str(exc)) from exc
        except ValidationError as exc:
            raise ApiException(400, "validation_error", str(exc)) from exc

    def segment_payload(seg, blocked: set[int], report_count: dict[int, int]) -> dict:
        payload = segment_properties(seg)
        payload["id"] = seg.id
        payload["status"] = "blocked" if seg.id in blocked else "open"
        payload["active_report_count"] = report_count.get(seg.id, 0)
        return payload

    def _blocked_and_counts(snap) -> tuple[set[int], dict[int, int]]:
        blocked = blocked_segments(snap.reports.values(), snap.catalog)
        counts: dict[int, int] = {}
        for report in snap.reports.values():
            if report.report_status.value != "Resolved":
                counts[report.segment_ref] = counts.get(report.segment_ref, 0) + 1
        return blocked, counts

    @app.get("/health")
    def health():
        return {"status": "ok", "revision": store.revision}

    @app.get("/segments")
    def list_segments(
        limit: int = 100, offset: int = 0, user: User | None = Depends(require_reader)
    ):
        snap = store.snapshot
        blocked, counts = _blocked_and_counts(snap)
        segs = [snap.segments[k] for k in sorted(snap.segments)][offset : offset + limit]
        return [segment_payload(s, blocked, counts) for s in segs]

    @app.get("/segments/{segment_id}")
    def get_segment(segment_id: int, user: User | None = Depends(require_reader)):
        snap = store.snapshot
        seg = snap.segments.get(segment_id)
        if seg is None:
            raise _not_found(f"unknown segment {segment_id}")
        blocked, counts = _blocked_and_counts(snap)
        return segment_payload(seg, blocked, counts)

    @app.put("/segments/{segment_id}")
    def put_segment(
        segment_id: int, patch: dict, user: User = Depends(require_role("CCO", "AM"))
    ):
        def do():
            seg = store.snapshot.segments.get(segment_id)
            if seg is None:
                raise NotFoundError(f"unknown segment {segment_id}")
            updated = apply_segment_patch(seg, patch)

            def mutate(draft):
                draft.segments[segment_id] = updated

            store.commit(mutate)
            rebuild_graph()
            return updated

        updated = translate_errors(do)
        snap = store.snapshot
        blocked, counts = _blocked_and_counts(snap)
        return segment_payload(updated, blocked, counts)

    @app.post("/reports", status_code=201)
    def post_report(body: ReportCreateBody, user: User = Depends(require_role("CCO", "AM"))):
        def do():
            location = GeoPoint.from_pair(body.location) if body.location else None
            return service.create_report(
                code=body.report_code,
                comments=body.report_comments,
                segment_ref=body.ogr_fid,
                reporter=user.id,
                location=location,
            )

        return translate_errors(do).to_dict()

    @app.get("/reports")
    def get_reports(
        status: str | None = None,
        code: str | None = None,
        ogr_fid: int | None = None,
        limit: int = 100,
        offset: int = 0,
        user: User | None = Depends(require_reader),
    ):
        def do():
            return service.list_reports(status=status, code=code, segment_ref=ogr_fid)

        try:
            reports = do()
        except ValueError as exc:
            raise ApiException(400, "validation_error", f"bad filter: {exc}") from exc
        return [r.to_dict() for r in reports[offset : offset + limit]]

    @app.patch("/reports/{report_id}")
    def patch_report(
        report_id: int, body: ReportPatchBody, user: User = Depends(require_role("CCO", "AM"))
    ):
        patch: dict = {}
        if body.report_code is not None:
            patch["report_code"] = body.report_code
        if body.report_comments is not None:
            patch["report_comments"] = body.report_comments
        if body.location is not None:
            patch["location"] = GeoPoint.from_pair(body.location)
        return translate_errors(lambda: service.update_report(report_id, patch)).to_dict()

    @app.post("/reports/resolve")
    def resolve_reports(body: ResolveBody, user: User = Depends(require_role("AM"))):
        resolved = translate_errors(lambda: service.resolve_reports(body.report_ids))
        return {"resolved": resolved}

    @app.delete("/reports/{report_id}", status_code=204)
    def delete_report(report_id: int, user: User = Depends(require_role("AM"))):
        translate_errors(lambda: service.delete_report(report_id))
        return Response(status_code=204)

    @app.post("/assignments", status_code=201)
    def post_assignment(body: AssignmentBody, user: User = Depends(require_role("AM"))):
        def do():
            if body.depot_junction not in state["graph"].junctions:
                raise NotFoundError(f"unknown junction {body.depot_junction}")
            return service.assign_repairs(
                body.report_ids, body.assignee, body.depot_junction, state["graph"]
            )

        return translate_errors(do).to_dict()

    @app.get("/assignments/estimate")
    def assignment_estimate(
        report_ids: str, depot: int, user: User = Depends(require_role("AM"))
    ):
        def do():
            ids = [int(part) for part in report_ids.split(",") if part.strip()]
            if not ids:
                raise ValidationError("report_ids is empty")
            if depot not in state["graph"].junctions:
                raise NotFoundError(f"unknown junction {depot}")
            snap = store.snapshot
            per_report = {}
            total = 0.0
            for rid in ids:
                report = snap.reports.get(rid)
                if report is None:
                    raise NotFoundError(f"unknown report {rid}")
                estimate = estimate_repair_cost(report, snap.catalog, depot, state["graph"])
                per_report[str(rid)] = {
                    "total": estimate.total,
                    "base_cost": estimate.base_cost,
                    "rate_per_km": estimate.rate_per_km,
                    "distance_km": estimate.distance_km,
                    "distance_available": estimate.distance_available,
                }
                total += estimate.total
            return {"total": total, "per_report": per_report}

        return translate_errors(do)

    @app.post("/route")
    def post_route(body: RouteRequest, user: User = Depends(require_role("CCO", "AM"))):
        graph: NetworkGraph = state["graph"]
        snap = store.snapshot
        profile = config.profiles.get(body.profile)
        if profile is None:
            raise ApiException(400, "validation_error", f"unknown profile {body.profile!r}")
        for jid in (body.origin, body.dest):
            if jid not in graph.junctions:
                raise _not_found(f"unknown junction {jid}")
        blocked = blocked_segments(snap.reports.values(), snap.catalog)

        baseline = shortest_path(graph, body.origin, body.dest, profile=profile)
        if not baseline.feasible:
            raise ApiException(422, "unreachable", "destination not reachable from origin")
        naive = None
        if body.simulate_naive:
            naive = simulate_naive_drive(graph, body.origin, body.dest, blocked, profile=profile)
        alt_blocked = blocked if body.respect_blockages else frozenset()
        alternatives = alternative_routes(
            graph, body.origin, body.dest, alt_blocked, k=body.k, profile=profile
        )
        comparison = translate_errors(lambda: compare_scenarios(baseline, naive, alternatives))
        payload = comparison.to_dict()
        payload["blocked_segments"] = sorted(blocked)
        payload["profile"] = {"name": profile.name, "speed_kmh": profile.speed_kmh}
        return payload

    @app.get("/map.geojson")
    def map_geojson(user: User | None = Depends(require_reader)):
        snap = store.snapshot
        blocked, counts = _blocked_and_counts(snap)
        return segments_to_geojson(
            list(snap.segments.values()),
            extra_properties=lambda seg: {
                "status": "blocked" if seg.id in blocked else "open",
                "active_report_count": counts.get(seg.id, 0),
                "road_type": seg.road_type,
            },
        )

    @app.get("/catalog")
    def catalog(user: User | None = Depends(require_reader)):
        from .reports import catalog_to_rows

        return catalog_to_rows(store.snapshot.catalog)

    @app.get("/junctions")
    def junctions(user: User | None = Depends(require_reader)):
        graph: NetworkGraph = state["graph"]
        return [
            {
                "id": j.id,
                "lon": j.position.lon,
                "lat": j.position.lat,
                "incident_segments": sorted(sid for sid, _ in j.incident),
            }
            for _, j in sorted(graph.junctions.items())
        ]

    return app


def configure_stdout_logging() -> None:
    handler = logging.StreamHandler(sys.stdout)
    handler.setFormatter(logging.Formatter("%(message)s"))
    log.addHandler(handler)
    log.setLevel(logging.INFO)
