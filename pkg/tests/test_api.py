from __future__ import annotations

import pytest
from fastapi.testclient import TestClient

from frmp.api import create_app
from frmp.config import ServiceConfig
from frmp.fixture import DEST_JUNCTION, ORIGIN_JUNCTION
from frmp.store import Store

CCO = {"Authorization": "Bearer cco-token"}
AM = {"Authorization": "Bearer am-token"}


@pytest.fixture()
def client(koupa_store, clock):
    app = create_app(koupa_store, ServiceConfig(), clock=clock)
    return TestClient(app)


@pytest.fixture()
def private_client(koupa_store, clock):
    config = ServiceConfig()
    config.public_read = False
    app = create_app(koupa_store, config, clock=clock)
    return TestClient(app)


@pytest.fixture()
def empty_client(tmp_path, clock):
    store = Store.open(tmp_path / "empty.json")
    return TestClient(create_app(store, ServiceConfig(), clock=clock))


def _report_body(code="ClosedRoad", fid=189):
    return {
        "report_code": code,
        "report_comments": "Due to heavy rain, the road flooded",
        "ogr_fid": fid,
    }


class TestSegments:
    def test_get_segment_189_fig4_values(self, client):
        r = client.get("/segments/189")
        assert r.status_code == 200
        body = r.json()
        assert body["road_width"] == 6.0
        assert body["type_of_technical_work"] == "Culvert"
        assert body["status"] == "open"
        assert body["length_m"] == pytest.approx(3095.5, abs=1e-6)

    def test_list_on_empty_store(self, empty_client):
        r = empty_client.get("/segments")
        assert r.status_code == 200
        assert r.json() == []

    def test_unknown_segment_404(self, client):
        r = client.get("/segments/0")
        assert r.status_code == 404
        assert r.json()["code"] == "not_found"

    def test_pagination(self, client):
        full = client.get("/segments").json()
        page = client.get("/segments", params={"limit": 5, "offset": 5}).json()
        assert page == full[5:10]

    def test_put_width_edit_persists_across_restart(self, koupa_store, clock, tmp_path):
        config = ServiceConfig()
        app = create_app(koupa_store, config, clock=clock)
        client = TestClient(app)
        r = client.put("/segments/189", json={"road_width": 5.5}, headers=AM)
        assert r.status_code == 200
        assert r.json()["road_width"] == 5.5

        reopened = Store.open(koupa_store.path)
        client2 = TestClient(create_app(reopened, config, clock=clock))
        assert client2.get("/segments/189").json()["road_width"] == 5.5

    def test_put_noop_body(self, client):
        before = client.get("/segments/189").json()
        r = client.put("/segments/189", json={}, headers=CCO)
        assert r.status_code == 200
        after = client.get("/segments/189").json()
        assert after == before

    def test_put_negative_width_400(self, client):
        r = client.put("/segments/189", json={"road_width": -1}, headers=AM)
        assert r.status_code == 400
        assert r.json()["code"] == "validation_error"

    def test_put_unknown_segment_404(self, client):
        assert client.put("/segments/777777", json={}, headers=AM).status_code == 404


class TestReports:
    def test_post_report_sets_server_side_dates(self, client):
        r = client.post("/reports", json=_report_body(), headers=CCO)
        assert r.status_code == 201
        body = r.json()
        assert body["report_status"] == "Active"
        assert body["creation_date"]
        assert body["ogr_fid"] == 189
        assert body["reporter"] == "cco1"

    def test_post_unknown_segment_404(self, client):
        r = client.post("/reports", json=_report_body(fid=31337), headers=CCO)
        assert r.status_code == 404

    def test_post_unknown_code_400(self, client):
        r = client.post("/reports", json=_report_body(code="Meteor"), headers=CCO)
        assert r.status_code == 400

    def test_patch_resolved_conflict(self, client):
        rid = client.post("/reports", json=_report_body(), headers=CCO).json()["id"]
        client.post("/reports/resolve", json={"report_ids": [rid]}, headers=AM)
        r = client.patch(f"/reports/{rid}", json={"report_comments": "late"}, headers=CCO)
        assert r.status_code == 409
        assert r.json()["code"] == "state_conflict"

    def test_filters(self, client):
        client.post("/reports", json=_report_body(), headers=CCO)
        client.post(
            "/reports",
            json={"report_code": "Landslide", "report_comments": "rocks", "ogr_fid": 378},
            headers=CCO,
        )
        only_378 = client.get("/reports", params={"ogr_fid": 378}).json()
        assert [r["ogr_fid"] for r in only_378] == [378]
        active = client.get("/reports", params={"status": "Active"}).json()
        assert len(active) == 2

    def test_delete(self, client):
        rid = client.post("/reports", json=_report_body(), headers=CCO).json()["id"]
        assert client.delete(f"/reports/{rid}", headers=AM).status_code == 204
        assert client.get("/reports").json() == []

    def test_resolve_unknown_404(self, client):
        r = client.post("/reports/resolve", json={"report_ids": [404]}, headers=AM)
        assert r.status_code == 404


class TestAssignments:
    def test_assign_with_estimate(self, client):
        rid = client.post("/reports", json=_report_body(), headers=CCO).json()["id"]
        est = client.get(
            "/assignments/estimate",
            params={"report_ids": str(rid), "depot": ORIGIN_JUNCTION},
            headers=AM,
        )
        assert est.status_code == 200
        preview = est.json()["total"]
        r = client.post(
            "/assignments",
            json={"report_ids": [rid], "assignee": "am1", "depot_junction": ORIGIN_JUNCTION},
            headers=AM,
        )
        assert r.status_code == 201
        assert r.json()["estimated_cost"] == pytest.approx(preview)
        report = client.get("/reports").json()[0]
        assert report["report_status"] == "Assigned"
        assert report["assignee"] == "am1"

    def test_assign_non_active_409(self, client):
        rid = client.post("/reports", json=_report_body(), headers=CCO).json()["id"]
        client.post("/reports/resolve", json={"report_ids": [rid]}, headers=AM)
        r = client.post(
            "/assignments",
            json={"report_ids": [rid], "assignee": "am1", "depot_junction": ORIGIN_JUNCTION},
            headers=AM,
        )
        assert r.status_code == 409

    def test_assign_empty_400(self, client):
        r = client.post(
            "/assignments",
            json={"report_ids": [], "assignee": "am1", "depot_junction": ORIGIN_JUNCTION},
            headers=AM,
        )
        assert r.status_code == 400


class TestRoute:
    def test_full_scenario_payload(self, client):
        client.post("/reports", json=_report_body(), headers=CCO)  # blocks 189
        r = client.post(
            "/route",
            json={
                "origin": ORIGIN_JUNCTION,
                "dest": DEST_JUNCTION,
                "k": 2,
                "simulate_naive": True,
            },
            headers=CCO,
        )
        assert r.status_code == 200
        body = r.json()
        assert body["baseline"]["time_min_display"] == "33.29"
        assert body["naive"]["time_min_display"] == "58.29"
        assert [a["time_min_display"] for a in body["alternatives"]] == ["35.38", "41.89"]
        assert body["display"]["pct_change_d"] == {"B": "75.09", "C": "6.26", "D": "25.82"}
        assert body["display"]["time_improvement_vs_naive"] == {"C": "68.82", "D": "49.27"}
        assert body["blocked_segments"] == [189]

    def test_origin_equals_dest(self, client):
        r = client.post(
            "/route",
            json={"origin": ORIGIN_JUNCTION, "dest": ORIGIN_JUNCTION, "k": 1},
            headers=CCO,
        )
        assert r.status_code == 200
        body = r.json()
        assert body["baseline"]["distance_m"] == 0.0
        assert all(v == 0.0 for v in body["pct_change_d"].values())

    def test_unknown_junction_404(self, client):
        r = client.post("/route", json={"origin": 1, "dest": 999}, headers=CCO)
        assert r.status_code == 404

    def test_unreachable_422(self, tmp_path, clock):
        from frmp.network import load_geojson

        store = Store.open(tmp_path / "s.json")
        doc = {
            "type": "FeatureCollection",
            "features": [
                {
                    "type": "Feature",
                    "id": 1,
                    "geometry": {"type": "LineString", "coordinates": [[22.9, 40.95], [22.91, 40.95]]},
                    "properties": {"ogr_fid": 1},
                },
                {
                    "type": "Feature",
                    "id": 2,
                    "geometry": {"type": "LineString", "coordinates": [[23.5, 40.95], [23.51, 40.95]]},
                    "properties": {"ogr_fid": 2},
                },
            ],
        }

        def mutate(draft):
            for seg in load_geojson(doc):
                draft.segments[seg.id] = seg

        store.commit(mutate)
        client = TestClient(create_app(store, ServiceConfig(), clock=clock))
        r = client.post("/route", json={"origin": 1, "dest": 3}, headers=CCO)
        assert r.status_code == 422
        assert r.json()["code"] == "unreachable"

    def test_unknown_profile_400(self, client):
        r = client.post(
            "/route",
            json={"origin": 1, "dest": 5, "profile": "rocket"},
            headers=CCO,
        )
        assert r.status_code == 400


class TestMapFeed:
    def test_blocked_status_flips_with_lifecycle(self, client):
        feature = lambda fc, fid: next(f for f in fc["features"] if f["id"] == fid)  # noqa: E731
        fc = client.get("/map.geojson").json()
        assert feature(fc, 189)["properties"]["status"] == "open"

        rid = client.post("/reports", json=_report_body(), headers=CCO).json()["id"]
        fc = client.get("/map.geojson").json()
        assert feature(fc, 189)["properties"]["status"] == "blocked"
        assert feature(fc, 189)["properties"]["active_report_count"] == 1

        client.post("/reports/resolve", json={"report_ids": [rid]}, headers=AM)
        fc = client.get("/map.geojson").json()
        assert feature(fc, 189)["properties"]["status"] == "open"

    def test_empty_store_empty_collection(self, empty_client):
        fc = empty_client.get("/map.geojson").json()
        assert fc == {"type": "FeatureCollection", "features": []}

    def test_junctions_feed(self, client):
        junctions = client.get("/junctions").json()
        assert len(junctions) == 14
        first = junctions[0]
        assert set(first) == {"id", "lon", "lat", "incident_segments"}

    def test_catalog_feed(self, client):
        rows = client.get("/catalog").json()
        codes = {row["code"] for row in rows}
        assert {"Landslide", "ClosedRoad", "Erosion"} <= codes
        assert all(
            set(row) == {"code", "blocks_traffic", "base_cost", "rate_per_km"} for row in rows
        )


ROLE_MATRIX = [
    # (method, path, body, anonymous, cco, am)
    ("GET", "/segments", None, 200, 200, 200),
    ("GET", "/segments/189", None, 200, 200, 200),
    ("PUT", "/segments/189", {}, 403, 200, 200),
    ("POST", "/reports", _report_body(), 403, 201, 201),
    ("GET", "/reports", None, 200, 200, 200),
    ("PATCH", "/reports/1", {"report_comments": "x"}, 403, 200, 200),
    ("POST", "/reports/resolve", {"report_ids": [1]}, 403, 403, 200),
    ("POST", "/assignments", {"report_ids": [2], "assignee": "am1", "depot_junction": 1}, 403, 403, 201),
    ("GET", "/assignments/estimate?report_ids=2&depot=1", None, 403, 403, 200),
    ("DELETE", "/reports/2", None, 403, 403, 204),
    ("POST", "/route", {"origin": 1, "dest": 5}, 403, 200, 200),
    ("GET", "/map.geojson", None, 200, 200, 200),
    ("GET", "/junctions", None, 200, 200, 200),
    ("GET", "/catalog", None, 200, 200, 200),
]


class TestRoleMatrix:
    @pytest.fixture()
    def matrix_client(self, koupa_store, clock):
        app = create_app(koupa_store, ServiceConfig(), clock=clock)
        client = TestClient(app)
        # seed reports 1 and 2 so mutating endpoints have targets
        client.post("/reports", json=_report_body(), headers=CCO)
        client.post(
            "/reports",
            json={"report_code": "Landslide", "report_comments": "rocks", "ogr_fid": 378},
            headers=CCO,
        )
        return client

    @pytest.mark.parametrize(
        "method,path,body,anon_expected,cco_expected,am_expected",
        ROLE_MATRIX,
        ids=[f"{m} {p}" for m, p, *_ in ROLE_MATRIX],
    )
    def test_matrix(self, matrix_client, method, path, body, anon_expected, cco_expected, am_expected):
        for headers, expected in ((None, anon_expected), (CCO, cco_expected), (AM, am_expected)):
            r = matrix_client.request(method, path, json=body, headers=headers or {})
            assert r.status_code == expected, (
                f"{method} {path} as {headers or 'anonymous'}: "
                f"got {r.status_code}, expected {expected}"
            )

    def test_anonymous_reads_blocked_when_public_read_off(self, private_client):
        for path in ("/segments", "/reports", "/map.geojson", "/junctions"):
            assert private_client.get(path).status_code == 403
        assert private_client.get("/segments", headers=CCO).status_code == 200

    def test_invalid_token_rejected(self, client):
        r = client.post(
            "/reports", json=_report_body(), headers={"Authorization": "Bearer wrong"}
        )
        assert r.status_code == 403


class TestMutationAtomicity:
    def test_failed_mutations_leave_store_unchanged(self, koupa_store, clock):
        from frmp.store import snapshot_to_document

        client = TestClient(create_app(koupa_store, ServiceConfig(), clock=clock))
        rid = client.post("/reports", json=_report_body(), headers=CCO).json()["id"]
        client.post("/reports/resolve", json={"report_ids": [rid]}, headers=AM)
        before = snapshot_to_document(koupa_store.snapshot, 0)
        revision = koupa_store.revision

        attempts = [
            ("PUT", "/segments/189", {"road_width": -4}),
            ("PUT", "/segments/424242", {}),
            ("PATCH", f"/reports/{rid}", {"report_comments": "resolved already"}),
            ("POST", "/reports", _report_body(code="Nonsense")),
            ("POST", "/assignments", {"report_ids": [rid], "assignee": "am1", "depot_junction": 1}),
            ("DELETE", "/reports/999", None),
        ]
        for method, path, body in attempts:
            response = client.request(method, path, json=body, headers=AM)
            assert response.status_code >= 400
            assert snapshot_to_document(koupa_store.snapshot, 0) == before
            assert koupa_store.revision == revision
