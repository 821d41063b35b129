"""Authored demonstration network ("koupa-mini").

A compact forest road network laid out so that the bundled scenario analysis
hits round targets: the optimum between the two named endpoints is 7.769 km,
blocking segment 189 forces a 13.603 km naive drive, the two best informed
alternatives measure 8.256 km and 9.775 km, and the whole network sums to
66 km. Junction placement is done on the sphere (meridian/parallel offsets
plus two-circle intersection in high precision) so haversine lengths match
the targets to well under a millimeter.

Run ``python -m frmp.fixture <out.geojson> [meta.json]`` to regenerate the
shipped files.
"""

from __future__ import annotations

import json
import math

from .geo import EARTH_RADIUS_M

BASE = (22.62, 41.00)  # lon/lat of the network's south-west anchor junction

CORE_LENGTHS_M = {
    "AB": 2000.0,
    "BC": 2673.5,
    "CF": 3095.5,
    "BD": 3000.0,
    "DF": 3256.0,
    "AE": 4800.0,
    "EF": 4975.0,
}

BLOCKED_SEGMENT_ID = 189  # the scenario obstacle sits on C-F
ORIGIN_JUNCTION = 1  # A
DEST_JUNCTION = 5  # F


def _north(p: tuple[float, float], meters: float) -> tuple[float, float]:
    lon, lat = p
    return (lon, lat + math.degrees(meters / EARTH_RADIUS_M))


def _east(p: tuple[float, float], meters: float) -> tuple[float, float]:
    lon, lat = p
    half = math.sin(meters / (2.0 * EARTH_RADIUS_M)) / math.cos(math.radians(lat))
    return (lon + math.degrees(2.0 * math.asin(half)), lat)


def _circle_point(
    p1: tuple[float, float],
    r1_m: float,
    p2: tuple[float, float],
    r2_m: float,
    east_side: bool,
) -> tuple[float, float]:
    """Intersection of two geodesic circles, done in extended precision.

    The direct float formulation cancels catastrophically at kilometer
    radii (cos of tiny angles), so the vector algebra runs under mpmath.
    """
    import mpmath as mp

    with mp.workdps(60):
        radius = mp.mpf(repr(EARTH_RADIUS_M))

        def vec(p):
            lon, lat = mp.radians(mp.mpf(repr(p[0]))), mp.radians(mp.mpf(repr(p[1])))
            return [mp.cos(lat) * mp.cos(lon), mp.cos(lat) * mp.sin(lon), mp.sin(lat)]

        def dot(u, v):
            return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]

        v1, v2 = vec(p1), vec(p2)
        c = dot(v1, v2)
        a1, a2 = mp.cos(mp.mpf(repr(r1_m)) / radius), mp.cos(mp.mpf(repr(r2_m)) / radius)
        det = 1 - c * c
        alpha, beta = (a1 - a2 * c) / det, (a2 - a1 * c) / det
        w = [
            v1[1] * v2[2] - v1[2] * v2[1],
            v1[2] * v2[0] - v1[0] * v2[2],
            v1[0] * v2[1] - v1[1] * v2[0],
        ]
        gamma = mp.sqrt((1 - (alpha * alpha + beta * beta + 2 * alpha * beta * c)) / dot(w, w))
        solutions = []
        for sign in (gamma, -gamma):
            p = [alpha * v1[i] + beta * v2[i] + sign * w[i] for i in range(3)]
            norm = mp.sqrt(dot(p, p))
            p = [x / norm for x in p]
            lon = mp.degrees(mp.atan2(p[1], p[0]))
            lat = mp.degrees(mp.asin(p[2]))
            solutions.append((float(lon), float(lat)))
    solutions.sort(key=lambda q: q[0])
    return solutions[1] if east_side else solutions[0]


def _junction_positions() -> dict[str, tuple[float, float]]:
    a = BASE
    b = _east(a, CORE_LENGTHS_M["AB"])
    c = _north(b, CORE_LENGTHS_M["BC"])
    f = _north(c, CORE_LENGTHS_M["CF"])
    d = _circle_point(b, CORE_LENGTHS_M["BD"], f, CORE_LENGTHS_M["DF"], east_side=True)
    e = _circle_point(a, CORE_LENGTHS_M["AE"], f, CORE_LENGTHS_M["EF"], east_side=False)
    return {"A": a, "B": b, "C": c, "D": d, "E": e, "F": f}


def _meridian_polyline(p: tuple[float, float], meters: float, waypoints: int = 0) -> list:
    """North-going polyline from p; intermediate points keep the length exact."""
    pts = [list(p)]
    if waypoints:
        step = meters / (waypoints + 1)
        for i in range(1, waypoints + 1):
            pts.append(list(_north(p, step * i)))
    pts.append(list(_north(p, meters)))
    return pts


def _attrs(
    road_type="Forest Road Category 'C'",
    road_width=4.0,
    slope=3.0,
    transverse_slope=2.0,
    ditch=False,
    ditch_type="",
    aspect=0.0,
    slope_height=1.0,
    creation_date="1995-06-01",
    soil_category="Flysch",
    soil_profile="80% Earth",
    technical_works=False,
    type_of_technical_work="",
):
    return {
        "road_type": road_type,
        "road_width": road_width,
        "slope": slope,
        "transverse_slope": transverse_slope,
        "ditch": ditch,
        "ditch_type": ditch_type,
        "aspect": aspect,
        "slope_height": slope_height,
        "creation_date": creation_date,
        "soil_category": soil_category,
        "soil_profile": soil_profile,
        "technical_works": technical_works,
        "type_of_technical_work": type_of_technical_work,
    }


def koupa_mini_geojson() -> dict:
    """The authored network as a GeoJSON FeatureCollection."""
    j = _junction_positions()
    a, b, c, d, e, f = j["A"], j["B"], j["C"], j["D"], j["E"], j["F"]

    features = []

    def add(fid: int, coords: list, attrs: dict) -> None:
        features.append(
            {
                "type": "Feature",
                "id": fid,
                "geometry": {"type": "LineString", "coordinates": coords},
                "properties": {"ogr_fid": fid, **attrs},
            }
        )

    # Core network: two through-routes east of the valley plus a long western loop.
    add(110, [list(a), list(b)], _attrs(road_width=5.0, slope=2.5, creation_date="1988-05-12"))
    add(
        145,
        _meridian_polyline(b, CORE_LENGTHS_M["BC"], waypoints=2),
        _attrs(road_width=4.5, slope=4.0, ditch=True, ditch_type="East", creation_date="1990-09-03"),
    )
    add(
        189,
        _meridian_polyline(c, CORE_LENGTHS_M["CF"], waypoints=1),
        _attrs(
            road_type="Forest Road Category 'C'",
            road_width=6.0,
            slope=2.0,
            transverse_slope=2.0,
            ditch=True,
            ditch_type="North",
            aspect=10.0,
            slope_height=2.0,
            creation_date="1992-04-23",
            soil_category="Flysch",
            soil_profile="80% Earth",
            technical_works=True,
            type_of_technical_work="Culvert",
        ),
    )
    add(152, [list(a), list(e)], _attrs(road_width=4.0, slope=6.0, soil_category="Limestone"))
    add(
        176,
        [list(e), list(f)],
        _attrs(road_width=4.0, slope=5.5, soil_category="Limestone", creation_date="1979-10-20"),
    )
    add(
        203,
        [list(b), list(d)],
        _attrs(road_width=4.5, slope=3.5, technical_works=True, type_of_technical_work="Retaining wall"),
    )
    add(214, [list(d), list(f)], _attrs(road_width=4.5, slope=4.5, creation_date="2001-03-15"))

    # Maintenance spurs: dead-end branches that pad the network to 66 km
    # without touching the through-routes.
    spurs = [
        (301, f, 7000.0, "north"),
        (322, e, 6500.0, "west"),
        (340, d, 6000.0, "east"),
        (355, c, 5700.0, "west"),
        (360, b, 5500.0, "south"),
        (378, a, 5000.0, "south"),
        (391, a, 3500.0, "west"),
        (402, f, 3000.0, "east"),
    ]
    for fid, start, meters, heading in spurs:
        if heading == "north":
            endp = _north(start, meters)
        elif heading == "south":
            endp = _north(start, -meters)
        elif heading == "east":
            endp = _east(start, meters)
        else:
            endp = _east(start, -meters)
        add(
            fid,
            [list(start), list(endp)],
            _attrs(
                road_width=3.5,
                slope=7.0,
                soil_profile="60% Earth 40% Rock",
                creation_date="2005-07-01",
            ),
        )

    return {"type": "FeatureCollection", "features": features}


def koupa_mini_meta() -> dict:
    """Junction naming and scenario targets for the authored network."""
    return {
        "origin_junction": ORIGIN_JUNCTION,
        "dest_junction": DEST_JUNCTION,
        "blocked_segment": BLOCKED_SEGMENT_ID,
        "named_junctions": {"A": 1, "B": 2, "C": 3, "E": 4, "F": 5, "D": 6},
        "targets": {
            "baseline_m": 7769.0,
            "naive_m": 13603.0,
            "alternatives_m": [8256.0, 9775.0],
            "network_total_m": 66000.0,
        },
    }


def main(argv: list[str] | None = None) -> int:
    import sys

    args = list(sys.argv[1:] if argv is None else argv)
    if not args:
        print(json.dumps(koupa_mini_geojson()))
        return 0
    with open(args[0], "w", encoding="utf-8") as fh:
        json.dump(koupa_mini_geojson(), fh, indent=1)
        fh.write("\n")
    if len(args) > 1:
        with open(args[1], "w", encoding="utf-8") as fh:
            json.dump(koupa_mini_meta(), fh, indent=1)
            fh.write("\n")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
