// SVG map of the network: segments styled by status, click selection, route
// overlays, and junction picking for the route planner.

import { geoMercator, geoPath, type GeoProjection } from "d3-geo";

import type { JunctionRecord, MapFeature, MapFeatureCollection, RouteResponse } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";

export const ROUTE_CLASSES = ["route--baseline", "route--alt1", "route--alt2", "route--alt3"];

export function classForFeature(feature: MapFeature, selectedId: number | null): string {
    const classes = ["segment", `segment--${feature.properties.status}`];
    if (selectedId !== null && feature.id === selectedId) {
        classes.push("segment--selected");
    }
    return classes.join(" ");
}

export function buildProjection(
    collection: MapFeatureCollection,
    width: number,
    height: number,
): GeoProjection {
    const projection = geoMercator();
    if (collection.features.length > 0) {
        projection.fitExtent(
            [
                [16, 16],
                [width - 16, height - 16],
            ],
            collection as never,
        );
    }
    return projection;
}

export function nearestJunction(
    junctions: JunctionRecord[],
    projection: GeoProjection,
    x: number,
    y: number,
    thresholdPx: number,
): JunctionRecord | null {
    let best: JunctionRecord | null = null;
    let bestDist = Infinity;
    for (const junction of junctions) {
        const projected = projection([junction.lon, junction.lat]);
        if (!projected) continue;
        const dx = projected[0] - x;
        const dy = projected[1] - y;
        const dist = Math.hypot(dx, dy);
        if (dist < bestDist) {
            bestDist = dist;
            best = junction;
        }
    }
    return bestDist <= thresholdPx ? best : null;
}

export interface MapHandlers {
    onSegmentClick: (segmentId: number) => void;
    onCanvasClick: (x: number, y: number) => void;
}

export interface MapView {
    svg: SVGSVGElement;
    projection: GeoProjection;
    render: (
        collection: MapFeatureCollection,
        junctions: JunctionRecord[],
        selectedId: number | null,
        route: RouteResponse | null,
        markers: { origin: number | null; dest: number | null },
    ) => void;
}

export function createMapView(
    container: HTMLElement,
    width: number,
    height: number,
    handlers: MapHandlers,
): MapView {
    const svg = document.createElementNS(SVG_NS, "svg") as SVGSVGElement;
    svg.setAttribute("width", String(width));
    svg.setAttribute("height", String(height));
    svg.setAttribute("viewBox", `0 0 ${width} ${height}`);
    svg.classList.add("network-map");
    container.appendChild(svg);

    let projection = geoMercator();

    svg.addEventListener("click", (event) => {
        const target = event.target as Element;
        if (target.classList && target.classList.contains("segment")) {
            return; // segment paths handle their own clicks
        }
        const rect = svg.getBoundingClientRect();
        handlers.onCanvasClick(event.clientX - rect.left, event.clientY - rect.top);
    });

    function render(
        collection: MapFeatureCollection,
        junctions: JunctionRecord[],
        selectedId: number | null,
        route: RouteResponse | null,
        markers: { origin: number | null; dest: number | null },
    ): void {
        projection = buildProjection(collection, width, height);
        const path = geoPath(projection);
        while (svg.firstChild) {
            svg.removeChild(svg.firstChild);
        }

        const featureById = new Map<number, MapFeature>();
        for (const feature of collection.features) {
            featureById.set(feature.id, feature);
            const element = document.createElementNS(SVG_NS, "path");
            element.setAttribute("d", path(feature as never) ?? "");
            element.setAttribute("class", classForFeature(feature, selectedId));
            element.setAttribute("data-segment-id", String(feature.id));
            element.addEventListener("click", (event) => {
                event.stopPropagation();
                handlers.onSegmentClick(feature.id);
            });
            svg.appendChild(element);
        }

        if (route) {
            const overlays: { ids: number[]; cls: string }[] = [
                { ids: route.baseline.segment_ids, cls: ROUTE_CLASSES[0] },
            ];
            route.alternatives.forEach((alt, i) => {
                overlays.push({ ids: alt.segment_ids, cls: ROUTE_CLASSES[(i + 1) % ROUTE_CLASSES.length] });
            });
            for (const overlay of overlays) {
                for (const sid of overlay.ids) {
                    const feature = featureById.get(sid);
                    if (!feature) continue;
                    const element = document.createElementNS(SVG_NS, "path");
                    element.setAttribute("d", path(feature as never) ?? "");
                    element.setAttribute("class", `route ${overlay.cls}`);
                    svg.appendChild(element);
                }
            }
        }

        for (const junction of junctions) {
            const projected = projection([junction.lon, junction.lat]);
            if (!projected) continue;
            const circle = document.createElementNS(SVG_NS, "circle");
            circle.setAttribute("cx", String(projected[0]));
            circle.setAttribute("cy", String(projected[1]));
            const isMarker = junction.id === markers.origin || junction.id === markers.dest;
            circle.setAttribute("r", isMarker ? "6" : "3");
            circle.setAttribute(
                "class",
                junction.id === markers.origin
                    ? "junction junction--origin"
                    : junction.id === markers.dest
                      ? "junction junction--dest"
                      : "junction",
            );
            circle.setAttribute("data-junction-id", String(junction.id));
            svg.appendChild(circle);
        }
    }

    return {
        svg,
        get projection() {
            return projection;
        },
        render,
    } as MapView;
}
