// Application state: a single store with subscribe/notify. Role gating here
// is cosmetic only; the service enforces it authoritatively.

import type {
    CatalogRow,
    JunctionRecord,
    MapFeatureCollection,
    ReportRecord,
    RouteQuery,
    RouteResponse,
    Role,
    SegmentRecord,
    SessionConfig,
} from "./types.js";

export type PickMode = "select" | "pick-origin" | "pick-dest" | "pick-location";

export interface AppState {
    session: SessionConfig | null;
    map: MapFeatureCollection | null;
    junctions: JunctionRecord[];
    catalog: CatalogRow[];
    reports: ReportRecord[];
    selectedSegment: SegmentRecord | null;
    draftReport: { code: string; comments: string; location: [number, number] | null };
    routeQuery: RouteQuery;
    routeResult: RouteResponse | null;
    pickMode: PickMode;
    lastError: string | null;
}

export type Listener = (state: AppState) => void;

export function emptyDraft(): AppState["draftReport"] {
    return { code: "", comments: "", location: null };
}

export class Store {
    private state: AppState;
    private listeners: Listener[] = [];

    constructor(session: SessionConfig | null = null) {
        this.state = {
            session,
            map: null,
            junctions: [],
            catalog: [],
            reports: [],
            selectedSegment: null,
            draftReport: emptyDraft(),
            routeQuery: { origin: null, dest: null, k: 2, respectBlockages: true, simulateNaive: false },
            routeResult: null,
            pickMode: "select",
            lastError: null,
        };
    }

    get(): AppState {
        return this.state;
    }

    subscribe(listener: Listener): () => void {
        this.listeners.push(listener);
        return () => {
            this.listeners = this.listeners.filter((l) => l !== listener);
        };
    }

    update(patch: Partial<AppState>): void {
        this.state = { ...this.state, ...patch };
        for (const listener of this.listeners) {
            listener(this.state);
        }
    }
}

export function isManager(session: SessionConfig | null): boolean {
    return session?.role === "AM";
}

export function canCreateReports(session: SessionConfig | null): boolean {
    return session?.role === "CCO" || session?.role === "AM";
}

export function roleLabel(role: Role): string {
    return role === "AM" ? "Application Manager" : "Call Center Operator";
}

export function segmentStatus(
    map: MapFeatureCollection | null,
    segmentId: number,
): "open" | "blocked" | null {
    const feature = map?.features.find((f) => f.id === segmentId);
    return feature ? feature.properties.status : null;
}
