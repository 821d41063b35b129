// Shapes of the HTTP service's payloads, as consumed by the client.

export type Role = "CCO" | "AM";

export interface SessionConfig {
    baseUrl: string;
    token: string;
    role: Role;
}

export interface SegmentRecord {
    id: number;
    ogr_fid: number;
    road_type: string;
    road_width: number;
    slope: number;
    transverse_slope: number;
    ditch: boolean;
    ditch_type: string;
    aspect: number;
    slope_height: number;
    creation_date: string | null;
    soil_category: string;
    soil_profile: string;
    technical_works: boolean;
    type_of_technical_work: string;
    length_m: number;
    status: "open" | "blocked";
    active_report_count: number;
}

export interface ReportRecord {
    id: number;
    report_code: string;
    report_comments: string;
    ogr_fid: number;
    location: [number, number] | null;
    creation_date: string;
    last_update_date: string;
    report_status: "Active" | "Assigned" | "Resolved";
    reporter: string;
    assignee: string | null;
}

export interface CatalogRow {
    code: string;
    blocks_traffic: boolean;
    base_cost: number;
    rate_per_km: number;
}

export interface JunctionRecord {
    id: number;
    lon: number;
    lat: number;
    incident_segments: number[];
}

export interface MapFeature {
    type: "Feature";
    id: number;
    geometry: { type: "LineString"; coordinates: [number, number][] };
    properties: {
        status: "open" | "blocked";
        active_report_count: number;
        road_type: string;
        [key: string]: unknown;
    };
}

export interface MapFeatureCollection {
    type: "FeatureCollection";
    features: MapFeature[];
}

export interface RoutePlanPayload {
    label?: string;
    segment_ids: number[];
    junction_ids: number[];
    distance_m: number;
    time_min: number;
    time_min_display: string;
    feasible: boolean;
}

export interface DriveTracePayload {
    label?: string;
    legs: { segment_id: number; direction: string; purpose: string }[];
    total_distance_m: number;
    total_time_min: number;
    time_min_display: string;
    encountered_blockages: number[];
    feasible: boolean;
}

export interface RouteResponse {
    baseline: RoutePlanPayload;
    naive: DriveTracePayload | null;
    alternatives: RoutePlanPayload[];
    pct_change_d: Record<string, number>;
    pct_change_t: Record<string, number>;
    time_improvement_vs_naive: Record<string, number>;
    display: {
        pct_change_d: Record<string, string>;
        pct_change_t: Record<string, string>;
        time_improvement_vs_naive: Record<string, string>;
    };
    blocked_segments: number[];
    profile: { name: string; speed_kmh: number };
}

export interface RouteQuery {
    origin: number | null;
    dest: number | null;
    k: number;
    respectBlockages: boolean;
    simulateNaive: boolean;
}

export interface AssignmentEstimate {
    total: number;
    per_report: Record<
        string,
        {
            total: number;
            base_cost: number;
            rate_per_km: number;
            distance_km: number | null;
            distance_available: boolean;
        }
    >;
}

export interface AssignmentRecord {
    id: number;
    report_ids: number[];
    assignee: string;
    estimated_cost: number;
    created: string;
}
