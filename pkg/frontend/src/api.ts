// Typed client for the platform's HTTP service. Every figure shown in the
// UI comes verbatim from these responses; nothing is recomputed locally.

import type {
    AssignmentEstimate,
    AssignmentRecord,
    CatalogRow,
    JunctionRecord,
    MapFeatureCollection,
    ReportRecord,
    RouteResponse,
    SegmentRecord,
} from "./types.js";

export class ApiError extends Error {
    status: number;
    code: string;

    constructor(status: number, code: string, message: string) {
        super(message);
        this.status = status;
        this.code = code;
    }
}

export interface ReportCreateBody {
    report_code: string;
    report_comments: string;
    ogr_fid: number;
    location?: [number, number] | null;
}

export interface RouteRequestBody {
    origin: number;
    dest: number;
    profile?: string;
    respect_blockages?: boolean;
    k?: number;
    simulate_naive?: boolean;
}

export class ApiClient {
    private baseUrl: string;
    private token: string | null;

    constructor(baseUrl: string, token: string | null = null) {
        this.baseUrl = baseUrl.replace(/\/$/, "");
        this.token = token;
    }

    setToken(token: string | null): void {
        this.token = token;
    }

    private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
        const headers: Record<string, string> = {};
        if (body !== undefined) {
            headers["Content-Type"] = "application/json";
        }
        if (this.token) {
            headers["Authorization"] = `Bearer ${this.token}`;
        }
        const response = await fetch(`${this.baseUrl}${path}`, {
            method,
            headers,
            body: body === undefined ? undefined : JSON.stringify(body),
        });
        if (!response.ok) {
            let code = "error";
            let message = `${response.status}`;
            try {
                const payload = await response.json();
                code = payload.code ?? code;
                message = payload.message ?? JSON.stringify(payload);
            } catch {
                // non-JSON error body; keep the status text
            }
            throw new ApiError(response.status, code, message);
        }
        if (response.status === 204) {
            return undefined as T;
        }
        return (await response.json()) as T;
    }

    mapGeoJson(): Promise<MapFeatureCollection> {
        return this.request("GET", "/map.geojson");
    }

    junctions(): Promise<JunctionRecord[]> {
        return this.request("GET", "/junctions");
    }

    catalog(): Promise<CatalogRow[]> {
        return this.request("GET", "/catalog");
    }

    segments(): Promise<SegmentRecord[]> {
        return this.request("GET", "/segments");
    }

    segment(id: number): Promise<SegmentRecord> {
        return this.request("GET", `/segments/${id}`);
    }

    updateSegment(id: number, patch: Record<string, unknown>): Promise<SegmentRecord> {
        return this.request("PUT", `/segments/${id}`, patch);
    }

    reports(params: { status?: string; code?: string; ogr_fid?: number } = {}): Promise<ReportRecord[]> {
        const query = new URLSearchParams();
        if (params.status) query.set("status", params.status);
        if (params.code) query.set("code", params.code);
        if (params.ogr_fid !== undefined) query.set("ogr_fid", String(params.ogr_fid));
        const suffix = query.toString() ? `?${query.toString()}` : "";
        return this.request("GET", `/reports${suffix}`);
    }

    createReport(body: ReportCreateBody): Promise<ReportRecord> {
        return this.request("POST", "/reports", body);
    }

    patchReport(id: number, patch: Partial<ReportCreateBody>): Promise<ReportRecord> {
        return this.request("PATCH", `/reports/${id}`, patch);
    }

    resolveReports(reportIds: number[]): Promise<{ resolved: number }> {
        return this.request("POST", "/reports/resolve", { report_ids: reportIds });
    }

    deleteReport(id: number): Promise<void> {
        return this.request("DELETE", `/reports/${id}`);
    }

    assignmentEstimate(reportIds: number[], depot: number): Promise<AssignmentEstimate> {
        const query = new URLSearchParams({
            report_ids: reportIds.join(","),
            depot: String(depot),
        });
        return this.request("GET", `/assignments/estimate?${query.toString()}`);
    }

    createAssignment(
        reportIds: number[],
        assignee: string,
        depotJunction: number,
    ): Promise<AssignmentRecord> {
        return this.request("POST", "/assignments", {
            report_ids: reportIds,
            assignee,
            depot_junction: depotJunction,
        });
    }

    route(body: RouteRequestBody): Promise<RouteResponse> {
        return this.request("POST", "/route", body);
    }
}
