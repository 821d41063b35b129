// Wires the store, the API client, and the panels into one page.

import { ApiClient, ApiError } from "./api.js";
import { renderDetails, renderEditForm, renderReportForm } from "./forms.js";
import { createMapView, nearestJunction, type MapView } from "./map.js";
import { renderReportsTable, sortReports, type SortKey } from "./reports_table.js";
import { renderRoutePanel } from "./route_panel.js";
import { Store, canCreateReports, emptyDraft, isManager } from "./state.js";
import type { ReportRecord, SessionConfig } from "./types.js";

const JUNCTION_PICK_THRESHOLD_PX = 14;

export class App {
    readonly store: Store;
    readonly api: ApiClient;
    private map: MapView | null = null;
    private actionPane: HTMLElement;
    private reportsPane: HTMLElement;
    private routePane: HTMLElement;
    private sortKey: SortKey = "creation_date";
    private sortDescending = true;
    private routeError: string | null = null;
    private activePanel: "none" | "details" | "edit" | "report" = "none";

    constructor(root: HTMLElement, session: SessionConfig) {
        this.store = new Store(session);
        this.api = new ApiClient(session.baseUrl, session.token);

        const mapPane = document.createElement("div");
        mapPane.className = "pane pane--map";
        this.actionPane = document.createElement("div");
        this.actionPane.className = "pane pane--actions";
        this.reportsPane = document.createElement("div");
        this.reportsPane.className = "pane pane--reports";
        this.routePane = document.createElement("div");
        this.routePane.className = "pane pane--route";
        root.append(mapPane, this.actionPane, this.routePane, this.reportsPane);

        this.map = createMapView(mapPane, 640, 640, {
            onSegmentClick: (segmentId) => void this.selectSegment(segmentId),
            onCanvasClick: (x, y) => this.handleCanvasClick(x, y),
        });

        this.store.subscribe(() => this.renderAll());
    }

    async start(): Promise<void> {
        const [map, junctions, catalog, reports] = await Promise.all([
            this.api.mapGeoJson(),
            this.api.junctions(),
            this.api.catalog(),
            this.api.reports(),
        ]);
        this.store.update({ map, junctions, catalog, reports });
    }

    async refreshMap(): Promise<void> {
        this.store.update({ map: await this.api.mapGeoJson() });
    }

    async refreshReports(): Promise<void> {
        this.store.update({ reports: await this.api.reports() });
    }

    async selectSegment(segmentId: number): Promise<void> {
        const segment = await this.api.segment(segmentId);
        this.activePanel = "details";
        this.store.update({ selectedSegment: segment });
    }

    handleCanvasClick(x: number, y: number): void {
        const state = this.store.get();
        if (state.pickMode === "select" || !this.map) {
            return;
        }
        if (state.pickMode === "pick-location") {
            const inverted = this.map.projection.invert?.([x, y]);
            if (inverted) {
                this.store.update({
                    draftReport: { ...state.draftReport, location: [inverted[0], inverted[1]] },
                    pickMode: "select",
                });
            }
            return;
        }
        const junction = nearestJunction(
            state.junctions,
            this.map.projection,
            x,
            y,
            JUNCTION_PICK_THRESHOLD_PX,
        );
        if (!junction) {
            return;
        }
        if (state.pickMode === "pick-origin") {
            this.store.update({
                routeQuery: { ...state.routeQuery, origin: junction.id },
                pickMode: "select",
            });
        } else if (state.pickMode === "pick-dest") {
            this.store.update({
                routeQuery: { ...state.routeQuery, dest: junction.id },
                pickMode: "select",
            });
        }
    }

    openEditForm(): void {
        this.activePanel = "edit";
        this.renderAll();
    }

    openReportForm(): void {
        this.activePanel = "report";
        this.store.update({ draftReport: emptyDraft() });
    }

    async submitReport(code: string, comments: string): Promise<void> {
        const state = this.store.get();
        const segment = state.selectedSegment;
        if (!segment) {
            throw new Error("select a segment first");
        }
        await this.api.createReport({
            report_code: code,
            report_comments: comments,
            ogr_fid: segment.id,
            location: state.draftReport.location,
        });
        this.activePanel = "details";
        // restyle without a full reload: only the map feed and report list refresh
        await Promise.all([this.refreshMap(), this.refreshReports()]);
        await this.selectSegment(segment.id);
    }

    async submitEdit(patch: Record<string, unknown>): Promise<void> {
        const state = this.store.get();
        if (!state.selectedSegment) {
            throw new Error("select a segment first");
        }
        const updated = await this.api.updateSegment(state.selectedSegment.id, patch);
        this.activePanel = "details";
        this.store.update({ selectedSegment: updated });
        await this.refreshMap();
    }

    async resolveReports(reportIds: number[]): Promise<void> {
        if (reportIds.length === 0) return;
        await this.api.resolveReports(reportIds);
        await Promise.all([this.refreshMap(), this.refreshReports()]);
    }

    async assignReports(reportIds: number[]): Promise<void> {
        if (reportIds.length === 0) return;
        const state = this.store.get();
        const depot = state.routeQuery.origin ?? state.junctions[0]?.id;
        if (depot === undefined) return;
        const estimate = await this.api.assignmentEstimate(reportIds, depot);
        const message =
            `Assign ${reportIds.length} report(s) from junction ${depot}?\n` +
            `Estimated cost: ${estimate.total.toFixed(2)}`;
        if (!window.confirm(message)) {
            return;
        }
        const assignee = window.prompt("Assignee user id", "am1") ?? "am1";
        await this.api.createAssignment(reportIds, assignee, depot);
        await this.refreshReports();
    }

    async deleteReport(reportId: number): Promise<void> {
        await this.api.deleteReport(reportId);
        await Promise.all([this.refreshMap(), this.refreshReports()]);
    }

    async runRoute(): Promise<void> {
        const state = this.store.get();
        const { origin, dest, k, respectBlockages, simulateNaive } = state.routeQuery;
        if (origin === null || dest === null) return;
        this.routeError = null;
        try {
            const result = await this.api.route({
                origin,
                dest,
                k,
                respect_blockages: respectBlockages,
                simulate_naive: simulateNaive,
            });
            this.store.update({ routeResult: result });
        } catch (error) {
            this.routeError = error instanceof ApiError ? `${error.status}: ${error.message}` : String(error);
            this.store.update({ routeResult: null });
        }
    }

    private renderActionPane(): void {
        const state = this.store.get();
        this.actionPane.replaceChildren();
        const segment = state.selectedSegment;
        if (!segment) {
            const hint = document.createElement("p");
            hint.className = "action-hint";
            hint.textContent = "Click a road segment to see its actions.";
            this.actionPane.appendChild(hint);
            return;
        }

        const menu = document.createElement("div");
        menu.className = "action-menu";
        const details = document.createElement("button");
        details.className = "action-details";
        details.textContent = "Details";
        details.addEventListener("click", () => {
            this.activePanel = "details";
            this.renderAll();
        });
        menu.appendChild(details);
        const edit = document.createElement("button");
        edit.className = "action-edit";
        edit.textContent = "Edit";
        edit.addEventListener("click", () => this.openEditForm());
        menu.appendChild(edit);
        if (canCreateReports(state.session)) {
            const report = document.createElement("button");
            report.className = "action-report";
            report.textContent = "Report a new problem";
            report.addEventListener("click", () => this.openReportForm());
            menu.appendChild(report);
        }
        this.actionPane.appendChild(menu);

        if (this.activePanel === "details") {
            this.actionPane.appendChild(renderDetails(segment));
        } else if (this.activePanel === "edit") {
            this.actionPane.appendChild(renderEditForm(segment, (patch) => this.submitEdit(patch)));
        } else if (this.activePanel === "report") {
            this.actionPane.appendChild(
                renderReportForm(state.catalog, state.draftReport.location, {
                    onSubmit: (code, comments) => this.submitReport(code, comments),
                    onPickLocation: () => this.store.update({ pickMode: "pick-location" }),
                }),
            );
        }
    }

    private renderAll(): void {
        const state = this.store.get();
        if (this.map && state.map) {
            this.map.render(
                state.map,
                state.junctions,
                state.selectedSegment?.id ?? null,
                state.routeResult,
                { origin: state.routeQuery.origin, dest: state.routeQuery.dest },
            );
        }
        this.renderActionPane();

        this.reportsPane.replaceChildren(
            renderReportsTable(
                sortReports(state.reports, this.sortKey, this.sortDescending),
                state.session,
                {
                    onResolve: (ids) => this.resolveReports(ids),
                    onAssign: (ids) => this.assignReports(ids),
                    onDelete: (id) => this.deleteReport(id),
                    onEdit: (report: ReportRecord) => void this.selectSegment(report.ogr_fid),
                    onSort: (key) => {
                        if (key === this.sortKey) this.sortDescending = !this.sortDescending;
                        else this.sortKey = key;
                        this.renderAll();
                    },
                },
            ),
        );

        this.routePane.replaceChildren(
            renderRoutePanel(state.routeQuery, state.routeResult, this.routeError, {
                onPickOrigin: () => this.store.update({ pickMode: "pick-origin" }),
                onPickDest: () => this.store.update({ pickMode: "pick-dest" }),
                onQueryChange: (patch) =>
                    this.store.update({ routeQuery: { ...this.store.get().routeQuery, ...patch } }),
                onRun: () => this.runRoute(),
            }),
        );
    }
}

export function mountApp(root: HTMLElement, session: SessionConfig): App {
    const app = new App(root, session);
    void app.start();
    return app;
}

export { isManager };
