// Reports triage table: sortable columns, multi-select, AM bulk actions with
// a cost preview before assignment is confirmed.

import type { ReportRecord, SessionConfig } from "./types.js";
import { isManager } from "./state.js";

export type SortKey = "id" | "report_code" | "ogr_fid" | "creation_date" | "report_status";

export interface TableHandlers {
    onResolve: (reportIds: number[]) => Promise<void>;
    onAssign: (reportIds: number[]) => Promise<void>;
    onDelete: (reportId: number) => Promise<void>;
    onEdit: (report: ReportRecord) => void;
    onSort: (key: SortKey) => void;
}

export function sortReports(reports: ReportRecord[], key: SortKey, descending: boolean): ReportRecord[] {
    const sorted = [...reports].sort((a, b) => {
        const av = a[key];
        const bv = b[key];
        if (av === bv) return a.id - b.id;
        return (av as never) < (bv as never) ? -1 : 1;
    });
    return descending ? sorted.reverse() : sorted;
}

const COLUMNS: [SortKey | null, string][] = [
    [null, ""],
    ["report_code", "Report Code"],
    [null, "Comments"],
    ["ogr_fid", "Road Key (Aid)"],
    ["creation_date", "Creation Date"],
    [null, "Last Update"],
    ["report_status", "Report Status"],
    [null, "Actions"],
];

export function renderReportsTable(
    reports: ReportRecord[],
    session: SessionConfig | null,
    handlers: TableHandlers,
): HTMLElement {
    const root = document.createElement("div");
    root.className = "reports-panel";
    const heading = document.createElement("h3");
    heading.textContent = "Reports List";
    root.appendChild(heading);

    if (reports.length === 0) {
        const empty = document.createElement("p");
        empty.className = "reports-empty";
        empty.textContent = "No reports.";
        root.appendChild(empty);
        return root;
    }

    const manager = isManager(session);
    const selected = new Set<number>();

    const table = document.createElement("table");
    table.className = "reports-table";
    const head = document.createElement("tr");
    for (const [key, label] of COLUMNS) {
        const th = document.createElement("th");
        th.textContent = label;
        if (key) {
            th.classList.add("sortable");
            th.addEventListener("click", () => handlers.onSort(key));
        }
        head.appendChild(th);
    }
    table.appendChild(head);

    for (const report of reports) {
        const row = document.createElement("tr");
        row.className = `report-row report-row--${report.report_status.toLowerCase()}`;
        row.dataset.reportId = String(report.id);

        const selectCell = document.createElement("td");
        const checkbox = document.createElement("input");
        checkbox.type = "checkbox";
        checkbox.className = "report-select";
        checkbox.addEventListener("change", () => {
            if (checkbox.checked) selected.add(report.id);
            else selected.delete(report.id);
        });
        selectCell.appendChild(checkbox);
        row.appendChild(selectCell);

        for (const text of [
            report.report_code,
            report.report_comments,
            String(report.ogr_fid),
            report.creation_date,
            report.last_update_date,
            report.report_status,
        ]) {
            const cell = document.createElement("td");
            cell.textContent = text;
            row.appendChild(cell);
        }

        const actions = document.createElement("td");
        const edit = document.createElement("button");
        edit.textContent = "Edit";
        edit.className = "report-edit";
        edit.disabled = report.report_status === "Resolved";
        edit.addEventListener("click", () => handlers.onEdit(report));
        actions.appendChild(edit);
        if (manager) {
            const del = document.createElement("button");
            del.textContent = "Delete";
            del.className = "report-delete";
            del.addEventListener("click", () => void handlers.onDelete(report.id));
            actions.appendChild(del);
        }
        row.appendChild(actions);
        table.appendChild(row);
    }
    root.appendChild(table);

    if (manager) {
        const bulk = document.createElement("div");
        bulk.className = "bulk-actions";
        const selectAll = document.createElement("button");
        selectAll.textContent = "Select all";
        selectAll.className = "bulk-select-all";
        selectAll.addEventListener("click", () => {
            for (const box of root.querySelectorAll<HTMLInputElement>(".report-select")) {
                box.checked = true;
                box.dispatchEvent(new Event("change"));
            }
        });
        bulk.appendChild(selectAll);

        const resolve = document.createElement("button");
        resolve.textContent = "Resolve selected";
        resolve.className = "bulk-resolve";
        resolve.addEventListener("click", () => void handlers.onResolve([...selected]));
        bulk.appendChild(resolve);

        const assign = document.createElement("button");
        assign.textContent = "Assign selected";
        assign.className = "bulk-assign";
        assign.addEventListener("click", () => void handlers.onAssign([...selected]));
        bulk.appendChild(assign);

        root.appendChild(bulk);
    }
    return root;
}
