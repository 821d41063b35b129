// Segment details/edit forms and the report-a-problem form.

import type { CatalogRow, SegmentRecord } from "./types.js";

const DETAIL_FIELDS: [keyof SegmentRecord, string][] = [
    ["road_type", "Road Type"],
    ["road_width", "Road Width"],
    ["slope", "Slope"],
    ["transverse_slope", "Transverse Slope"],
    ["ditch", "Ditch"],
    ["ditch_type", "Ditch Type"],
    ["aspect", "Aspect"],
    ["slope_height", "Slope Height"],
    ["creation_date", "Creation Date"],
    ["soil_category", "Soil Category"],
    ["soil_profile", "Soil Profile"],
    ["technical_works", "Technical Works"],
    ["type_of_technical_work", "Type Of Technical Work"],
];

const EDITABLE_FIELDS: (keyof SegmentRecord)[] = [
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
];

function el<K extends keyof HTMLElementTagNameMap>(
    tag: K,
    className?: string,
    text?: string,
): HTMLElementTagNameMap[K] {
    const node = document.createElement(tag);
    if (className) node.className = className;
    if (text !== undefined) node.textContent = text;
    return node;
}

export function renderDetails(segment: SegmentRecord): HTMLElement {
    const root = el("div", "segment-details");
    root.appendChild(el("h3", undefined, `Segment ${segment.id}`));
    const table = el("table", "details-table");
    for (const [field, label] of DETAIL_FIELDS) {
        const row = el("tr");
        row.appendChild(el("th", undefined, label));
        const value = segment[field];
        row.appendChild(el("td", undefined, value === null ? "" : String(value)));
        table.appendChild(row);
    }
    const lengthRow = el("tr");
    lengthRow.appendChild(el("th", undefined, "Length (m)"));
    lengthRow.appendChild(el("td", undefined, segment.length_m.toFixed(1)));
    table.appendChild(lengthRow);
    const statusRow = el("tr");
    statusRow.appendChild(el("th", undefined, "Status"));
    statusRow.appendChild(el("td", `status status--${segment.status}`, segment.status));
    table.appendChild(statusRow);
    root.appendChild(table);
    return root;
}

export function renderEditForm(
    segment: SegmentRecord,
    onSubmit: (patch: Record<string, unknown>) => Promise<void>,
): HTMLFormElement {
    const form = el("form", "edit-form") as HTMLFormElement;
    form.appendChild(el("h3", undefined, `Edit Road ${segment.id}`));
    const errorBox = el("p", "form-error");
    errorBox.style.display = "none";
    form.appendChild(errorBox);

    const inputs = new Map<string, HTMLInputElement>();
    for (const field of EDITABLE_FIELDS) {
        const label = el("label", "edit-field");
        label.appendChild(el("span", undefined, field));
        const input = el("input") as HTMLInputElement;
        input.name = field;
        const value = segment[field];
        if (typeof value === "boolean") {
            input.type = "checkbox";
            input.checked = value;
        } else {
            input.type = "text";
            input.value = value === null ? "" : String(value);
        }
        label.appendChild(input);
        form.appendChild(label);
        inputs.set(field, input);
    }

    const submit = el("button", "submit-edit", "Save") as HTMLButtonElement;
    submit.type = "submit";
    form.appendChild(submit);

    form.addEventListener("submit", async (event) => {
        event.preventDefault();
        const patch: Record<string, unknown> = {};
        for (const field of EDITABLE_FIELDS) {
            const input = inputs.get(field)!;
            const original = segment[field];
            if (input.type === "checkbox") {
                if (input.checked !== original) patch[field] = input.checked;
            } else {
                const raw = input.value.trim();
                const originalText = original === null ? "" : String(original);
                if (raw === originalText) continue;
                patch[field] = typeof original === "number" ? Number(raw) : raw || null;
            }
        }
        errorBox.style.display = "none";
        try {
            await onSubmit(patch);
        } catch (error) {
            errorBox.textContent = error instanceof Error ? error.message : String(error);
            errorBox.style.display = "block";
        }
    });
    return form;
}

export interface ReportFormHandlers {
    onSubmit: (code: string, comments: string) => Promise<void>;
    onPickLocation: () => void;
}

export function renderReportForm(
    catalog: CatalogRow[],
    location: [number, number] | null,
    handlers: ReportFormHandlers,
): HTMLFormElement {
    const form = el("form", "report-form") as HTMLFormElement;
    form.appendChild(el("h3", undefined, "Report Problem"));
    const errorBox = el("p", "form-error");
    errorBox.style.display = "none";
    form.appendChild(errorBox);

    const typeLabel = el("label", "report-field");
    typeLabel.appendChild(el("span", undefined, "Problem type"));
    const select = el("select") as HTMLSelectElement;
    select.name = "report_code";
    const placeholder = el("option", undefined, "choose a type") as HTMLOptionElement;
    placeholder.value = "";
    select.appendChild(placeholder);
    for (const row of catalog) {
        const option = el("option", undefined, row.code) as HTMLOptionElement;
        option.value = row.code;
        select.appendChild(option);
    }
    typeLabel.appendChild(select);
    form.appendChild(typeLabel);

    const commentsLabel = el("label", "report-field");
    commentsLabel.appendChild(el("span", undefined, "Comments"));
    const comments = el("textarea") as HTMLTextAreaElement;
    comments.name = "report_comments";
    commentsLabel.appendChild(comments);
    form.appendChild(commentsLabel);

    const locationRow = el("div", "report-location");
    locationRow.appendChild(
        el(
            "span",
            "location-value",
            location ? `location: ${location[0].toFixed(5)}, ${location[1].toFixed(5)}` : "no location set",
        ),
    );
    const pick = el("button", "pick-location", "Pick on map") as HTMLButtonElement;
    pick.type = "button";
    pick.addEventListener("click", () => handlers.onPickLocation());
    locationRow.appendChild(pick);
    form.appendChild(locationRow);

    const note = el("p", "report-note", "Creation time is assigned by the server on submit.");
    form.appendChild(note);

    const submit = el("button", "submit-report", "Complete") as HTMLButtonElement;
    submit.type = "submit";
    form.appendChild(submit);

    form.addEventListener("submit", async (event) => {
        event.preventDefault();
        errorBox.style.display = "none";
        if (!select.value) {
            errorBox.textContent = "choose a problem type first";
            errorBox.style.display = "block";
            return;
        }
        try {
            await handlers.onSubmit(select.value, comments.value);
        } catch (error) {
            errorBox.textContent = error instanceof Error ? error.message : String(error);
            errorBox.style.display = "block";
        }
    });
    return form;
}
