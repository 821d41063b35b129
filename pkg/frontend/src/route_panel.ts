// Route planner: origin/destination picked on the map, k alternatives, and
// the per-scenario comparison table. All figures shown are the service's
// display strings, reproduced verbatim.

import type { RouteQuery, RouteResponse } from "./types.js";

export interface RoutePanelHandlers {
    onPickOrigin: () => void;
    onPickDest: () => void;
    onQueryChange: (patch: Partial<RouteQuery>) => void;
    onRun: () => Promise<void>;
}

export function scenarioRows(result: RouteResponse): {
    label: string;
    distanceKm: string;
    timeMin: string;
    pctD: string;
    improvement: string;
}[] {
    const rows = [
        {
            label: "A",
            distanceKm: (result.baseline.distance_m / 1000).toFixed(3),
            timeMin: result.baseline.time_min_display,
            pctD: "",
            improvement: "",
        },
    ];
    if (result.naive) {
        rows.push({
            label: "B",
            distanceKm: (result.naive.total_distance_m / 1000).toFixed(3),
            timeMin: result.naive.time_min_display,
            pctD: result.display.pct_change_d["B"] ?? "",
            improvement: "",
        });
    }
    result.alternatives.forEach((alt, i) => {
        const label = String.fromCharCode("C".charCodeAt(0) + i);
        rows.push({
            label,
            distanceKm: (alt.distance_m / 1000).toFixed(3),
            timeMin: alt.time_min_display,
            pctD: result.display.pct_change_d[label] ?? "",
            improvement: result.display.time_improvement_vs_naive[label] ?? "",
        });
    });
    return rows;
}

export function renderRoutePanel(
    query: RouteQuery,
    result: RouteResponse | null,
    error: string | null,
    handlers: RoutePanelHandlers,
): HTMLElement {
    const root = document.createElement("div");
    root.className = "route-panel";
    const heading = document.createElement("h3");
    heading.textContent = "Route planner";
    root.appendChild(heading);

    const controls = document.createElement("div");
    controls.className = "route-controls";

    const origin = document.createElement("button");
    origin.className = "pick-origin";
    origin.textContent = query.origin === null ? "Pick origin" : `Origin: junction ${query.origin}`;
    origin.addEventListener("click", () => handlers.onPickOrigin());
    controls.appendChild(origin);

    const dest = document.createElement("button");
    dest.className = "pick-dest";
    dest.textContent = query.dest === null ? "Pick destination" : `Destination: junction ${query.dest}`;
    dest.addEventListener("click", () => handlers.onPickDest());
    controls.appendChild(dest);

    const kLabel = document.createElement("label");
    kLabel.textContent = "alternatives ";
    const kInput = document.createElement("input");
    kInput.type = "number";
    kInput.min = "1";
    kInput.value = String(query.k);
    kInput.className = "route-k";
    kInput.addEventListener("change", () => handlers.onQueryChange({ k: Number(kInput.value) }));
    kLabel.appendChild(kInput);
    controls.appendChild(kLabel);

    const respectLabel = document.createElement("label");
    const respect = document.createElement("input");
    respect.type = "checkbox";
    respect.checked = query.respectBlockages;
    respect.className = "route-respect";
    respect.addEventListener("change", () =>
        handlers.onQueryChange({ respectBlockages: respect.checked }),
    );
    respectLabel.appendChild(respect);
    respectLabel.appendChild(document.createTextNode(" respect blockages"));
    controls.appendChild(respectLabel);

    const naiveLabel = document.createElement("label");
    const naive = document.createElement("input");
    naive.type = "checkbox";
    naive.checked = query.simulateNaive;
    naive.className = "route-naive";
    naive.addEventListener("change", () => handlers.onQueryChange({ simulateNaive: naive.checked }));
    naiveLabel.appendChild(naive);
    naiveLabel.appendChild(document.createTextNode(" simulate naive drive"));
    controls.appendChild(naiveLabel);

    const run = document.createElement("button");
    run.className = "route-run";
    run.textContent = "Compute routes";
    run.disabled = query.origin === null || query.dest === null;
    run.addEventListener("click", () => void handlers.onRun());
    controls.appendChild(run);

    root.appendChild(controls);

    if (error) {
        const box = document.createElement("p");
        box.className = "route-error";
        box.textContent = error;
        root.appendChild(box);
    }

    if (result) {
        const table = document.createElement("table");
        table.className = "route-table";
        const head = document.createElement("tr");
        for (const label of ["Scenario", "d (km)", "t (min)", "Δd vs A (%)", "time saved vs B (%)"]) {
            const th = document.createElement("th");
            th.textContent = label;
            head.appendChild(th);
        }
        table.appendChild(head);
        for (const row of scenarioRows(result)) {
            const tr = document.createElement("tr");
            tr.className = `route-row route-row--${row.label}`;
            for (const text of [row.label, row.distanceKm, row.timeMin, row.pctD, row.improvement]) {
                const td = document.createElement("td");
                td.textContent = text;
                tr.appendChild(td);
            }
            table.appendChild(tr);
        }
        root.appendChild(table);
    }
    return root;
}
