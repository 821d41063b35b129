import { describe, expect, it, vi } from "vitest";

import { renderRoutePanel, scenarioRows } from "../src/route_panel.js";
import type { RouteQuery, RouteResponse } from "../src/types.js";

const RESULT: RouteResponse = {
    baseline: {
        segment_ids: [110, 145, 189],
        junction_ids: [1, 2, 3, 5],
        distance_m: 7769,
        time_min: 33.295714285714286,
        time_min_display: "33.29",
        feasible: true,
    },
    naive: {
        legs: [],
        total_distance_m: 13603,
        total_time_min: 58.29857142857143,
        time_min_display: "58.29",
        encountered_blockages: [189],
        feasible: true,
    },
    alternatives: [
        {
            segment_ids: [110, 203, 214],
            junction_ids: [1, 2, 6, 5],
            distance_m: 8256,
            time_min: 35.38285714285714,
            time_min_display: "35.38",
            feasible: true,
        },
        {
            segment_ids: [152, 176],
            junction_ids: [1, 4, 5],
            distance_m: 9775,
            time_min: 41.892857142857146,
            time_min_display: "41.89",
            feasible: true,
        },
    ],
    pct_change_d: { B: 75.09, C: 6.2685, D: 25.8205 },
    pct_change_t: { B: 75.09, C: 6.2685, D: 25.8205 },
    time_improvement_vs_naive: { C: 68.8248, D: 49.2727 },
    display: {
        pct_change_d: { B: "75.09", C: "6.26", D: "25.82" },
        pct_change_t: { B: "75.09", C: "6.26", D: "25.82" },
        time_improvement_vs_naive: { C: "68.82", D: "49.27" },
    },
    blocked_segments: [189],
    profile: { name: "standard", speed_kmh: 14 },
};

const QUERY: RouteQuery = { origin: 1, dest: 5, k: 2, respectBlockages: true, simulateNaive: true };

const HANDLERS = {
    onPickOrigin: vi.fn(),
    onPickDest: vi.fn(),
    onQueryChange: vi.fn(),
    onRun: vi.fn(async () => {}),
};

describe("scenarioRows", () => {
    it("reproduces the service's display strings verbatim", () => {
        const rows = scenarioRows(RESULT);
        expect(rows.map((r) => [r.label, r.distanceKm, r.timeMin, r.pctD, r.improvement])).toEqual([
            ["A", "7.769", "33.29", "", ""],
            ["B", "13.603", "58.29", "75.09", ""],
            ["C", "8.256", "35.38", "6.26", "68.82"],
            ["D", "9.775", "41.89", "25.82", "49.27"],
        ]);
    });

    it("omits the naive row when absent", () => {
        const rows = scenarioRows({ ...RESULT, naive: null });
        expect(rows.map((r) => r.label)).toEqual(["A", "C", "D"]);
    });
});

describe("renderRoutePanel", () => {
    it("renders the side table with percentage labels", () => {
        const root = renderRoutePanel(QUERY, RESULT, null, HANDLERS);
        const rowC = root.querySelector(".route-row--C")!;
        const pctLabel = Number(rowC.children[3].textContent);
        expect(Math.abs(pctLabel - 6.27)).toBeLessThanOrEqual(0.02);
        expect(rowC.children[4].textContent).toBe("68.82");
    });

    it("disables the run button until both endpoints picked", () => {
        const root = renderRoutePanel(
            { ...QUERY, origin: null },
            null,
            null,
            HANDLERS,
        );
        expect((root.querySelector(".route-run") as HTMLButtonElement).disabled).toBe(true);
    });

    it("shows a visible error for unreachable pairs", () => {
        const root = renderRoutePanel(QUERY, null, "422: destination not reachable", HANDLERS);
        expect(root.querySelector(".route-error")?.textContent).toContain("422");
    });

    it("propagates query changes", () => {
        const onQueryChange = vi.fn();
        const root = renderRoutePanel(QUERY, null, null, { ...HANDLERS, onQueryChange });
        const k = root.querySelector(".route-k") as HTMLInputElement;
        k.value = "3";
        k.dispatchEvent(new Event("change"));
        expect(onQueryChange).toHaveBeenCalledWith({ k: 3 });
    });
});
