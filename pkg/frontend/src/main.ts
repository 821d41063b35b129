// Entry point: read session config (service URL + token + role), mount.

import { mountApp } from "./app.js";
import type { Role, SessionConfig } from "./types.js";

function savedSession(): SessionConfig | null {
    try {
        const raw = window.localStorage.getItem("frmp.session");
        if (!raw) return null;
        const parsed = JSON.parse(raw);
        if (parsed.baseUrl && parsed.token && parsed.role) {
            return parsed as SessionConfig;
        }
    } catch {
        // fall through to the login form
    }
    return null;
}

function renderLogin(root: HTMLElement): void {
    const form = document.createElement("form");
    form.className = "login-form";
    form.innerHTML = `
        <h2>Forest Road Map</h2>
        <label>Service URL <input name="baseUrl" value="${window.location.origin}"></label>
        <label>Token <input name="token" value=""></label>
        <label>Role
            <select name="role">
                <option value="CCO">CCO (call center operator)</option>
                <option value="AM">AM (application manager)</option>
            </select>
        </label>
        <button type="submit">Open map</button>
    `;
    form.addEventListener("submit", (event) => {
        event.preventDefault();
        const data = new FormData(form);
        const session: SessionConfig = {
            baseUrl: String(data.get("baseUrl")),
            token: String(data.get("token")),
            role: String(data.get("role")) as Role,
        };
        window.localStorage.setItem("frmp.session", JSON.stringify(session));
        root.replaceChildren();
        mountApp(root, session);
    });
    root.appendChild(form);
}

export function boot(): void {
    const root = document.getElementById("app");
    if (!root) {
        throw new Error("missing #app container");
    }
    const session = savedSession();
    if (session) {
        mountApp(root, session);
    } else {
        renderLogin(root);
    }
}

if (typeof document !== "undefined" && document.getElementById("app")) {
    boot();
}
