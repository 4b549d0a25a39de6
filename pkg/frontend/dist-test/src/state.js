// Session state: every displayed number originates from an API response.
// Events carry a monotonically comparable request id; stale responses for a
// view are dropped (last write wins per view), so replaying a request log
// reproduces the same state regardless of interleaving.
export function initialState() {
    return {
        params: { n: 1, m: 1, tau: 1.0, s0: -2.0 },
        certificate: null,
        rootset: null,
        trajectory: null,
        field: null,
        sweep: {},
        banner: null,
    };
}
export function requestIdNumber(id) {
    if (!id)
        return 0;
    const m = /^req-(\d+)$/.exec(id);
    return m ? Number(m[1]) : 0;
}
export class SessionStore {
    constructor() {
        this.state = initialState();
        this.applied = {};
    }
    setParams(params) {
        this.state.params = { ...this.state.params, ...params };
    }
    apply(event) {
        const last = this.applied[event.view] ?? -1;
        if (event.requestId < last) {
            return false; // a newer response already owns this view
        }
        this.applied[event.view] = event.requestId;
        switch (event.view) {
            case "certificate":
                this.state.certificate = event.certificate;
                break;
            case "rootset":
                this.state.rootset = event.rootset;
                break;
            case "trajectory":
                this.state.trajectory = event.trajectory;
                break;
            case "field":
                this.state.field = event.field;
                break;
            case "sweep": {
                const points = this.state.sweep[event.key] ?? [];
                // Idempotent: a replayed point replaces its tau slot.
                const rest = points.filter((p) => p.tau !== event.point.tau);
                rest.push(event.point);
                rest.sort((a, b) => a.tau - b.tau);
                this.state.sweep = { ...this.state.sweep, [event.key]: rest };
                break;
            }
            case "banner":
                this.state.banner = event.message;
                break;
        }
        return true;
    }
    replay(log) {
        for (const entry of log) {
            const event = eventFromLogEntry(entry);
            if (event)
                this.apply(event);
        }
    }
}
export function sweepKey(L, g) {
    return `pendulum:${L}:${g}`;
}
// Deterministic mapping from a recorded API exchange to a session event.
export function eventFromLogEntry(entry) {
    const envelope = entry.response;
    const requestId = requestIdNumber(envelope.id ?? extractQueryId(entry.path));
    if (!envelope.ok || envelope.data === undefined) {
        const message = envelope.error ? `${envelope.error.code}: ${envelope.error.message}` : "request failed";
        return { view: "banner", requestId, message };
    }
    const path = entry.path.split("?")[0];
    switch (path) {
        case "/api/synthesize":
            return { view: "certificate", requestId, certificate: envelope.data };
        case "/api/roots":
            return { view: "rootset", requestId, rootset: envelope.data };
        case "/api/simulate":
            return { view: "trajectory", requestId, trajectory: envelope.data };
        case "/api/transport-sim":
            return { view: "field", requestId, field: envelope.data };
        case "/api/examples/pendulum": {
            const data = envelope.data;
            if (data.branches) {
                const d = data.branches.plus;
                return {
                    view: "sweep",
                    requestId,
                    key: sweepKey(d.L, d.g),
                    point: { tau: d.tau, s0: d.s0 },
                };
            }
            if (data.design && data.certificate) {
                return { view: "certificate", requestId, certificate: data.certificate };
            }
            return null;
        }
        case "/api/examples/transport": {
            const data = envelope.data;
            return { view: "certificate", requestId, certificate: data.certificate };
        }
        default:
            return null;
    }
}
function extractQueryId(path) {
    const q = path.split("?")[1];
    if (!q)
        return null;
    return new URLSearchParams(q).get("id");
}
export function debounce(fn, ms) {
    let handle = null;
    return (...args) => {
        if (handle !== null)
            clearTimeout(handle);
        handle = setTimeout(() => fn(...args), ms);
    };
}
