// Typed client for the design service. The fetch implementation is
// injected so tests can intercept every request; an optional recorder
// captures (request, response) pairs for deterministic replay.
export class ApiClient {
    constructor(base, fetchImpl, recorder = null) {
        this.base = base;
        this.fetchImpl = fetchImpl;
        this.recorder = recorder;
        this.seq = 0;
    }
    nextRequestId() {
        this.seq += 1;
        return `req-${this.seq}`;
    }
    async post(path, payload) {
        const body = { ...payload, id: this.nextRequestId() };
        const resp = await this.fetchImpl(this.base + path, {
            method: "POST",
            headers: { "Content-Type": "application/json" },
            body: JSON.stringify(body),
        });
        const envelope = (await resp.json());
        if (this.recorder) {
            this.recorder.push({ method: "POST", path, body, response: envelope });
        }
        return envelope;
    }
    async get(path, params) {
        const qs = new URLSearchParams({ ...params, id: this.nextRequestId() });
        const full = `${path}?${qs.toString()}`;
        const resp = await this.fetchImpl(this.base + full, { method: "GET" });
        const envelope = (await resp.json());
        if (this.recorder) {
            this.recorder.push({ method: "GET", path: full, body: null, response: envelope });
        }
        return envelope;
    }
    synthesize(n, m, tau, s0) {
        return this.post("/api/synthesize", { n, m, tau, s0 });
    }
    roots(system, rect) {
        return this.post("/api/roots", { system, rect });
    }
    chain(n, window) {
        return this.post("/api/chain", { n, window });
    }
    simulate(system, history, tEnd, opts = {}) {
        const payload = { system, history, t_end: tEnd };
        if (opts.stride !== undefined)
            payload.stride = opts.stride;
        if (opts.tSkip !== undefined)
            payload.t_skip = opts.tSkip;
        return this.post("/api/simulate", payload);
    }
    transportSim(L, lambda, kP, kI, tEnd, opts = {}) {
        const payload = { L, lambda, k_p: kP, k_i: kI, t_end: tEnd };
        if (opts.nx !== undefined)
            payload.nx = opts.nx;
        if (opts.stride !== undefined)
            payload.stride = opts.stride;
        return this.post("/api/transport-sim", payload);
    }
    pendulumExample(L, g, tau, certify = true) {
        const params = { L: String(L), g: String(g) };
        if (tau !== undefined)
            params.tau = String(tau);
        if (!certify)
            params.certify = "0";
        return this.get("/api/examples/pendulum", params);
    }
    transportExample(L, lambda, certify = true) {
        const params = { L: String(L), lambda: String(lambda) };
        if (!certify)
            params.certify = "0";
        return this.get("/api/examples/transport", params);
    }
}
