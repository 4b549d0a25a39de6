// Typed client for the design service. The fetch implementation is
// injected so tests can intercept every request; an optional recorder
// captures (request, response) pairs for deterministic replay.

import type {
  ChainJson,
  Envelope,
  PendulumExample,
  RootSetJson,
  TrajectoryJson,
  TransportExample,
  FieldJson,
  Certificate,
  DelaySystem,
  RectangleJson,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export interface ApiLogEntry {
  method: "GET" | "POST";
  path: string;
  body: unknown | null;
  response: Envelope<unknown>;
}

export class ApiClient {
  private seq = 0;

  constructor(
    private readonly base: string,
    private readonly fetchImpl: FetchLike,
    private readonly recorder: ApiLogEntry[] | null = null,
  ) {}

  nextRequestId(): string {
    this.seq += 1;
    return `req-${this.seq}`;
  }

  private async post<T>(path: string, payload: Record<string, unknown>): Promise<Envelope<T>> {
    const body = { ...payload, id: this.nextRequestId() };
    const resp = await this.fetchImpl(this.base + path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    const envelope = (await resp.json()) as Envelope<T>;
    if (this.recorder) {
      this.recorder.push({ method: "POST", path, body, response: envelope as Envelope<unknown> });
    }
    return envelope;
  }

  private async get<T>(path: string, params: Record<string, string>): Promise<Envelope<T>> {
    const qs = new URLSearchParams({ ...params, id: this.nextRequestId() });
    const full = `${path}?${qs.toString()}`;
    const resp = await this.fetchImpl(this.base + full, { method: "GET" });
    const envelope = (await resp.json()) as Envelope<T>;
    if (this.recorder) {
      this.recorder.push({ method: "GET", path: full, body: null, response: envelope as Envelope<unknown> });
    }
    return envelope;
  }

  synthesize(n: number, m: number, tau: number, s0: number): Promise<Envelope<Certificate>> {
    return this.post("/api/synthesize", { n, m, tau, s0 });
  }

  roots(system: DelaySystem, rect: RectangleJson): Promise<Envelope<RootSetJson>> {
    return this.post("/api/roots", { system, rect });
  }

  chain(n: number, window: number): Promise<Envelope<ChainJson>> {
    return this.post("/api/chain", { n, window });
  }

  simulate(
    system: DelaySystem,
    history: Record<string, unknown>,
    tEnd: number,
    opts: { stride?: number; tSkip?: number } = {},
  ): Promise<Envelope<TrajectoryJson>> {
    const payload: Record<string, unknown> = { system, history, t_end: tEnd };
    if (opts.stride !== undefined) payload.stride = opts.stride;
    if (opts.tSkip !== undefined) payload.t_skip = opts.tSkip;
    return this.post("/api/simulate", payload);
  }

  transportSim(
    L: number,
    lambda: number,
    kP: number,
    kI: number,
    tEnd: number,
    opts: { nx?: number; stride?: number } = {},
  ): Promise<Envelope<FieldJson>> {
    const payload: Record<string, unknown> = { L, lambda, k_p: kP, k_i: kI, t_end: tEnd };
    if (opts.nx !== undefined) payload.nx = opts.nx;
    if (opts.stride !== undefined) payload.stride = opts.stride;
    return this.post("/api/transport-sim", payload);
  }

  pendulumExample(L: number, g: number, tau?: number, certify = true): Promise<Envelope<PendulumExample>> {
    const params: Record<string, string> = { L: String(L), g: String(g) };
    if (tau !== undefined) params.tau = String(tau);
    if (!certify) params.certify = "0";
    return this.get("/api/examples/pendulum", params);
  }

  transportExample(L: number, lambda: number, certify = true): Promise<Envelope<TransportExample>> {
    const params: Record<string, string> = { L: String(L), lambda: String(lambda) };
    if (!certify) params.certify = "0";
    return this.get("/api/examples/transport", params);
  }
}
