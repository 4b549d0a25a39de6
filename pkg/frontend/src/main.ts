// Wiring: form inputs feed the API client, responses feed the session
// store, the store feeds the renderers. Parameter edits are debounced and
// every view applies responses through last-write-wins request-id guards.

import { ApiClient } from "./api.js";
import {
  debounce,
  eventFromLogEntry,
  requestIdNumber,
  SessionStore,
  sweepKey,
} from "./state.js";
import { heatmapPlot, responsePlot, spectrumPlot, sweepPlot } from "./plotdata.js";
import { renderHeatmap, renderResponse, renderSpectrum, renderSweep } from "./views.js";
import type { Envelope } from "./types.js";

const store = new SessionStore();
const api = new ApiClient("", (url, init) => fetch(url, init));

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

const spectrumCanvas = el<HTMLCanvasElement>("spectrum");
const sweepCanvas = el<HTMLCanvasElement>("sweep");
const responseCanvas = el<HTMLCanvasElement>("response");
const heatCanvas = el<HTMLCanvasElement>("heatmap");
const spectrumStatus = el<HTMLElement>("spectrum-status");
const responseStatus = el<HTMLElement>("response-status");
const heatStatus = el<HTMLElement>("heatmap-status");
const bannerEl = el<HTMLElement>("banner");

function redraw(): void {
  const s = store.state;
  renderSpectrum(spectrumCanvas, spectrumPlot(s.certificate, s.rootset), spectrumStatus);
  const key = sweepKey(num("sweep-L"), num("sweep-g"));
  renderSweep(sweepCanvas, sweepPlot(s.sweep[key] ?? []), (tau) => {
    void loadTriple(tau);
  });
  renderResponse(responseCanvas, responsePlot(s.trajectory), responseStatus);
  renderHeatmap(heatCanvas, heatmapPlot(s.field), heatStatus);
  bannerEl.textContent = s.banner ?? "";
}

function num(id: string): number {
  return Number(el<HTMLInputElement>(id).value);
}

function applyEnvelope(path: string, body: Envelope<unknown>): void {
  const event = eventFromLogEntry({ method: "POST", path, body: null, response: body });
  if (event) store.apply(event);
  redraw();
}

async function loadDesign(): Promise<void> {
  const [n, m, tau, s0] = [num("in-n"), num("in-m"), num("in-tau"), num("in-s0")];
  store.setParams({ n, m, tau, s0 });
  try {
    const cert = await api.synthesize(n, m, tau, s0);
    applyEnvelope("/api/synthesize", cert);
    if (cert.ok && cert.data) {
      const sys = cert.data.system;
      const rect = {
        re_lo: s0 - 8.0 / tau,
        re_hi: s0 + 4.0 / tau,
        im_lo: 0.0,
        im_hi: 40.0 / tau,
      };
      applyEnvelope("/api/roots", await api.roots(sys, rect));
      applyEnvelope(
        "/api/simulate",
        await api.simulate(sys, { kind: "polynomial", coeffs: [1.0] }, 15.0 * tau, {
          stride: 5,
          tSkip: 8.0 * tau,
        }),
      );
    }
  } catch (err) {
    store.apply({
      view: "banner",
      requestId: requestIdNumber(null),
      message: `network unavailable: ${String(err)}`,
    });
    redraw();
  }
}

async function loadTriple(tau: number): Promise<void> {
  try {
    const resp = await api.pendulumExample(num("sweep-L"), num("sweep-g"), tau);
    if (resp.ok && resp.data && resp.data.branches) {
      applyEnvelope("/api/examples/pendulum", resp);
      const design = resp.data.branches.plus;
      el<HTMLInputElement>("in-n").value = "2";
      el<HTMLInputElement>("in-m").value = "1";
      el<HTMLInputElement>("in-tau").value = String(design.tau);
      el<HTMLInputElement>("in-s0").value = String(design.s0);
    }
  } catch (err) {
    store.apply({ view: "banner", requestId: 0, message: `network unavailable: ${String(err)}` });
    redraw();
  }
}

async function loadSweep(): Promise<void> {
  const L = num("sweep-L");
  const g = num("sweep-g");
  const hi = Math.sqrt((2 * L) / g);
  const taus: number[] = [];
  for (let i = 1; i <= 24; i += 1) taus.push((hi * i) / 25);
  try {
    for (const tau of taus) {
      const resp = await api.pendulumExample(L, g, tau, false);
      applyEnvelope("/api/examples/pendulum", resp);
    }
  } catch (err) {
    store.apply({ view: "banner", requestId: 0, message: `network unavailable: ${String(err)}` });
    redraw();
  }
}

async function loadTransport(): Promise<void> {
  try {
    const resp = await api.transportExample(num("tr-L"), num("tr-lambda"));
    applyEnvelope("/api/examples/transport", resp);
    if (resp.ok && resp.data) {
      const d = resp.data.design;
      applyEnvelope(
        "/api/roots",
        await api.roots(resp.data.certificate.system, {
          re_lo: d.s0 - 8.0 / d.tau,
          re_hi: d.s0 + 1.0,
          im_lo: 0.0,
          im_hi: 40.0 / d.tau,
        }),
      );
      applyEnvelope(
        "/api/transport-sim",
        await api.transportSim(d.L, d.lambda, d.k_p, d.k_i, 10.0 * d.tau, { nx: 96, stride: 8 }),
      );
    }
  } catch (err) {
    store.apply({ view: "banner", requestId: 0, message: `network unavailable: ${String(err)}` });
    redraw();
  }
}

const debouncedDesign = debounce(() => void loadDesign(), 300);

export function boot(): void {
  for (const id of ["in-n", "in-m", "in-tau", "in-s0"]) {
    el<HTMLInputElement>(id).addEventListener("input", debouncedDesign);
  }
  el<HTMLButtonElement>("btn-design").addEventListener("click", () => void loadDesign());
  el<HTMLButtonElement>("btn-sweep").addEventListener("click", () => void loadSweep());
  el<HTMLButtonElement>("btn-transport").addEventListener("click", () => void loadTransport());
  redraw();
}

if (typeof document !== "undefined" && document.readyState !== "loading") {
  boot();
} else if (typeof document !== "undefined") {
  document.addEventListener("DOMContentLoaded", boot);
}
