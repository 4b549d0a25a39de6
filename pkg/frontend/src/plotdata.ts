// Pure transforms from API payloads to plot-ready data. Nothing here
// computes roots, gains, or rates; only selection, scaling, and layout.

import type { Certificate, FieldJson, RootSetJson, TrajectoryJson } from "./types.js";
import type { SweepPoint } from "./state.js";

export const MAX_SCATTER_POINTS = 5000;

export interface SpectrumPoint {
  re: number;
  im: number;
  mult: number;
  residual: number;
}

export interface SpectrumPlot {
  points: SpectrumPoint[];
  dominanceLine: number | null;
  chainMarkers: { re: number; im: number }[];
  window: { reLo: number; reHi: number; imLo: number; imHi: number } | null;
  degraded: boolean;
  banner: string | null;
}

export function spectrumPlot(cert: Certificate | null, rs: RootSetJson | null): SpectrumPlot {
  if (!rs || rs.roots.length === 0) {
    return {
      points: [],
      dominanceLine: cert ? cert.s0 : null,
      chainMarkers: [],
      window: null,
      degraded: false,
      banner: "no roots in window",
    };
  }
  const points = downsample(
    rs.roots.map((r) => ({ re: r.re, im: r.im, mult: r.mult, residual: r.residual })),
    MAX_SCATTER_POINTS,
  );
  const chainMarkers: { re: number; im: number }[] = [];
  if (cert && cert.chain_zeta && cert.system.tau > 0) {
    for (const zeta of cert.chain_zeta) {
      chainMarkers.push({ re: cert.s0, im: zeta / cert.system.tau });
    }
  }
  const degraded = rs.unresolved.length > 0 || (cert ? cert.dominance === "unverified" : false);
  return {
    points,
    dominanceLine: cert ? cert.s0 : null,
    chainMarkers,
    window: {
      reLo: rs.window.re_lo,
      reHi: rs.window.re_hi,
      imLo: rs.window.im_lo,
      imHi: rs.window.im_hi,
    },
    degraded,
    banner: null,
  };
}

export interface SweepPlot {
  tau: number[];
  s0: number[];
}

export function sweepPlot(points: SweepPoint[]): SweepPlot {
  const sorted = [...points].sort((a, b) => a.tau - b.tau);
  return { tau: sorted.map((p) => p.tau), s0: sorted.map((p) => p.s0) };
}

export interface ResponsePlot {
  t: number[];
  y: number[];
  envelope: { t: number[]; y: number[] } | null;
  decayRate: number | null;
}

export function responsePlot(traj: TrajectoryJson | null): ResponsePlot {
  if (!traj || traj.t.length === 0) {
    return { t: [], y: [], envelope: null, decayRate: null };
  }
  const t = traj.t;
  const y = traj.states.map((row) => row[0]);
  let envelope: { t: number[]; y: number[] } | null = null;
  const rate = traj.decay_rate ?? null;
  if (rate !== null) {
    // Anchor the fitted-rate envelope at the largest |y|; pure rescaling of
    // the API-supplied rate.
    let anchorT = t[0];
    let anchorY = Math.abs(y[0]);
    for (let i = 0; i < t.length; i += 1) {
      if (Math.abs(y[i]) > anchorY) {
        anchorY = Math.abs(y[i]);
        anchorT = t[i];
      }
    }
    envelope = {
      t: [...t],
      y: t.map((ti) => anchorY * Math.exp(-rate * (ti - anchorT))),
    };
  }
  return { t: [...t], y, envelope, decayRate: rate };
}

export interface HeatmapPlot {
  t: number[];
  x: number[];
  values: number[][];
  vmax: number;
}

export function heatmapPlot(field: FieldJson | null): HeatmapPlot {
  if (!field || field.t.length === 0) {
    return { t: [], x: [], values: [], vmax: 0 };
  }
  let vmax = 0;
  for (const row of field.phi) {
    for (const v of row) {
      const a = Math.abs(v);
      if (a > vmax) vmax = a;
    }
  }
  return { t: [...field.t], x: [...field.x], values: field.phi.map((row) => [...row]), vmax };
}

// Screen-space stride downsampling preserving first and last entries.
export function downsample<T>(items: T[], max: number): T[] {
  if (items.length <= max) return items;
  const stride = Math.ceil(items.length / max);
  const out: T[] = [];
  for (let i = 0; i < items.length; i += stride) {
    out.push(items[i]);
  }
  if (out[out.length - 1] !== items[items.length - 1]) {
    out.push(items[items.length - 1]);
  }
  return out;
}
