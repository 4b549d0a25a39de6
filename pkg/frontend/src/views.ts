// Canvas renderers. Thin: everything they draw comes from plotdata outputs.

import type { HeatmapPlot, ResponsePlot, SpectrumPlot, SweepPlot } from "./plotdata.js";

interface Frame {
  x0: number;
  x1: number;
  y0: number;
  y1: number;
  sx: (v: number) => number;
  sy: (v: number) => number;
}

function frame(
  ctx: CanvasRenderingContext2D,
  xLo: number,
  xHi: number,
  yLo: number,
  yHi: number,
): Frame {
  const pad = 34;
  const w = ctx.canvas.width;
  const h = ctx.canvas.height;
  const spanX = xHi - xLo || 1;
  const spanY = yHi - yLo || 1;
  const sx = (v: number) => pad + ((v - xLo) / spanX) * (w - 2 * pad);
  const sy = (v: number) => h - pad - ((v - yLo) / spanY) * (h - 2 * pad);
  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = "#889";
  ctx.strokeRect(pad, pad, w - 2 * pad, h - 2 * pad);
  ctx.fillStyle = "#667";
  ctx.font = "11px sans-serif";
  ctx.fillText(xLo.toPrecision(3), pad, h - pad + 14);
  ctx.fillText(xHi.toPrecision(3), w - pad - 30, h - pad + 14);
  ctx.fillText(yHi.toPrecision(3), 2, pad + 4);
  ctx.fillText(yLo.toPrecision(3), 2, h - pad);
  return { x0: xLo, x1: xHi, y0: yLo, y1: yHi, sx, sy };
}

export function renderSpectrum(canvas: HTMLCanvasElement, plot: SpectrumPlot, statusEl: HTMLElement): void {
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  if (plot.banner) {
    ctx.clearRect(0, 0, canvas.width, canvas.height);
    statusEl.textContent = plot.banner;
    return;
  }
  const win = plot.window;
  const res = plot.points.map((p) => p.re);
  const ims = plot.points.map((p) => p.im);
  const xLo = win ? win.reLo : Math.min(...res);
  const xHi = win ? win.reHi : Math.max(...res);
  const yLo = win ? Math.min(win.imLo, 0) : Math.min(...ims, 0);
  const yHi = win ? win.imHi : Math.max(...ims);
  const f = frame(ctx, xLo, xHi, yLo, yHi);
  if (plot.dominanceLine !== null) {
    ctx.strokeStyle = "#c33";
    ctx.setLineDash([5, 4]);
    ctx.beginPath();
    ctx.moveTo(f.sx(plot.dominanceLine), f.sy(yLo));
    ctx.lineTo(f.sx(plot.dominanceLine), f.sy(yHi));
    ctx.stroke();
    ctx.setLineDash([]);
  }
  ctx.fillStyle = "#36c";
  for (const p of plot.chainMarkers) {
    ctx.fillRect(f.sx(p.re) - 5, f.sy(p.im) - 1, 10, 2);
  }
  for (const p of plot.points) {
    ctx.beginPath();
    ctx.fillStyle = p.mult > 1 ? "#c33" : "#235";
    ctx.arc(f.sx(p.re), f.sy(p.im), p.mult > 1 ? 5 : 3, 0, 2 * Math.PI);
    ctx.fill();
    if (p.mult > 1) {
      ctx.fillStyle = "#c33";
      ctx.font = "12px sans-serif";
      ctx.fillText(`x${p.mult}`, f.sx(p.re) + 7, f.sy(p.im) - 7);
    }
  }
  statusEl.textContent = plot.degraded ? "windowed result with unresolved regions" : "";
}

export function renderSweep(
  canvas: HTMLCanvasElement,
  plot: SweepPlot,
  onSelect: ((tau: number) => void) | null,
): void {
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  if (plot.tau.length === 0) {
    ctx.clearRect(0, 0, canvas.width, canvas.height);
    return;
  }
  const f = frame(
    ctx,
    Math.min(...plot.tau),
    Math.max(...plot.tau),
    Math.min(...plot.s0),
    Math.max(...plot.s0),
  );
  ctx.strokeStyle = "#36c";
  ctx.beginPath();
  plot.tau.forEach((tv, i) => {
    const px = f.sx(tv);
    const py = f.sy(plot.s0[i]);
    if (i === 0) ctx.moveTo(px, py);
    else ctx.lineTo(px, py);
  });
  ctx.stroke();
  ctx.fillStyle = "#36c";
  plot.tau.forEach((tv, i) => {
    ctx.beginPath();
    ctx.arc(f.sx(tv), f.sy(plot.s0[i]), 3, 0, 2 * Math.PI);
    ctx.fill();
  });
  if (onSelect) {
    canvas.onclick = (ev: MouseEvent) => {
      const rect = canvas.getBoundingClientRect();
      const px = ((ev.clientX - rect.left) / rect.width) * canvas.width;
      let best = plot.tau[0];
      let bestDist = Infinity;
      plot.tau.forEach((tv) => {
        const d = Math.abs(f.sx(tv) - px);
        if (d < bestDist) {
          bestDist = d;
          best = tv;
        }
      });
      onSelect(best);
    };
  }
}

export function renderResponse(canvas: HTMLCanvasElement, plot: ResponsePlot, statusEl: HTMLElement): void {
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  if (plot.t.length === 0) {
    ctx.clearRect(0, 0, canvas.width, canvas.height);
    statusEl.textContent = "no trajectory loaded";
    return;
  }
  const lo = Math.min(...plot.y);
  const hi = Math.max(...plot.y);
  const f = frame(ctx, plot.t[0], plot.t[plot.t.length - 1], lo, hi);
  if (plot.envelope) {
    ctx.strokeStyle = "#c93";
    ctx.setLineDash([3, 3]);
    for (const sign of [1, -1]) {
      ctx.beginPath();
      plot.envelope.t.forEach((tv, i) => {
        const py = f.sy(sign * plot.envelope!.y[i]);
        if (i === 0) ctx.moveTo(f.sx(tv), py);
        else ctx.lineTo(f.sx(tv), py);
      });
      ctx.stroke();
    }
    ctx.setLineDash([]);
  }
  ctx.strokeStyle = "#235";
  ctx.beginPath();
  plot.t.forEach((tv, i) => {
    if (i === 0) ctx.moveTo(f.sx(tv), f.sy(plot.y[i]));
    else ctx.lineTo(f.sx(tv), f.sy(plot.y[i]));
  });
  ctx.stroke();
  statusEl.textContent = plot.decayRate !== null ? `fitted decay rate ${plot.decayRate.toFixed(4)}` : "";
}

export function renderHeatmap(canvas: HTMLCanvasElement, plot: HeatmapPlot, statusEl: HTMLElement): void {
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  if (plot.t.length === 0 || plot.vmax === 0) {
    statusEl.textContent = plot.t.length === 0 ? "no field loaded" : "identically zero field";
    if (plot.t.length > 0) {
      ctx.fillStyle = "#808";
      ctx.fillRect(0, 0, canvas.width, canvas.height);
    }
    return;
  }
  const nt = plot.t.length;
  const nx = plot.x.length;
  const cw = canvas.width / nt;
  const ch = canvas.height / nx;
  for (let i = 0; i < nt; i += 1) {
    for (let j = 0; j < nx; j += 1) {
      const v = plot.values[i][j] / plot.vmax;
      const r = Math.round(255 * Math.max(0, v));
      const b = Math.round(255 * Math.max(0, -v));
      ctx.fillStyle = `rgb(${r},${Math.round(64 * (1 - Math.abs(v)))},${b})`;
      ctx.fillRect(i * cw, canvas.height - (j + 1) * ch, Math.ceil(cw), Math.ceil(ch));
    }
  }
  statusEl.textContent = `sup |phi| = ${plot.vmax.toPrecision(4)}`;
}
