/** Time-series chart: energy gauge plus foragers vs. the equilibrium curve.
 *
 * All three series share the time axis, which is what makes the paper's
 * qualitative relation (actual foragers tending to sit above expected)
 * directly visible.
 */
import type { Context2DLike } from "./render.js";
import type { HistoryPoint } from "./state.js";

export const SERIES_COLORS = {
  energy: "#805ad5",
  nForagers: "#e53e3e",
  expectedN: "#2b6cb0",
};

function drawSeries(
  ctx: Context2DLike,
  points: HistoryPoint[],
  pick: (p: HistoryPoint) => number,
  color: string,
  t0: number,
  t1: number,
  vMax: number,
  width: number,
  height: number,
): void {
  ctx.strokeStyle = color;
  ctx.lineWidth = 1.5;
  ctx.beginPath();
  let started = false;
  for (const p of points) {
    const v = pick(p);
    if (!Number.isFinite(v)) continue;
    const x = ((p.t - t0) / (t1 - t0 || 1)) * width;
    const y = height - (v / (vMax || 1)) * height;
    if (started) {
      ctx.lineTo(x, y);
    } else {
      ctx.moveTo(x, y);
      started = true;
    }
  }
  if (started) ctx.stroke();
}

export function renderChart(
  ctx: Context2DLike,
  history: HistoryPoint[],
  capacity: number,
  populationMax: number,
  width: number,
  height: number,
): void {
  ctx.clearRect(0, 0, width, height);
  if (history.length < 2) return;
  const t0 = history[0].t;
  const t1 = history[history.length - 1].t;
  // Energy on its own scale (0..capacity); counts on 0..population.
  drawSeries(ctx, history, (p) => p.energy, SERIES_COLORS.energy, t0, t1, capacity, width, height);
  drawSeries(
    ctx, history, (p) => p.expectedN, SERIES_COLORS.expectedN, t0, t1,
    populationMax, width, height,
  );
  drawSeries(
    ctx, history, (p) => p.nForagers, SERIES_COLORS.nForagers, t0, t1,
    populationMax, width, height,
  );
}
