/** Canvas rendering of the world snapshot.
 *
 * Drawn against a minimal 2D-context interface so tests can substitute a
 * counting stub; the browser passes a real CanvasRenderingContext2D.
 */
import type { Snapshot } from "./schema.js";

export interface Context2DLike {
  fillStyle: string;
  strokeStyle: string;
  lineWidth: number;
  clearRect(x: number, y: number, w: number, h: number): void;
  beginPath(): void;
  arc(x: number, y: number, r: number, a0: number, a1: number): void;
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  stroke(): void;
  fill(): void;
  setLineDash(segments: number[]): void;
}

/** Idle robots are blue, foraging robots red (returners a darker red). */
export const MODE_COLORS: Record<string, string> = {
  idle: "#2b6cb0",
  foraging_search: "#e53e3e",
  foraging_return: "#9b2c2c",
};

export const SOURCE_COLOR = "#38a169";
export const COLONY_COLOR = "#d6bc8a";

export interface RenderCounts {
  robots: number;
  sources: number;
  entities: number;
}

export function renderWorld(
  ctx: Context2DLike,
  snapshot: Snapshot,
  width: number,
  height: number,
): RenderCounts {
  const scale = Math.min(width, height) / (2 * snapshot.domain_radius * 1.05);
  const toX = (x: number) => width / 2 + x * scale;
  const toY = (y: number) => height / 2 - y * scale;
  const circle = (x: number, y: number, r: number) => {
    ctx.beginPath();
    ctx.arc(toX(x), toY(y), r * scale, 0, 2 * Math.PI);
  };

  ctx.clearRect(0, 0, width, height);
  ctx.setLineDash([]);

  // Domain boundary (30 m keep-in circle).
  ctx.strokeStyle = "#4a5568";
  ctx.lineWidth = 2;
  circle(0, 0, snapshot.domain_radius);
  ctx.stroke();

  // Source annulus, dashed.
  ctx.strokeStyle = "#a0aec0";
  ctx.lineWidth = 1;
  ctx.setLineDash([4, 4]);
  for (const r of snapshot.source_annulus) {
    circle(0, 0, r);
    ctx.stroke();
  }
  ctx.setLineDash([]);

  // Colony disk.
  ctx.fillStyle = COLONY_COLOR;
  circle(0, 0, snapshot.colony_radius);
  ctx.fill();

  // Sources.
  for (const src of snapshot.sources) {
    ctx.fillStyle = SOURCE_COLOR;
    circle(src.x, src.y, 0.4);
    ctx.fill();
  }

  // Robots: body colored by mode, sensing ring, memory line.
  for (const robot of snapshot.robots) {
    if (robot.memory) {
      ctx.strokeStyle = "#cbd5e0";
      ctx.lineWidth = 1;
      ctx.setLineDash([2, 3]);
      ctx.beginPath();
      ctx.moveTo(toX(robot.x), toY(robot.y));
      ctx.lineTo(toX(robot.memory[0]), toY(robot.memory[1]));
      ctx.stroke();
      ctx.setLineDash([]);
    }
    ctx.strokeStyle = MODE_COLORS[robot.mode];
    ctx.lineWidth = 0.5;
    circle(robot.x, robot.y, snapshot.sensing_horizon);
    ctx.stroke();
    ctx.fillStyle = MODE_COLORS[robot.mode];
    circle(robot.x, robot.y, robot.carrying ? 0.45 : 0.3);
    ctx.fill();
  }

  return {
    robots: snapshot.robots.length,
    sources: snapshot.sources.length,
    entities: snapshot.robots.length + snapshot.sources.length,
  };
}
