/** Wire schema for the live steering service (JSON text frames, v1). */

export const PROTOCOL_VERSION = 1;

export type RobotMode = "idle" | "foraging_search" | "foraging_return";

export interface RobotView {
  id: number;
  x: number;
  y: number;
  mode: RobotMode;
  carrying: boolean;
  /** Remembered waypoint [x, y], or null when the robot has none. */
  memory?: [number, number] | null;
}

export interface SourceView {
  id: number;
  x: number;
  y: number;
}

export interface Snapshot {
  v: number;
  type: "snapshot";
  tick: number;
  t: number;
  s: number;
  theta: number;
  energy: number;
  total_energy: number;
  capacity: number;
  active_n: number;
  n_foragers: number;
  expected_n: number;
  p: number;
  paused: boolean;
  speed: number;
  domain_radius: number;
  colony_radius: number;
  sensing_horizon: number;
  source_annulus: [number, number];
  robots: RobotView[];
  sources: SourceView[];
}

export interface AckFrame {
  v: number;
  type: "ack";
  command: string;
  applied_at_tick: number;
}

export interface ErrorFrame {
  v: number;
  type: "error";
  message: string;
}

export type ServerFrame = Snapshot | AckFrame | ErrorFrame;

export type Command =
  | { type: "recruit"; k: number; selection?: string }
  | { type: "release"; k: number }
  | { type: "pause" }
  | { type: "resume" }
  | { type: "set_speed"; multiplier: number }
  | { type: "reset"; seed?: number };

const MODES: ReadonlySet<string> = new Set([
  "idle",
  "foraging_search",
  "foraging_return",
]);

function isFiniteNumber(x: unknown): x is number {
  return typeof x === "number" && Number.isFinite(x);
}

function isRobot(x: unknown): x is RobotView {
  if (typeof x !== "object" || x === null) return false;
  const r = x as Record<string, unknown>;
  const memoryOk =
    r.memory === undefined ||
    r.memory === null ||
    (Array.isArray(r.memory) && r.memory.length === 2 && r.memory.every(isFiniteNumber));
  return (
    isFiniteNumber(r.id) &&
    isFiniteNumber(r.x) &&
    isFiniteNumber(r.y) &&
    typeof r.mode === "string" &&
    MODES.has(r.mode) &&
    typeof r.carrying === "boolean" &&
    memoryOk
  );
}

function isSource(x: unknown): x is SourceView {
  if (typeof x !== "object" || x === null) return false;
  const s = x as Record<string, unknown>;
  return isFiniteNumber(s.id) && isFiniteNumber(s.x) && isFiniteNumber(s.y);
}

/** Parse one wire frame; returns null for anything malformed or unversioned. */
export function parseFrame(raw: string): ServerFrame | null {
  let data: unknown;
  try {
    data = JSON.parse(raw);
  } catch {
    return null;
  }
  if (typeof data !== "object" || data === null) return null;
  const f = data as Record<string, unknown>;
  if (f.v !== PROTOCOL_VERSION) return null;

  if (f.type === "ack") {
    if (typeof f.command !== "string" || !Number.isInteger(f.applied_at_tick)) return null;
    return f as unknown as AckFrame;
  }
  if (f.type === "error") {
    if (typeof f.message !== "string") return null;
    return f as unknown as ErrorFrame;
  }
  if (f.type === "snapshot") {
    const numeric = [
      "t", "s", "theta", "energy", "total_energy", "capacity",
      "active_n", "n_foragers", "p", "speed",
      "domain_radius", "colony_radius", "sensing_horizon",
    ];
    for (const key of numeric) if (!isFiniteNumber(f[key])) return null;
    // expected_n may legitimately be NaN in non-negative-feedback modes.
    if (typeof f.expected_n !== "number") return null;
    if (!Number.isInteger(f.tick) || typeof f.paused !== "boolean") return null;
    if (!Array.isArray(f.robots) || !f.robots.every(isRobot)) return null;
    if (!Array.isArray(f.sources) || !f.sources.every(isSource)) return null;
    if (
      !Array.isArray(f.source_annulus) ||
      f.source_annulus.length !== 2 ||
      !f.source_annulus.every(isFiniteNumber)
    ) {
      return null;
    }
    return f as unknown as Snapshot;
  }
  return null;
}
