import type { RobotView, Snapshot, SourceView } from "../src/schema.js";

export function makeSnapshot(overrides: Partial<Snapshot> = {}): Snapshot {
  const robots: RobotView[] = Array.from({ length: 12 }, (_, i) => ({
    id: i,
    x: (i % 4) - 1.5,
    y: Math.floor(i / 4) - 1,
    mode: i % 3 === 0 ? "foraging_search" : "idle",
    carrying: false,
    memory: i % 3 === 0 ? [10 + i, -5] : null,
  }));
  const sources: SourceView[] = Array.from({ length: 6 }, (_, i) => ({
    id: 100 + i,
    x: 10 * Math.cos((i * Math.PI) / 3),
    y: 10 * Math.sin((i * Math.PI) / 3),
  }));
  return {
    v: 1,
    type: "snapshot",
    tick: 10,
    t: 1.0,
    s: 0.5,
    theta: 0.5,
    energy: 50,
    total_energy: 50.2,
    capacity: 100,
    active_n: 12,
    n_foragers: 4,
    expected_n: 2.09,
    p: 0.099,
    paused: false,
    speed: 1,
    domain_radius: 30,
    colony_radius: 3,
    sensing_horizon: 5,
    source_annulus: [6, 27],
    robots,
    sources,
    ...overrides,
  };
}
