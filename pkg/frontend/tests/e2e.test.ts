/** End-to-end: drive the real live service over its WebSocket interface. */
import { spawn, type ChildProcess } from "node:child_process";
import { afterAll, beforeAll, describe, expect, it } from "vitest";
import WebSocket from "ws";
import { SteeringClient, type SocketLike } from "../src/client.js";
import type { ServerFrame, Snapshot } from "../src/schema.js";

const SERVER_SCRIPT = `
import asyncio
from colonygame import LiveServer, ScenarioConfig

async def main():
    server = LiveServer(ScenarioConfig(seed=2), speed=50.0, snapshot_hz=20.0)
    await server.start(port=0)
    print(server.port, flush=True)
    await asyncio.Future()

asyncio.run(main())
`;

let proc: ChildProcess;
let port: number;

beforeAll(async () => {
  proc = spawn("python3", ["-c", SERVER_SCRIPT], { stdio: ["ignore", "pipe", "pipe"] });
  port = await new Promise<number>((resolve, reject) => {
    const timer = setTimeout(() => reject(new Error("service did not report a port")), 20_000);
    let out = "";
    proc.stdout!.on("data", (chunk: Buffer) => {
      out += chunk.toString();
      const match = out.match(/(\d+)/);
      if (match) {
        clearTimeout(timer);
        resolve(Number(match[1]));
      }
    });
    proc.on("exit", (code) => reject(new Error(`service exited early (${code})`)));
  });
}, 30_000);

afterAll(() => {
  proc?.kill();
});

function connect(): Promise<SteeringClient> {
  const socket = new WebSocket(`ws://127.0.0.1:${port}`) as unknown as SocketLike;
  const client = new SteeringClient(socket);
  return new Promise((resolve, reject) => {
    const timer = setTimeout(() => reject(new Error("connect timeout")), 10_000);
    const poll = setInterval(() => {
      if (client.state.status === "connected") {
        clearTimeout(timer);
        clearInterval(poll);
        resolve(client);
      }
    }, 10);
  });
}

function nextMatching(
  client: SteeringClient,
  pred: (frame: ServerFrame) => boolean,
  timeoutMs = 15_000,
): Promise<ServerFrame> {
  return new Promise((resolve, reject) => {
    const timer = setTimeout(
      () => reject(new Error("timed out waiting for a matching frame")),
      timeoutMs,
    );
    client.onFrame((frame) => {
      if (pred(frame)) {
        clearTimeout(timer);
        resolve(frame);
      }
    });
  });
}

const isSnap = (f: ServerFrame): f is Snapshot => f.type === "snapshot";

describe("steering a live colony", () => {
  it("recruit drops active N, foragers recover, release restores N", async () => {
    const client = await connect();
    try {
      await nextMatching(client, (f) => isSnap(f) && f.active_n === 12);

      expect(client.sendRecruit(6)).toBe(true);
      const ack = await nextMatching(client, (f) => f.type === "ack");
      expect(ack.type === "ack" && ack.command).toBe("recruit");

      const dropped = (await nextMatching(
        client,
        (f) => isSnap(f) && f.active_n === 6,
      )) as Snapshot;
      expect(dropped.robots).toHaveLength(6);

      // Survivors re-enter foraging: the adaptive response to rising urgency.
      const active = (await nextMatching(
        client,
        (f) => isSnap(f) && f.n_foragers >= 1,
      )) as Snapshot;
      expect(active.n_foragers).toBeGreaterThanOrEqual(1);

      expect(client.sendRelease(6)).toBe(true);
      await nextMatching(client, (f) => f.type === "ack" && f.command === "release");
      const restored = (await nextMatching(
        client,
        (f) => isSnap(f) && f.active_n === 12,
      )) as Snapshot;
      expect(restored.robots).toHaveLength(12);
    } finally {
      client.close();
    }
  }, 30_000);

  it("server rejects oversubscribed recruit with a structured error", async () => {
    const client = await connect();
    try {
      await nextMatching(client, isSnap);
      client.sendRecruit(999);
      const err = await nextMatching(client, (f) => f.type === "error");
      expect(err.type === "error" && err.message).toContain("insufficient");
    } finally {
      client.close();
    }
  }, 30_000);
});
