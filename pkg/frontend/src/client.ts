/** Steering client: command framing, ack tracking, reconnect-free lifecycle.
 *
 * The socket is injected through a minimal interface so tests can use a
 * scripted fake; the browser entry point passes a native WebSocket and the
 * end-to-end test passes a Node `ws` socket.
 */
import { parseFrame, type Command, type ServerFrame } from "./schema.js";
import { ClientState } from "./state.js";

export interface SocketLike {
  send(data: string): void;
  close(): void;
  onmessage: ((event: { data: unknown }) => void) | null;
  onopen: (() => void) | null;
  onclose: (() => void) | null;
  onerror: ((err?: unknown) => void) | null;
}

export const ACK_TIMEOUT_MS = 5000;

export class SteeringClient {
  readonly state = new ClientState();
  private listeners: ((frame: ServerFrame) => void)[] = [];

  constructor(
    private readonly socket: SocketLike,
    private readonly now: () => number = () => Date.now(),
  ) {
    socket.onopen = () => {
      this.state.status = "connected";
    };
    socket.onclose = () => {
      this.state.status = "disconnected";
    };
    socket.onerror = () => {
      this.state.status = "disconnected";
    };
    socket.onmessage = (event) => {
      const frame = parseFrame(String(event.data));
      if (frame === null) return; // skip malformed frames
      this.state.applyFrame(frame);
      for (const fn of this.listeners) fn(frame);
    };
  }

  onFrame(fn: (frame: ServerFrame) => void): void {
    this.listeners.push(fn);
  }

  /** Validate and send; returns false when rejected client-side. */
  private sendCommand(cmd: Command): boolean {
    if (!this.state.controlsEnabled) return false;
    this.socket.send(JSON.stringify(cmd));
    this.state.markPending(cmd.type, this.now());
    return true;
  }

  sendRecruit(k: number, selection = "random"): boolean {
    if (!Number.isInteger(k) || k < 1) return false;
    return this.sendCommand({ type: "recruit", k, selection });
  }

  sendRelease(k: number): boolean {
    if (!Number.isInteger(k) || k < 1) return false;
    return this.sendCommand({ type: "release", k });
  }

  sendPause(): boolean {
    return this.sendCommand({ type: "pause" });
  }

  sendResume(): boolean {
    return this.sendCommand({ type: "resume" });
  }

  sendSetSpeed(multiplier: number): boolean {
    if (!(multiplier > 0)) return false;
    return this.sendCommand({ type: "set_speed", multiplier });
  }

  sendReset(seed?: number): boolean {
    return this.sendCommand(seed === undefined ? { type: "reset" } : { type: "reset", seed });
  }

  /** Call periodically (e.g. from the render loop) to expire stuck commands. */
  tick(): void {
    this.state.expirePending(this.now(), ACK_TIMEOUT_MS);
  }

  close(): void {
    this.socket.close();
  }
}

/** ws://host:port resolved from URL query parameters with sane defaults. */
export function serviceUrl(query: string, defaults = { host: "127.0.0.1", port: 8765 }): string {
  const params = new URLSearchParams(query);
  const host = params.get("host") ?? defaults.host;
  const port = Number(params.get("port") ?? defaults.port);
  if (!Number.isInteger(port) || port < 1 || port > 65535) {
    throw new RangeError(`invalid port in query: ${params.get("port")}`);
  }
  return `ws://${host}:${port}`;
}
