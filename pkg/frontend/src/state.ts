/** Client-side state: latest snapshot, chart history, connection, pending acks. */
import { RingBuffer } from "./ringBuffer.js";
import type { ServerFrame, Snapshot } from "./schema.js";

/** 6 minutes of history at the 10 Hz snapshot cadence. */
export const HISTORY_CAPACITY = 3600;

export interface HistoryPoint {
  t: number;
  energy: number;
  nForagers: number;
  expectedN: number;
}

export type ConnectionStatus = "connecting" | "connected" | "disconnected";

export interface PendingCommand {
  command: string;
  sentAt: number;
}

export class ClientState {
  latest: Snapshot | null = null;
  readonly history = new RingBuffer<HistoryPoint>(HISTORY_CAPACITY);
  status: ConnectionStatus = "connecting";
  pending: PendingCommand | null = null;
  lastError: string | null = null;
  lastAck: { command: string; appliedAtTick: number } | null = null;

  /** A control is usable when connected and no command awaits its ack. */
  get controlsEnabled(): boolean {
    return this.status === "connected" && this.pending === null;
  }

  applyFrame(frame: ServerFrame): void {
    if (frame.type === "snapshot") {
      this.latest = frame;
      const prev = this.history.last();
      // Keep the history strictly ordered by simulation time; a reset
      // rewinds the clock, so start the chart over.
      if (prev !== undefined && frame.t < prev.t) this.history.clear();
      if (prev === undefined || frame.t > prev.t || this.history.length === 0) {
        this.history.push({
          t: frame.t,
          energy: frame.energy,
          nForagers: frame.n_foragers,
          expectedN: frame.expected_n,
        });
      }
    } else if (frame.type === "ack") {
      this.lastAck = { command: frame.command, appliedAtTick: frame.applied_at_tick };
      if (this.pending?.command === frame.command) this.pending = null;
    } else {
      this.lastError = frame.message;
      // An error settles whatever command was outstanding.
      this.pending = null;
    }
  }

  markPending(command: string, now: number): void {
    this.pending = { command, sentAt: now };
  }

  /** Expire a stuck pending command so the controls come back. */
  expirePending(now: number, timeoutMs: number): boolean {
    if (this.pending !== null && now - this.pending.sentAt >= timeoutMs) {
      this.lastError = `no acknowledgement for '${this.pending.command}' within ${timeoutMs} ms`;
      this.pending = null;
      return true;
    }
    return false;
  }
}
