// Paces rendering by the events' own timestamps: the server is the
// single source of timing truth, the client never re-samples delays.
// Events arriving behind schedule render immediately, so live streams
// (already paced by the server) pass straight through.

import type { KeystrokeEvent } from "./protocol.js";

export interface Scheduler {
  now(): number;
  setTimeout(fn: () => void, delayMs: number): unknown;
}

const realScheduler: Scheduler = {
  now: () => performance.now(),
  setTimeout: (fn, delay) => setTimeout(fn, delay),
};

export class TracePlayer {
  private queue: KeystrokeEvent[] = [];
  private startedAt: number | null = null; // wall time of trace t=0
  private draining = false;

  constructor(
    private readonly render: (event: KeystrokeEvent) => void,
    private readonly scheduler: Scheduler = realScheduler
  ) {}

  /** Reset trace-local time; the next event's t is measured from now. */
  begin(): void {
    this.queue = [];
    this.startedAt = null;
    this.draining = false;
  }

  enqueue(event: KeystrokeEvent): void {
    if (this.startedAt === null) {
      // anchor trace time to the first arrival: live streams are already
      // paced by the server, so the first event renders immediately
      this.startedAt = this.scheduler.now() - event.t;
      this.render(event);
      return;
    }
    this.queue.push(event);
    if (!this.draining) {
      this.drain();
    }
  }

  private drain(): void {
    const next = this.queue[0];
    if (!next || this.startedAt === null) {
      this.draining = false;
      return;
    }
    const due = this.startedAt + next.t;
    const wait = due - this.scheduler.now();
    if (wait <= 0) {
      this.queue.shift();
      this.render(next);
      this.drain();
      return;
    }
    this.draining = true;
    this.scheduler.setTimeout(() => {
      this.draining = false;
      this.drain();
    }, wait);
  }

  get pending(): number {
    return this.queue.length;
  }
}
