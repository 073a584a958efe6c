// Text buffer with a caret, mirroring the server's replay interpreter:
// the rendered agent message must always equal the replay of the events
// received so far.

import type { KeystrokeEvent } from "./protocol.js";

export class DesyncError extends Error {}

export class TypingBuffer {
  private chars: string[] = [];
  private caretPos = 0;
  private pausedUntil = 0; // trace-local ms; drives the typing indicator

  get text(): string {
    return this.chars.join("");
  }

  get caret(): number {
    return this.caretPos;
  }

  get length(): number {
    return this.chars.length;
  }

  pausedAt(traceMs: number): boolean {
    return traceMs < this.pausedUntil;
  }

  reset(): void {
    this.chars = [];
    this.caretPos = 0;
    this.pausedUntil = 0;
  }

  /** Apply one event; throws DesyncError when the event cannot apply or
   * its recorded caret disagrees with the simulation. */
  apply(event: KeystrokeEvent): void {
    switch (event.kind) {
      case "type": {
        if (typeof event.payload !== "string" || event.payload.length === 0) {
          throw new DesyncError(`bad type payload: ${event.payload}`);
        }
        this.chars.splice(this.caretPos, 0, ...event.payload);
        this.caretPos += [...event.payload].length;
        break;
      }
      case "delete": {
        if (this.caretPos === 0) {
          throw new DesyncError("delete backward at offset 0");
        }
        this.caretPos -= 1;
        this.chars.splice(this.caretPos, 1);
        break;
      }
      case "move": {
        const target = event.payload;
        if (
          typeof target !== "number" ||
          target < 0 ||
          target > this.chars.length
        ) {
          throw new DesyncError(`cursor target ${target} out of range`);
        }
        this.caretPos = target;
        break;
      }
      case "pause": {
        if (typeof event.payload === "number") {
          this.pausedUntil = event.t + event.payload;
        }
        break;
      }
      case "text": {
        // full-text fallback (hidden mode or resync): replace everything
        const full = typeof event.payload === "string" ? event.payload : "";
        this.chars = [...full];
        this.caretPos = this.chars.length;
        break;
      }
      default:
        throw new DesyncError(`unknown event kind ${(event as KeystrokeEvent).kind}`);
    }
    if (event.kind !== "pause" && event.caret !== this.caretPos) {
      throw new DesyncError(
        `recorded caret ${event.caret} != simulated ${this.caretPos}`
      );
    }
  }
}
