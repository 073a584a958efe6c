import { readFileSync } from "node:fs";
import { resolve, dirname } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";

import { DesyncError, TypingBuffer } from "../src/buffer.js";
import type { KeystrokeEvent } from "../src/protocol.js";

const here = dirname(fileURLToPath(import.meta.url));
const GOLDEN_DIR = resolve(here, "..", "..", "golden");

interface GoldenTrace {
  finalText: string;
  events: KeystrokeEvent[];
}

function loadGolden(name: string): GoldenTrace {
  const lines = readFileSync(resolve(GOLDEN_DIR, `${name}.jsonl`), "utf-8")
    .split("\n")
    .filter((line) => line.trim());
  const header = JSON.parse(lines[0]);
  const events = lines.slice(1).map((line) => JSON.parse(line) as KeystrokeEvent);
  return { finalText: header.final_text, events };
}

describe("TypingBuffer", () => {
  it("appends characters and advances the caret", () => {
    const buffer = new TypingBuffer();
    buffer.apply({ t: 0, kind: "type", payload: "h", caret: 1 });
    buffer.apply({ t: 1, kind: "type", payload: "i", caret: 2 });
    expect(buffer.text).toBe("hi");
    expect(buffer.caret).toBe(2);
  });

  it("deletes backward", () => {
    const buffer = new TypingBuffer();
    for (const [index, ch] of [..."hii"].entries()) {
      buffer.apply({ t: index, kind: "type", payload: ch, caret: index + 1 });
    }
    buffer.apply({ t: 3, kind: "delete", payload: null, caret: 2 });
    expect(buffer.text).toBe("hi");
  });

  it("moves the cursor and types at the insertion point", () => {
    const buffer = new TypingBuffer();
    for (const [index, ch] of [..."ac"].entries()) {
      buffer.apply({ t: index, kind: "type", payload: ch, caret: index + 1 });
    }
    buffer.apply({ t: 2, kind: "move", payload: 1, caret: 1 });
    buffer.apply({ t: 3, kind: "type", payload: "b", caret: 2 });
    expect(buffer.text).toBe("abc");
  });

  it("treats pause as a visual-only event", () => {
    const buffer = new TypingBuffer();
    buffer.apply({ t: 5, kind: "pause", payload: 1000, caret: 0 });
    expect(buffer.text).toBe("");
    expect(buffer.pausedAt(5)).toBe(true);
    expect(buffer.pausedAt(1006)).toBe(false);
  });

  it("replaces everything on a full-text event", () => {
    const buffer = new TypingBuffer();
    buffer.apply({ t: 0, kind: "type", payload: "x", caret: 1 });
    buffer.apply({ t: 1, kind: "text", payload: "hello world", caret: 11 });
    expect(buffer.text).toBe("hello world");
    expect(buffer.caret).toBe(11);
  });

  it("rejects deleting at offset zero", () => {
    const buffer = new TypingBuffer();
    expect(() =>
      buffer.apply({ t: 0, kind: "delete", payload: null, caret: 0 })
    ).toThrow(DesyncError);
  });

  it("rejects cursor targets outside the buffer", () => {
    const buffer = new TypingBuffer();
    expect(() =>
      buffer.apply({ t: 0, kind: "move", payload: 3, caret: 3 })
    ).toThrow(DesyncError);
  });

  it("rejects caret disagreements", () => {
    const buffer = new TypingBuffer();
    expect(() =>
      buffer.apply({ t: 0, kind: "type", payload: "a", caret: 9 })
    ).toThrow(DesyncError);
  });

  for (const preset of ["blue", "green", "red"]) {
    it(`replays the committed golden ${preset} trace to its final text`, () => {
      const { finalText, events } = loadGolden(preset);
      const buffer = new TypingBuffer();
      for (const event of events) {
        buffer.apply(event);
      }
      expect(buffer.text).toBe(finalText);
    });
  }

  it("the golden red trace exercises every event kind", () => {
    const { events } = loadGolden("red");
    const kinds = new Set(events.map((event) => event.kind));
    expect(kinds).toEqual(new Set(["type", "delete", "move", "pause"]));
  });
});
