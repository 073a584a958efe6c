// Connection-and-conversation state machine. Holds the message list,
// applies server frames, owns the parameter panel state (edited vs
// last-acknowledged), and queues outbound frames while disconnected.
// Transport-free: the websocket (or a test fake) is plugged in.

import { DesyncError, TypingBuffer } from "./buffer.js";
import {
  buildPatch,
  ParamValues,
  PRESETS,
  validateParams,
} from "./params.js";
import {
  ClientMessage,
  encodeClientMessage,
  EventMsg,
  parseServerMessage,
  ServerMessage,
} from "./protocol.js";

export type ConnectionState =
  | "disconnected"
  | "connecting"
  | "waiting_room"
  | "ready";

export interface ChatEntry {
  sender: "user" | "partner";
  text: string;
  live: boolean; // still being typed
  desynced?: boolean;
}

export interface Transport {
  send(frame: string): void;
}

export class ChatStore {
  connection: ConnectionState = "disconnected";
  sessionId = "";
  preset = "red";
  showTyping = true;
  entries: ChatEntry[] = [];
  notices: string[] = [];
  buffer = new TypingBuffer();
  lastEventAt = 0; // trace-local ms of the newest applied event

  /** panel state: edited values vs the last server-acknowledged ones */
  edited: ParamValues = { ...PRESETS.red };
  acknowledged: ParamValues = { ...PRESETS.red };
  validationProblems: string[] = [];

  private transport: Transport | null = null;
  private outbox: string[] = [];
  private liveIndex = -1;
  private listeners = new Set<() => void>();

  // --- wiring -------------------------------------------------------------

  subscribe(listener: () => void): () => void {
    this.listeners.add(listener);
    return () => this.listeners.delete(listener);
  }

  private emitChange(): void {
    for (const listener of this.listeners) listener();
  }

  attach(transport: Transport): void {
    this.transport = transport;
    this.connection = "connecting";
    for (const frame of this.outbox.splice(0)) {
      transport.send(frame);
    }
    this.emitChange();
  }

  detach(): void {
    this.transport = null;
    this.connection = "disconnected";
    this.notices.push("connection lost; changes will be queued");
    this.emitChange();
  }

  private send(message: ClientMessage): void {
    const frame = encodeClientMessage(message);
    if (this.transport) {
      this.transport.send(frame);
    } else {
      this.outbox.push(frame); // flushed on reconnect
    }
  }

  // --- user actions ---------------------------------------------------------

  selectPreset(name: string): void {
    if (PRESETS[name]) {
      this.preset = name;
      this.edited = { ...PRESETS[name] };
      this.acknowledged = { ...PRESETS[name] };
      this.emitChange();
    }
  }

  openSession(): void {
    this.send({
      type: "open_session",
      preset: this.preset,
      visibility: this.showTyping,
    });
    this.emitChange();
  }

  sendMessage(text: string): void {
    if (!text.trim()) return;
    this.entries.push({ sender: "user", text, live: false });
    this.send({ type: "user_message", text });
    this.emitChange();
  }

  setParam(key: string, value: number): void {
    this.edited = { ...this.edited, [key]: value };
    this.validationProblems = validateParams(this.edited);
    this.emitChange();
  }

  /** Submit the panel; returns the patch sent, or null for a no-op or a
   * client-side validation failure (nothing goes on the wire). */
  submitParams(): ParamValues | null {
    this.validationProblems = validateParams(this.edited);
    if (this.validationProblems.length) {
      this.emitChange();
      return null;
    }
    const patch = buildPatch(this.acknowledged, this.edited);
    if (!patch) return null;
    this.send({ type: "update_params", patch });
    this.emitChange();
    return patch;
  }

  setVisibility(show: boolean): void {
    this.showTyping = show;
    this.send({ type: "set_visibility", show_typing: show });
    this.emitChange();
  }

  // --- server frames ----------------------------------------------------------

  handleFrame(raw: string): void {
    const message = parseServerMessage(raw);
    if (!message) return;
    this.handleMessage(message);
  }

  handleMessage(message: ServerMessage): void {
    switch (message.type) {
      case "waiting_room":
        this.connection = "waiting_room";
        break;
      case "session_ready":
        this.connection = "ready";
        this.sessionId = message.session_id;
        break;
      case "event":
        this.applyEvent(message);
        break;
      case "trace_done": {
        const entry = this.entries[this.liveIndex];
        if (entry) {
          entry.text = this.buffer.text;
          entry.live = false;
        }
        this.liveIndex = -1;
        break;
      }
      case "notice":
        this.handleNotice(message.kind, message.text);
        break;
    }
    this.emitChange();
  }

  private applyEvent(message: EventMsg): void {
    if (this.liveIndex < 0) {
      this.buffer.reset();
      this.lastEventAt = 0;
      this.entries.push({ sender: "partner", text: "", live: true });
      this.liveIndex = this.entries.length - 1;
    }
    const entry = this.entries[this.liveIndex];
    try {
      this.buffer.apply(message.event);
      this.lastEventAt = message.event.t;
      entry.text = this.buffer.text;
    } catch (error) {
      if (error instanceof DesyncError) {
        // keep what we have; the trailing full text (kind "text") or the
        // next message will resync the view
        entry.desynced = true;
      } else {
        throw error;
      }
    }
  }

  private handleNotice(kind: string, text: string): void {
    if (kind === "params-applied") {
      try {
        const effective = JSON.parse(text) as ParamValues;
        const acknowledged: ParamValues = { ...this.acknowledged };
        for (const key of Object.keys(acknowledged)) {
          if (typeof effective[key] === "number") {
            acknowledged[key] = effective[key];
          }
        }
        this.acknowledged = acknowledged;
        this.edited = { ...acknowledged };
      } catch {
        this.notices.push("could not parse applied parameters");
      }
      return;
    }
    if (kind === "validation-error") {
      // server refused: fall back to the last values it acknowledged
      this.edited = { ...this.acknowledged };
      this.validationProblems = [text];
    }
    this.notices.push(`${kind}: ${text}`);
  }

  get caret(): number {
    return this.buffer.caret;
  }

  get isTypingPaused(): boolean {
    return this.buffer.pausedAt(this.lastEventAt);
  }
}
