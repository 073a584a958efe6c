// Wire protocol shared with the gateway: one JSON object per websocket
// text frame. Shapes mirror the server exactly; parsing is defensive
// because frames cross a trust boundary.

export type EventKind = "type" | "delete" | "move" | "pause" | "text";

export interface KeystrokeEvent {
  t: number;
  kind: EventKind;
  payload: string | number | null;
  caret: number;
}

export interface WaitingRoomMsg {
  type: "waiting_room";
  delay_ms: number;
}

export interface SessionReadyMsg {
  type: "session_ready";
  session_id: string;
}

export interface EventMsg {
  type: "event";
  message_id: number;
  event: KeystrokeEvent;
}

export interface TraceDoneMsg {
  type: "trace_done";
  message_id: number;
}

export interface NoticeMsg {
  type: "notice";
  kind: string;
  text: string;
}

export type ServerMessage =
  | WaitingRoomMsg
  | SessionReadyMsg
  | EventMsg
  | TraceDoneMsg
  | NoticeMsg;

export interface OpenSessionMsg {
  type: "open_session";
  preset?: string;
  params?: Record<string, number>;
  visibility?: boolean;
}

export interface UserMessageMsg {
  type: "user_message";
  text: string;
}

export interface UpdateParamsMsg {
  type: "update_params";
  patch: Record<string, number>;
}

export interface SetVisibilityMsg {
  type: "set_visibility";
  show_typing: boolean;
}

export type ClientMessage =
  | OpenSessionMsg
  | UserMessageMsg
  | UpdateParamsMsg
  | SetVisibilityMsg;

const SERVER_TYPES = new Set([
  "waiting_room",
  "session_ready",
  "event",
  "trace_done",
  "notice",
]);

export function parseServerMessage(raw: string): ServerMessage | null {
  let data: unknown;
  try {
    data = JSON.parse(raw);
  } catch {
    return null;
  }
  if (typeof data !== "object" || data === null) return null;
  const message = data as Record<string, unknown>;
  if (typeof message.type !== "string" || !SERVER_TYPES.has(message.type)) {
    return null;
  }
  if (message.type === "event") {
    const event = message.event as Record<string, unknown> | undefined;
    if (
      !event ||
      typeof event.t !== "number" ||
      typeof event.kind !== "string" ||
      typeof event.caret !== "number"
    ) {
      return null;
    }
  }
  return message as unknown as ServerMessage;
}

export function encodeClientMessage(message: ClientMessage): string {
  return JSON.stringify(message);
}
