// Thin websocket wrapper: connects the store to a gateway URL and
// retries with a small backoff when the connection drops.

import type { ChatStore } from "./store.js";

export interface SocketLike {
  send(data: string): void;
  close(): void;
  onopen: ((ev?: unknown) => void) | null;
  onmessage: ((ev: { data: string }) => void) | null;
  onclose: ((ev?: unknown) => void) | null;
  onerror: ((ev?: unknown) => void) | null;
}

export type SocketFactory = (url: string) => SocketLike;

const defaultFactory: SocketFactory = (url) =>
  new WebSocket(url) as unknown as SocketLike;

export class ChatClient {
  private socket: SocketLike | null = null;
  private closed = false;
  private retryMs = 500;

  constructor(
    private readonly url: string,
    private readonly store: ChatStore,
    private readonly factory: SocketFactory = defaultFactory
  ) {}

  connect(): void {
    this.closed = false;
    const socket = this.factory(this.url);
    this.socket = socket;
    socket.onopen = () => {
      this.retryMs = 500;
      this.store.attach({ send: (frame) => socket.send(frame) });
      this.store.openSession();
    };
    socket.onmessage = (event) => this.store.handleFrame(event.data);
    socket.onclose = () => {
      this.store.detach();
      if (!this.closed) {
        setTimeout(() => this.connect(), this.retryMs);
        this.retryMs = Math.min(this.retryMs * 2, 8000);
      }
    };
    socket.onerror = () => {
      // onclose follows; nothing extra to do
    };
  }

  close(): void {
    this.closed = true;
    this.socket?.close();
  }
}
