// Thin WebSocket wrapper for the gateway protocol with automatic reconnect.
// The client is stateless with respect to physics, so reconnecting and
// resuming from the next state update is always safe.

import { decodeServerMessage, type ServerMessage } from "./protocol.js";

export class GatewayClient {
  private ws: WebSocket | null = null;
  private closedByUser = false;
  private retryMs = 500;

  onmessage: (msg: ServerMessage) => void = () => undefined;
  onstatus: (connected: boolean) => void = () => undefined;

  constructor(private url: string) {}

  connect(): void {
    this.closedByUser = false;
    this.open();
  }

  private open(): void {
    this.ws = new WebSocket(this.url);
    this.ws.onopen = () => {
      this.retryMs = 500;
      this.onstatus(true);
    };
    this.ws.onmessage = (event: MessageEvent) => {
      const msg = decodeServerMessage(String(event.data));
      if (msg) this.onmessage(msg);
    };
    this.ws.onclose = () => {
      this.onstatus(false);
      this.ws = null;
      if (!this.closedByUser) {
        setTimeout(() => this.open(), this.retryMs);
        this.retryMs = Math.min(this.retryMs * 2, 5000);
      }
    };
    this.ws.onerror = () => {
      this.ws?.close();
    };
  }

  send(payload: string): boolean {
    if (this.ws && this.ws.readyState === WebSocket.OPEN) {
      this.ws.send(payload);
      return true;
    }
    return false;
  }

  close(): void {
    this.closedByUser = true;
    this.ws?.close();
  }
}
