// Thin websocket wrapper with exponential-backoff reconnect.

import type { ClientMessage, ServerMessage } from "./protocol.js";
import type { ConnectionState } from "./state.js";

export class SocketClient {
  private ws!: WebSocket;
  private attempts = 0;
  private closed = false;

  constructor(
    private readonly url: string,
    private readonly onMessage: (message: ServerMessage) => void,
    private readonly onStatus: (state: ConnectionState) => void,
  ) {
    this.connect();
  }

  private connect(): void {
    this.onStatus("connecting");
    this.ws = new WebSocket(this.url);
    this.ws.onopen = () => {
      this.attempts = 0;
      this.onStatus("open");
    };
    this.ws.onmessage = (event) => {
      try {
        this.onMessage(JSON.parse(event.data as string) as ServerMessage);
      } catch {
        // Non-JSON frames are dropped; the server never sends them.
      }
    };
    this.ws.onclose = () => {
      this.onStatus("closed");
      if (!this.closed) {
        const timeout = Math.min(500 * 2 ** this.attempts, 10_000);
        this.attempts += 1;
        setTimeout(() => this.connect(), timeout);
      }
    };
  }

  send(message: ClientMessage): void {
    if (this.ws.readyState === WebSocket.OPEN) {
      this.ws.send(JSON.stringify(message));
    }
  }

  close(): void {
    this.closed = true;
    this.ws.close();
  }
}
