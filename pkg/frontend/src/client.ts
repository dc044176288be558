/**
 * WebSocket session client: connects to the teleop service, folds every
 * server message into the view state, resolves command acknowledgements
 * by sequence number, and reconnects with a fixed delay after a drop.
 * The socket constructor is injected so tests can supply any
 * browser-compatible WebSocket implementation.
 */

import type { Ack, ClientMessage, ServerMessage } from "./protocol.js";
import { decodeServer, encodeClient } from "./protocol.js";
import type { UiState } from "./state.js";
import { initialState, reduce, setConnection } from "./state.js";

/* Handler parameters are `any` so both browser WebSocket and the ws
 * package satisfy the interface; only `data` is ever read. */
export interface SocketLike {
  onopen: ((ev: any) => void) | null;
  onmessage: ((ev: any) => void) | null;
  onclose: ((ev: any) => void) | null;
  onerror: ((ev: any) => void) | null;
  send(data: string): void;
  close(): void;
}

export type SocketFactory = (url: string) => SocketLike;

export interface SessionOptions {
  socketFactory: SocketFactory;
  /** Delay before a reconnect attempt; the UI stays greyed meanwhile. */
  reconnectDelayMs?: number;
  /** Reject pending commands not acknowledged within this window. */
  ackTimeoutMs?: number;
  autoAcquireControl?: boolean;
}

interface Pending {
  resolve: (ack: Ack) => void;
  reject: (err: Error) => void;
  timer: ReturnType<typeof setTimeout>;
}

export class SessionClient {
  state: UiState = initialState();
  onChange: ((state: UiState) => void) | null = null;
  onServerMessage: ((message: ServerMessage) => void) | null = null;

  private socket: SocketLike | null = null;
  private seq = 0;
  private readonly pending = new Map<number, Pending>();
  private closed = false;
  private reconnectTimer: ReturnType<typeof setTimeout> | null = null;

  constructor(
    readonly url: string,
    private readonly options: SessionOptions,
  ) {}

  connect(): void {
    this.closed = false;
    this.state = setConnection(this.state, "connecting");
    this.emit();
    const socket = this.options.socketFactory(this.url);
    this.socket = socket;
    socket.onopen = () => {
      this.state = setConnection(this.state, "open");
      this.emit();
      if (this.options.autoAcquireControl ?? true) this.acquireControl();
    };
    socket.onmessage = (ev) => this.handleMessage(String(ev.data));
    socket.onclose = () => this.handleDrop();
    socket.onerror = () => {
      // the close handler owns reconnection; nothing to do here
    };
  }

  close(): void {
    this.closed = true;
    if (this.reconnectTimer !== null) clearTimeout(this.reconnectTimer);
    this.failPending(new Error("client closed"));
    this.socket?.close();
    this.socket = null;
  }

  acquireControl(): void {
    this.sendRaw({ type: "acquire_control" });
  }

  releaseControl(): void {
    this.sendRaw({ type: "release_control" });
  }

  /** Send one simulation command; resolves with the server's ack. */
  sendCommand(command: Record<string, unknown>): Promise<Ack> {
    this.seq += 1;
    const seq = this.seq;
    return new Promise<Ack>((resolve, reject) => {
      const timer = setTimeout(() => {
        this.pending.delete(seq);
        reject(new Error(`ack timeout for seq ${seq}`));
      }, this.options.ackTimeoutMs ?? 5000);
      this.pending.set(seq, { resolve, reject, timer });
      try {
        this.sendRaw({ type: "command", seq, command });
      } catch (err) {
        clearTimeout(timer);
        this.pending.delete(seq);
        reject(err instanceof Error ? err : new Error(String(err)));
      }
    });
  }

  private sendRaw(message: ClientMessage): void {
    if (this.socket === null) throw new Error("not connected");
    this.socket.send(encodeClient(message));
  }

  private handleMessage(text: string): void {
    let message: ServerMessage;
    try {
      message = decodeServer(text);
    } catch (err) {
      this.state = { ...this.state, lastError: String(err) };
      this.emit();
      return;
    }
    if (message.type === "ack") {
      const pending = this.pending.get(message.seq);
      if (pending !== undefined) {
        this.pending.delete(message.seq);
        clearTimeout(pending.timer);
        pending.resolve(message);
      }
    }
    this.state = reduce(this.state, message);
    this.onServerMessage?.(message);
    this.emit();
  }

  private handleDrop(): void {
    this.failPending(new Error("connection lost"));
    this.socket = null;
    if (this.closed) return;
    this.state = setConnection(this.state, "lost");
    this.emit();
    this.reconnectTimer = setTimeout(() => {
      if (!this.closed) this.connect();
    }, this.options.reconnectDelayMs ?? 1000);
  }

  private failPending(err: Error): void {
    for (const [, pending] of this.pending) {
      clearTimeout(pending.timer);
      pending.reject(err);
    }
    this.pending.clear();
  }

  private emit(): void {
    this.onChange?.(this.state);
  }
}
