// Connection state machine: one socket, reconnect with backoff, stale-frame
// filtering. The framebuffer is the single source of truth; nothing here
// draws locally.

import {
  ButtonId,
  ErrorMsg,
  Frame,
  PointerPhase,
  SevenSegMsg,
  StatusMsg,
  buttonMsg,
  decodeFrame,
  parseServerText,
  pointerMsg,
} from "./protocol.js";

export type ConnectionState = "connecting" | "open" | "lost";

export interface SocketHandlers {
  onOpen(): void;
  onText(text: string): void;
  onBinary(data: ArrayBuffer): void;
  onClose(): void;
}

export interface DeviceSocket {
  send(data: string): void;
  close(): void;
}

export type SocketFactory = (url: string, handlers: SocketHandlers) => DeviceSocket;

export interface ClientCallbacks {
  onStatus?: (status: StatusMsg) => void;
  onSevenSeg?: (msg: SevenSegMsg) => void;
  onFrame?: (frame: Frame) => void;
  onServerError?: (err: ErrorMsg) => void;
  onConnection?: (state: ConnectionState) => void;
}

export type Scheduler = (fn: () => void, delayMs: number) => unknown;

export const BACKOFF_MS = [500, 1000, 2000, 4000, 5000] as const;

export function backoffDelay(attempt: number): number {
  return BACKOFF_MS[Math.min(attempt, BACKOFF_MS.length - 1)];
}

export class DeviceClient {
  connection: ConnectionState = "connecting";
  lastFrameSeq = 0;
  status: StatusMsg | null = null;
  sevenSegText = "000 000";

  private socket: DeviceSocket | null = null;
  private attempts = 0;
  private closed = false;

  constructor(
    private readonly url: string,
    private readonly callbacks: ClientCallbacks,
    private readonly factory: SocketFactory,
    private readonly scheduler: Scheduler = (fn, ms) => setTimeout(fn, ms),
  ) {}

  connect(): void {
    if (this.closed) {
      return;
    }
    this.setConnection("connecting");
    this.socket = this.factory(this.url, {
      onOpen: () => {
        this.attempts = 0;
        this.setConnection("open");
      },
      onText: (text) => this.handleText(text),
      onBinary: (data) => this.handleBinary(data),
      onClose: () => this.handleClose(),
    });
  }

  close(): void {
    this.closed = true;
    this.socket?.close();
    this.socket = null;
  }

  sendButton(id: ButtonId): void {
    this.send(buttonMsg(id));
  }

  sendPointer(phase: PointerPhase, nx?: number, ny?: number): void {
    this.send(pointerMsg(phase, nx, ny));
  }

  private send(data: string): void {
    if (this.connection === "open" && this.socket) {
      this.socket.send(data);
    }
  }

  private setConnection(state: ConnectionState): void {
    if (this.connection !== state) {
      this.connection = state;
      this.callbacks.onConnection?.(state);
    }
  }

  private handleText(text: string): void {
    let msg;
    try {
      msg = parseServerText(text);
    } catch {
      return; // unknown control chatter is ignorable; frames are the hard contract
    }
    if (msg.kind === "status") {
      this.status = msg;
      this.callbacks.onStatus?.(msg);
    } else if (msg.kind === "sevenseg") {
      this.sevenSegText = msg.text;
      this.callbacks.onSevenSeg?.(msg);
    } else {
      this.callbacks.onServerError?.(msg);
    }
  }

  private handleBinary(data: ArrayBuffer): void {
    let frame: Frame;
    try {
      frame = decodeFrame(data);
    } catch {
      // a frame we cannot decode means the stream is broken: drop the
      // connection and let the backoff reconnect path take over
      this.setConnection("lost");
      this.socket?.close();
      return;
    }
    if (frame.seq <= this.lastFrameSeq) {
      return; // stale
    }
    this.lastFrameSeq = frame.seq;
    this.callbacks.onFrame?.(frame);
  }

  private handleClose(): void {
    this.socket = null;
    if (this.closed) {
      return;
    }
    this.setConnection("lost");
    const delay = backoffDelay(this.attempts);
    this.attempts += 1;
    this.scheduler(() => this.connect(), delay);
  }
}

/** Adapter for the browser WebSocket. */
export function browserSocketFactory(url: string, handlers: SocketHandlers): DeviceSocket {
  const ws = new WebSocket(url);
  ws.binaryType = "arraybuffer";
  ws.onopen = () => handlers.onOpen();
  ws.onmessage = (ev: MessageEvent) => {
    if (typeof ev.data === "string") {
      handlers.onText(ev.data);
    } else {
      handlers.onBinary(ev.data as ArrayBuffer);
    }
  };
  ws.onclose = () => handlers.onClose();
  ws.onerror = () => ws.close();
  return {
    send: (data) => ws.send(data),
    close: () => ws.close(),
  };
}
