// Websocket session client with an injectable socket factory so tests can
// drive it without a network.

import {
  inputMessage,
  parseFrame,
  startMessage,
  stopMessage,
  type ServerFrame,
  type StartOptions,
  type Vec3,
} from "./protocol";
import {
  applyFrame,
  initialView,
  markDisconnected,
  type SessionView,
} from "./state";

export interface SocketLike {
  send(data: string): void;
  close(): void;
  onopen: (() => void) | null;
  onmessage: ((ev: { data: unknown }) => void) | null;
  onclose: (() => void) | null;
  onerror: ((ev: unknown) => void) | null;
}

export type SocketFactory = (url: string) => SocketLike;

export type ViewListener = (view: SessionView, frame: ServerFrame | null) => void;

export class SessionClient {
  private sock: SocketLike | null = null;
  private view_: SessionView = initialView();
  private listeners: ViewListener[] = [];
  private open = false;

  constructor(
    private readonly url: string,
    private readonly factory: SocketFactory,
  ) {}

  view(): SessionView {
    return this.view_;
  }

  onChange(listener: ViewListener): void {
    this.listeners.push(listener);
  }

  connect(start: StartOptions): void {
    const sock = this.factory(this.url);
    this.sock = sock;
    this.view_ = initialView();
    sock.onopen = () => {
      this.open = true;
      sock.send(JSON.stringify(startMessage(start)));
    };
    sock.onmessage = (ev) => {
      let frame: ServerFrame;
      try {
        frame = parseFrame(JSON.parse(String(ev.data)));
      } catch (err) {
        this.view_ = {
          ...this.view_,
          errors: this.view_.errors.concat([String(err)]),
        };
        this.emit(null);
        return;
      }
      this.view_ = applyFrame(this.view_, frame);
      this.emit(frame);
    };
    sock.onclose = () => {
      this.open = false;
      this.view_ = markDisconnected(this.view_);
      this.emit(null);
    };
    sock.onerror = () => {
      // onclose follows; nothing to do here.
    };
  }

  sendInput(pos: Vec3): boolean {
    if (!this.open || this.sock === null || this.view_.phase !== "running") {
      return false;
    }
    this.sock.send(JSON.stringify(inputMessage(pos)));
    return true;
  }

  stop(): void {
    if (this.open && this.sock !== null) {
      this.sock.send(JSON.stringify(stopMessage()));
    }
  }

  disconnect(): void {
    this.sock?.close();
  }

  private emit(frame: ServerFrame | null): void {
    for (const listener of this.listeners) {
      listener(this.view_, frame);
    }
  }
}
