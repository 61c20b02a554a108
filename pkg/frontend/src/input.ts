// Pointer -> workspace mapping and the outgoing input throttle.
//
// The pointer steers the horizontal plane on the top-down panel; the wheel
// moves the vertical axis. The throttle keeps the send rate at or below a
// fixed frequency while guaranteeing the latest value is eventually sent.

import type { Vec3 } from "./protocol";
import { canvasToWorld, type Bounds, type Viewport } from "./render/gauges";

export function clampToBounds(pos: Vec3, bounds: Bounds): Vec3 {
  const out: Vec3 = [pos[0], pos[1], pos[2]];
  for (let i = 0; i < 3; i++) {
    if (out[i] < bounds.min[i]) out[i] = bounds.min[i];
    if (out[i] > bounds.max[i]) out[i] = bounds.max[i];
  }
  return out;
}

// Map a pointer position on the top-down panel (world x/y axes) plus the
// held vertical value into a workspace point.
export function pointerToWorld(
  px: number, py: number, z: number, bounds: Bounds, vp: Viewport,
): Vec3 {
  const [x, y] = canvasToWorld(px, py, [0, 1], bounds, vp);
  return clampToBounds([x, y, z], bounds);
}

export class VerticalAxis {
  private z: number;

  constructor(
    private readonly min: number,
    private readonly max: number,
    initial: number,
    private readonly step = 0.005,
  ) {
    this.z = Math.min(this.max, Math.max(this.min, initial));
  }

  get value(): number {
    return this.z;
  }

  // Wheel up (negative deltaY) raises the hand.
  wheel(deltaY: number): number {
    const ticks = Math.sign(deltaY);
    this.z = Math.min(this.max, Math.max(this.min, this.z - ticks * this.step));
    return this.z;
  }
}

export class InputThrottle {
  private lastSent = -Infinity;
  private pending: Vec3 | null = null;

  constructor(
    private readonly minIntervalMs: number,
    private readonly send: (pos: Vec3) => void,
  ) {}

  // Offer the newest pointer sample; returns true if it went out now.
  offer(pos: Vec3, nowMs: number): boolean {
    if (nowMs - this.lastSent >= this.minIntervalMs) {
      this.lastSent = nowMs;
      this.pending = null;
      this.send(pos);
      return true;
    }
    this.pending = pos;
    return false;
  }

  // Called from the render loop: flush a stashed sample once allowed.
  tick(nowMs: number): boolean {
    if (this.pending !== null && nowMs - this.lastSent >= this.minIntervalMs) {
      const pos = this.pending;
      this.pending = null;
      this.lastSent = nowMs;
      this.send(pos);
      return true;
    }
    return false;
  }
}
