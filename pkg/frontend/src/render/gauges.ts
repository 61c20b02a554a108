// Pure geometry for the panels, the autonomy gauge and the force arrows.
// Everything here maps frame values to pixels; no state, no simulation.

import type { StateFrame, Vec3 } from "../protocol";

export type Axis = 0 | 1 | 2;

export interface Viewport {
  x0: number;
  y0: number;
  width: number;
  height: number;
}

export interface Bounds {
  min: Vec3;
  max: Vec3;
}

// Linear world -> canvas map for one panel; the second axis is flipped so
// +y (or +z) points up on screen.
export function worldToCanvas(
  p: Vec3, axes: [Axis, Axis], bounds: Bounds, vp: Viewport,
): [number, number] {
  const [i, j] = axes;
  const su = (p[i] - bounds.min[i]) / (bounds.max[i] - bounds.min[i]);
  const sv = (p[j] - bounds.min[j]) / (bounds.max[j] - bounds.min[j]);
  return [vp.x0 + su * vp.width, vp.y0 + (1 - sv) * vp.height];
}

export function canvasToWorld(
  px: number, py: number, axes: [Axis, Axis], bounds: Bounds, vp: Viewport,
): [number, number] {
  const [i, j] = axes;
  const su = (px - vp.x0) / vp.width;
  const sv = 1 - (py - vp.y0) / vp.height;
  return [
    bounds.min[i] + su * (bounds.max[i] - bounds.min[i]),
    bounds.min[j] + sv * (bounds.max[j] - bounds.min[j]),
  ];
}

export function clamp01(v: number): number {
  return v < 0 ? 0 : v > 1 ? 1 : v;
}

// Gauge fill fraction is the frame's alpha, clamped for safety.
export function alphaGaugeFill(alpha: number): number {
  return clamp01(alpha);
}

// Virtual fixture spring thickness tracks the fixture stiffness, which is
// affine in alpha; alpha = 1 draws the spring at full width.
export function springWidth(alpha: number, minPx: number, maxPx: number): number {
  return minPx + clamp01(alpha) * (maxPx - minPx);
}

export interface Arrow {
  from: [number, number];
  to: [number, number];
  magnitude: number;
}

// Project a force vector onto a panel and scale to pixels, clamping the
// drawn length while preserving direction.
export function forceArrow(
  origin: [number, number], force: Vec3, axes: [Axis, Axis],
  pxPerNewton: number, maxPx: number,
): Arrow {
  const [i, j] = axes;
  const fx = force[i] * pxPerNewton;
  const fy = -force[j] * pxPerNewton;
  const magnitude = Math.hypot(force[0], force[1], force[2]);
  let dx = fx;
  let dy = fy;
  const len = Math.hypot(dx, dy);
  if (len > maxPx && len > 0) {
    dx *= maxPx / len;
    dy *= maxPx / len;
  }
  return { from: origin, to: [origin[0] + dx, origin[1] + dy], magnitude };
}

// Camera panel rule: the actual hole is drawn iff the frame carries it.
export function cameraHole(state: StateFrame | null): Vec3 | null {
  return state === null ? null : state.actual_hole;
}

const CONTACT_COLORS: Record<string, string> = {
  Free: "#2e86c1",
  SurfaceCollision: "#c0392b",
  InHoleMouth: "#b7950b",
  Inserted: "#1e8449",
};

export function contactColor(contact: string): string {
  return CONTACT_COLORS[contact] ?? "#566573";
}
