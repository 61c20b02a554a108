// Session view: a pure fold over received frames. Rendering reads this and
// nothing else, so every displayed value traces back to one frame.

import type { ResultFrame, SceneFrame, ServerFrame, StateFrame } from "./protocol";

export type Phase = "connecting" | "running" | "done" | "aborted" | "error";

export interface AlphaSample {
  t: number;
  alpha: number;
}

export interface SessionView {
  phase: Phase;
  scene: SceneFrame | null;
  state: StateFrame | null;
  result: ResultFrame | null;
  warnings: string[];
  errors: string[];
  alphaTrail: AlphaSample[];
  framesSeen: number;
}

export const ALPHA_TRAIL_MAX = 600;

export function initialView(): SessionView {
  return {
    phase: "connecting",
    scene: null,
    state: null,
    result: null,
    warnings: [],
    errors: [],
    alphaTrail: [],
    framesSeen: 0,
  };
}

export function applyFrame(view: SessionView, frame: ServerFrame): SessionView {
  const next: SessionView = { ...view, framesSeen: view.framesSeen + 1 };
  switch (frame.type) {
    case "scene":
      next.scene = frame;
      next.phase = "running";
      break;
    case "state": {
      next.state = frame;
      const trail = view.alphaTrail.concat([{ t: frame.t, alpha: frame.alpha }]);
      next.alphaTrail = trail.length > ALPHA_TRAIL_MAX
        ? trail.slice(trail.length - ALPHA_TRAIL_MAX)
        : trail;
      break;
    }
    case "result":
      next.result = frame;
      next.phase = frame.aborted ? "aborted" : "done";
      break;
    case "warning":
      next.warnings = view.warnings.concat([frame.message]);
      break;
    case "error":
      next.errors = view.errors.concat([frame.message]);
      if (view.scene === null) next.phase = "error";
      break;
  }
  return next;
}

export function markDisconnected(view: SessionView): SessionView {
  if (view.phase === "done" || view.phase === "aborted" || view.phase === "error") {
    return view;
  }
  return {
    ...view,
    phase: "aborted",
    warnings: view.warnings.concat(["connection lost"]),
  };
}

export function bannerText(view: SessionView): string | null {
  const result = view.result;
  if (result === null) {
    return view.phase === "aborted" ? "session aborted" : null;
  }
  if (result.success && result.completion_s !== null) {
    return `Inserted in ${result.completion_s.toFixed(2)} s`;
  }
  if (result.aborted) return "session aborted";
  return `Failed: ${result.failure_reason ?? "unknown"}`;
}
