// Frame types for the teleoperation websocket protocol. The UI never
// simulates anything: these frames are the only source of displayed values.

export type Vec3 = [number, number, number];

export interface SceneFrame {
  type: "scene";
  version: string;
  mode: string;
  seed: number;
  dt: number;
  stream_hz: number;
  timeout: number;
  surface_point: Vec3;
  surface_normal: Vec3;
  nominal_hole: Vec3;
  hole_radius: number;
  peg_radius: number;
  insertion_depth: number;
  sigma_e: number;
  fov_radius: number;
  workspace_min: Vec3;
  workspace_max: Vec3;
  machine_path: Vec3[];
}

export interface StateFrame {
  type: "state";
  tick: number;
  t: number;
  tip: Vec3;
  q_h: Vec3;
  q_m: Vec3;
  q_ref: Vec3;
  alpha: number;
  d_e: number;
  f_total: Vec3;
  f_fixture: Vec3;
  f_field: Vec3;
  contact: string;
  actual_hole: Vec3 | null;
}

export interface ResultFrame {
  type: "result";
  success: boolean;
  completion_s: number | null;
  failure_reason: string | null;
  n_ticks: number;
  aborted: boolean;
}

export interface WarningFrame {
  type: "warning";
  message: string;
}

export interface ErrorFrame {
  type: "error";
  message: string;
}

export type ServerFrame =
  | SceneFrame
  | StateFrame
  | ResultFrame
  | WarningFrame
  | ErrorFrame;

export interface StartOptions {
  mode?: "shared" | "autonomous";
  seed?: number;
  pace?: "realtime" | "turbo";
  config?: Record<string, unknown>;
}

export class ProtocolError extends Error {}

function isFiniteNumber(v: unknown): v is number {
  return typeof v === "number" && Number.isFinite(v);
}

function isVec3(v: unknown): v is Vec3 {
  return Array.isArray(v) && v.length === 3 && v.every(isFiniteNumber);
}

function need(cond: boolean, what: string): void {
  if (!cond) throw new ProtocolError(`bad frame: ${what}`);
}

export function parseFrame(raw: unknown): ServerFrame {
  need(typeof raw === "object" && raw !== null, "not an object");
  const obj = raw as Record<string, unknown>;
  const type = obj.type;
  switch (type) {
    case "scene": {
      need(isVec3(obj.surface_point), "scene.surface_point");
      need(isVec3(obj.surface_normal), "scene.surface_normal");
      need(isVec3(obj.nominal_hole), "scene.nominal_hole");
      need(isVec3(obj.workspace_min), "scene.workspace_min");
      need(isVec3(obj.workspace_max), "scene.workspace_max");
      need(isFiniteNumber(obj.hole_radius), "scene.hole_radius");
      need(isFiniteNumber(obj.peg_radius), "scene.peg_radius");
      need(isFiniteNumber(obj.insertion_depth), "scene.insertion_depth");
      need(isFiniteNumber(obj.fov_radius), "scene.fov_radius");
      need(Array.isArray(obj.machine_path) && obj.machine_path.every(isVec3),
        "scene.machine_path");
      return obj as unknown as SceneFrame;
    }
    case "state": {
      for (const key of ["tip", "q_h", "q_m", "q_ref", "f_total", "f_fixture", "f_field"]) {
        need(isVec3(obj[key]), `state.${key}`);
      }
      need(isFiniteNumber(obj.t), "state.t");
      need(isFiniteNumber(obj.tick), "state.tick");
      need(isFiniteNumber(obj.alpha), "state.alpha");
      need(isFiniteNumber(obj.d_e), "state.d_e");
      need(typeof obj.contact === "string", "state.contact");
      need(obj.actual_hole === null || isVec3(obj.actual_hole), "state.actual_hole");
      return obj as unknown as StateFrame;
    }
    case "result": {
      need(typeof obj.success === "boolean", "result.success");
      need(obj.completion_s === null || isFiniteNumber(obj.completion_s),
        "result.completion_s");
      need(obj.failure_reason === null || typeof obj.failure_reason === "string",
        "result.failure_reason");
      need(typeof obj.aborted === "boolean", "result.aborted");
      return obj as unknown as ResultFrame;
    }
    case "warning":
    case "error": {
      need(typeof obj.message === "string", `${type}.message`);
      return obj as unknown as WarningFrame | ErrorFrame;
    }
    default:
      throw new ProtocolError(`unknown frame type ${String(type)}`);
  }
}

export function startMessage(opts: StartOptions): Record<string, unknown> {
  const msg: Record<string, unknown> = { type: "start" };
  if (opts.mode !== undefined) msg.mode = opts.mode;
  if (opts.seed !== undefined) msg.seed = opts.seed;
  if (opts.pace !== undefined) msg.pace = opts.pace;
  if (opts.config !== undefined) msg.config = opts.config;
  return msg;
}

export function inputMessage(pos: Vec3): Record<string, unknown> {
  return { type: "input", pos: [pos[0], pos[1], pos[2]] };
}

export function stopMessage(): Record<string, unknown> {
  return { type: "stop" };
}
