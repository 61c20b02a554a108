// Shared frame literals matching the wire format of the python service.

export function sceneFrame(overrides: Record<string, unknown> = {}) {
  return {
    type: "scene",
    version: "0.1.0",
    mode: "shared",
    seed: 5,
    dt: 0.001,
    stream_hz: 30,
    timeout: 30,
    surface_point: [0.3, 0, 0],
    surface_normal: [0, 0, 1],
    nominal_hole: [0.35, 0.05, 0],
    hole_radius: 0.01,
    peg_radius: 0.004,
    insertion_depth: 0.01,
    sigma_e: 0.01,
    fov_radius: 0.06,
    workspace_min: [0.17, -0.2, -0.07],
    workspace_max: [0.43, 0.2, 0.32],
    machine_path: [[0.19, -0.18, 0.26], [0.35, 0.05, -0.05]],
    ...overrides,
  };
}

export function stateFrame(overrides: Record<string, unknown> = {}) {
  return {
    type: "state",
    tick: 33,
    t: 0.033,
    tip: [0.19, -0.18, 0.26],
    q_h: [0.19, -0.18, 0.26],
    q_m: [0.19, -0.18, 0.26],
    q_ref: [0.19, -0.18, 0.26],
    alpha: 0.97,
    d_e: 0.26,
    f_total: [0, 0, 0],
    f_fixture: [0, 0, 0],
    f_field: [0, 0, 0],
    contact: "Free",
    actual_hole: null,
    ...overrides,
  };
}

export function resultFrame(overrides: Record<string, unknown> = {}) {
  return {
    type: "result",
    success: true,
    completion_s: 4.2,
    failure_reason: null,
    n_ticks: 4200,
    aborted: false,
    ...overrides,
  };
}
