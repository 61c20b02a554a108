// Operator console: global top-down and side views, a camera panel that
// reveals the actual hole only when streamed, the autonomy gauge, force
// vectors and the session banner. All drawn numbers come from frames.

import { SessionClient } from "./client";
import { InputThrottle, VerticalAxis, pointerToWorld } from "./input";
import type { SceneFrame, StateFrame, Vec3 } from "./protocol";
import {
  alphaGaugeFill,
  cameraHole,
  contactColor,
  forceArrow,
  springWidth,
  worldToCanvas,
  type Axis,
  type Bounds,
  type Viewport,
} from "./render/gauges";
import { bannerText, type SessionView } from "./state";

const SEND_INTERVAL_MS = 1000 / 60;
const CAMERA_SPAN = 0.09; // meters shown around the tip in the camera panel

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (node === null) throw new Error(`missing element #${id}`);
  return node as T;
}

function sceneBounds(scene: SceneFrame): Bounds {
  return { min: scene.workspace_min, max: scene.workspace_max };
}

function drawPanel(
  ctx: CanvasRenderingContext2D, vp: Viewport, axes: [Axis, Axis],
  scene: SceneFrame, state: StateFrame | null, showActual: boolean,
): void {
  const bounds = sceneBounds(scene);
  const at = (p: Vec3) => worldToCanvas(p, axes, bounds, vp);

  ctx.strokeStyle = "#d5d8dc";
  ctx.strokeRect(vp.x0, vp.y0, vp.width, vp.height);

  // Machine path and nominal hole: known geometry from the scene frame.
  ctx.beginPath();
  scene.machine_path.forEach((p, i) => {
    const [x, y] = at(p);
    if (i === 0) ctx.moveTo(x, y);
    else ctx.lineTo(x, y);
  });
  ctx.strokeStyle = "#aab7b8";
  ctx.lineWidth = 1;
  ctx.stroke();

  const [hx, hy] = at(scene.nominal_hole);
  ctx.beginPath();
  ctx.arc(hx, hy, 6, 0, 2 * Math.PI);
  ctx.strokeStyle = "#17202a";
  ctx.stroke();

  if (state === null) return;

  const actual = cameraHole(state);
  if (showActual && actual !== null) {
    const [ax, ay] = at(actual);
    ctx.beginPath();
    ctx.arc(ax, ay, 6, 0, 2 * Math.PI);
    ctx.fillStyle = "#1e8449";
    ctx.fill();
  }

  // Virtual fixture spring between hand and machine references; thickness
  // conveys the fixture stiffness (affine in alpha).
  const [mhx, mhy] = at(state.q_h);
  const [mmx, mmy] = at(state.q_m);
  ctx.beginPath();
  ctx.moveTo(mhx, mhy);
  ctx.lineTo(mmx, mmy);
  ctx.strokeStyle = "#85929e";
  ctx.lineWidth = springWidth(state.alpha, 1, 6);
  ctx.stroke();
  ctx.lineWidth = 1;

  // Force arrow at the hand.
  const arrow = forceArrow([mhx, mhy], state.f_total, axes, 8, 40);
  ctx.beginPath();
  ctx.moveTo(arrow.from[0], arrow.from[1]);
  ctx.lineTo(arrow.to[0], arrow.to[1]);
  ctx.strokeStyle = "#e67e22";
  ctx.lineWidth = 2;
  ctx.stroke();
  ctx.lineWidth = 1;

  // References and the physical tip.
  const dots: Array<[Vec3, string]> = [
    [state.q_m, "#808b96"],
    [state.q_h, "#e67e22"],
    [state.q_ref, "#8e44ad"],
  ];
  for (const [p, color] of dots) {
    const [x, y] = at(p);
    ctx.beginPath();
    ctx.arc(x, y, 3, 0, 2 * Math.PI);
    ctx.fillStyle = color;
    ctx.fill();
  }
  const [tx, ty] = at(state.tip);
  ctx.beginPath();
  ctx.arc(tx, ty, 4, 0, 2 * Math.PI);
  ctx.fillStyle = contactColor(state.contact);
  ctx.fill();
}

function drawCamera(
  ctx: CanvasRenderingContext2D, vp: Viewport,
  scene: SceneFrame, state: StateFrame | null,
): void {
  ctx.fillStyle = "#1b2631";
  ctx.fillRect(vp.x0, vp.y0, vp.width, vp.height);
  if (state === null) return;

  // Local view centered on the tip, x/y plane.
  const bounds: Bounds = {
    min: [state.tip[0] - CAMERA_SPAN, state.tip[1] - CAMERA_SPAN, 0],
    max: [state.tip[0] + CAMERA_SPAN, state.tip[1] + CAMERA_SPAN, 1],
  };
  const at = (p: Vec3) => worldToCanvas(p, [0, 1], bounds, vp);

  const actual = cameraHole(state);
  if (actual !== null) {
    const [ax, ay] = at(actual);
    ctx.beginPath();
    ctx.arc(ax, ay, (scene.hole_radius / CAMERA_SPAN) * (vp.width / 2), 0, 2 * Math.PI);
    ctx.fillStyle = "#145a32";
    ctx.fill();
  } else {
    ctx.fillStyle = "#7f8c8d";
    ctx.font = "12px sans-serif";
    ctx.fillText("hole not in view", vp.x0 + 10, vp.y0 + 20);
  }

  const [tx, ty] = at(state.tip);
  ctx.beginPath();
  ctx.arc(tx, ty, (scene.peg_radius / CAMERA_SPAN) * (vp.width / 2), 0, 2 * Math.PI);
  ctx.fillStyle = contactColor(state.contact);
  ctx.fill();
}

function drawGauge(ctx: CanvasRenderingContext2D, vp: Viewport, alpha: number | null): void {
  ctx.strokeStyle = "#17202a";
  ctx.strokeRect(vp.x0, vp.y0, vp.width, vp.height);
  if (alpha === null) return;
  const fill = alphaGaugeFill(alpha);
  ctx.fillStyle = "#117a65";
  ctx.fillRect(vp.x0, vp.y0, vp.width * fill, vp.height);
  ctx.fillStyle = "#17202a";
  ctx.font = "12px sans-serif";
  ctx.fillText(`autonomy ${alpha.toFixed(3)}`, vp.x0 + 4, vp.y0 + vp.height + 14);
}

function main(): void {
  const canvas = el<HTMLCanvasElement>("view");
  const banner = el<HTMLDivElement>("banner");
  const warnings = el<HTMLDivElement>("warnings");
  const reconnect = el<HTMLButtonElement>("reconnect");
  const ctx = canvas.getContext("2d");
  if (ctx === null) throw new Error("no 2d context");

  const topVp: Viewport = { x0: 10, y0: 10, width: 300, height: 300 };
  const sideVp: Viewport = { x0: 330, y0: 10, width: 300, height: 300 };
  const camVp: Viewport = { x0: 650, y0: 10, width: 220, height: 220 };
  const gaugeVp: Viewport = { x0: 650, y0: 260, width: 220, height: 18 };

  const url = `ws://${window.location.host}/session`;
  const client = new SessionClient(url, (u) => new WebSocket(u) as never);
  const throttle = new InputThrottle(SEND_INTERVAL_MS, (pos) => client.sendInput(pos));

  let vertical: VerticalAxis | null = null;
  let latest: SessionView = client.view();
  client.onChange((view) => {
    latest = view;
    if (vertical === null && view.scene !== null) {
      vertical = new VerticalAxis(
        view.scene.workspace_min[2], view.scene.workspace_max[2], 0.12,
      );
    }
  });

  canvas.addEventListener("pointermove", (ev) => {
    if (latest.scene === null || vertical === null) return;
    const rect = canvas.getBoundingClientRect();
    const pos = pointerToWorld(
      ev.clientX - rect.left, ev.clientY - rect.top, vertical.value,
      sceneBounds(latest.scene), topVp,
    );
    throttle.offer(pos, performance.now());
  });
  canvas.addEventListener("wheel", (ev) => {
    ev.preventDefault();
    vertical?.wheel(ev.deltaY);
  });
  reconnect.addEventListener("click", () => {
    reconnect.hidden = true;
    client.connect({ mode: "shared" });
  });

  const render = () => {
    throttle.tick(performance.now());
    ctx.clearRect(0, 0, canvas.width, canvas.height);
    const { scene, state } = latest;
    if (scene !== null) {
      drawPanel(ctx, topVp, [0, 1], scene, state, false);
      drawPanel(ctx, sideVp, [0, 2], scene, state, false);
      drawCamera(ctx, camVp, scene, state);
    }
    drawGauge(ctx, gaugeVp, state === null ? null : state.alpha);
    banner.textContent = bannerText(latest) ?? "";
    warnings.textContent = latest.warnings.concat(latest.errors).join(" | ");
    reconnect.hidden = !(latest.phase === "aborted" && latest.result === null);
    requestAnimationFrame(render);
  };
  requestAnimationFrame(render);

  client.connect({ mode: "shared" });
}

main();
