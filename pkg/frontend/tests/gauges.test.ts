import { describe, expect, it } from "vitest";

import { parseFrame, type StateFrame, type Vec3 } from "../src/protocol";
import {
  alphaGaugeFill,
  cameraHole,
  canvasToWorld,
  contactColor,
  forceArrow,
  springWidth,
  worldToCanvas,
  type Bounds,
  type Viewport,
} from "../src/render/gauges";
import { stateFrame } from "./fixtures";

const bounds: Bounds = { min: [0.17, -0.2, -0.07], max: [0.43, 0.2, 0.32] };
const vp: Viewport = { x0: 10, y0: 20, width: 300, height: 200 };

describe("projection", () => {
  it("maps the bounds corners to the viewport corners with y flipped", () => {
    expect(worldToCanvas([0.17, -0.2, 0], [0, 1], bounds, vp)).toEqual([10, 220]);
    expect(worldToCanvas([0.43, 0.2, 0], [0, 1], bounds, vp)).toEqual([310, 20]);
    expect(worldToCanvas([0.3, 0, 0.32], [0, 2], bounds, vp)[1]).toBe(20);
  });

  it("round-trips through canvasToWorld", () => {
    const p: Vec3 = [0.31, 0.07, 0.1];
    const [px, py] = worldToCanvas(p, [0, 1], bounds, vp);
    const [wx, wy] = canvasToWorld(px, py, [0, 1], bounds, vp);
    expect(wx).toBeCloseTo(0.31, 12);
    expect(wy).toBeCloseTo(0.07, 12);
  });
});

describe("autonomy gauge and spring", () => {
  it("alpha = 1 fills the gauge and draws the spring at full width", () => {
    expect(alphaGaugeFill(1.0)).toBe(1.0);
    expect(springWidth(1.0, 1, 6)).toBe(6);
  });

  it("is linear in alpha between the endpoints", () => {
    expect(alphaGaugeFill(0.0)).toBe(0.0);
    expect(alphaGaugeFill(0.25)).toBe(0.25);
    expect(springWidth(0.0, 1, 6)).toBe(1);
    expect(springWidth(0.5, 1, 6)).toBeCloseTo(3.5, 12);
  });

  it("clamps out-of-range values", () => {
    expect(alphaGaugeFill(-0.1)).toBe(0);
    expect(alphaGaugeFill(1.3)).toBe(1);
    expect(springWidth(2.0, 1, 6)).toBe(6);
  });
});

describe("force arrows", () => {
  it("projects onto the panel axes and reports the 3-D magnitude", () => {
    const arrow = forceArrow([100, 100], [3, 0, 4], [0, 2], 10, 1000);
    expect(arrow.from).toEqual([100, 100]);
    expect(arrow.to[0]).toBeCloseTo(130, 12);  // +x right
    expect(arrow.to[1]).toBeCloseTo(60, 12);   // +z up on screen
    expect(arrow.magnitude).toBeCloseTo(5, 12);
  });

  it("clamps the drawn length but keeps the direction", () => {
    const arrow = forceArrow([0, 0], [30, 40, 0], [0, 1], 10, 50);
    const len = Math.hypot(arrow.to[0], arrow.to[1]);
    expect(len).toBeCloseTo(50, 9);
    expect(arrow.to[0] / arrow.to[1]).toBeCloseTo(30 / -40, 9);
  });
});

describe("camera panel visibility", () => {
  it("hides the actual hole when the frame does not carry it", () => {
    const hidden = parseFrame(stateFrame({ actual_hole: null })) as StateFrame;
    expect(cameraHole(hidden)).toBeNull();
    expect(cameraHole(null)).toBeNull();
  });

  it("shows the hole exactly where the frame put it", () => {
    const seen = parseFrame(stateFrame({ actual_hole: [0.365, 0.05, 0.0] })) as StateFrame;
    expect(cameraHole(seen)).toEqual([0.365, 0.05, 0.0]);
  });
});

describe("contact colors", () => {
  it("maps every protocol contact value and falls back for strangers", () => {
    const known = ["Free", "SurfaceCollision", "InHoleMouth", "Inserted"];
    const colors = known.map(contactColor);
    expect(new Set(colors).size).toBe(4);
    expect(contactColor("Wat")).toBe("#566573");
  });
});
