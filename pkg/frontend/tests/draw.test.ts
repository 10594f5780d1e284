import { describe, expect, it } from "vitest";

import { classColors, renderScene, ROLE_COLORS, type Ctx2D } from "../src/draw.js";
import type { SceneJson } from "../src/types.js";
import { makeTransform, sceneExtent } from "../src/view.js";

/** Recording stand-in for CanvasRenderingContext2D. */
class FakeCtx implements Ctx2D {
  strokeStyle: string = "";
  fillStyle: string = "";
  lineWidth = 1;
  globalAlpha = 1;
  ops: { op: string; args?: unknown[]; style?: string; dash?: number[] }[] = [];
  private dash: number[] = [];

  beginPath() { this.ops.push({ op: "beginPath" }); }
  moveTo(x: number, y: number) { this.ops.push({ op: "moveTo", args: [x, y] }); }
  lineTo(x: number, y: number) { this.ops.push({ op: "lineTo", args: [x, y] }); }
  stroke() {
    this.ops.push({ op: "stroke", style: String(this.strokeStyle),
                    dash: [...this.dash] });
  }
  fill() { this.ops.push({ op: "fill", style: String(this.fillStyle) }); }
  rect(x: number, y: number, w: number, h: number) {
    this.ops.push({ op: "rect", args: [x, y, w, h] });
  }
  arc(x: number, y: number, r: number) {
    this.ops.push({ op: "arc", args: [x, y, r] });
  }
  setLineDash(segments: number[]) { this.dash = segments; }
  clearRect(x: number, y: number, w: number, h: number) {
    this.ops.push({ op: "clearRect", args: [x, y, w, h] });
  }
  fillText(text: string, x: number, y: number) {
    this.ops.push({ op: "fillText", args: [text, x, y] });
  }
}

const scene: SceneJson = {
  polylines: [
    { vertices: [[0, 0], [0.5, 0.3], [0.9, 0.4]], class: "a",
      mirrored: false, endpoint_projection: 0.9 },
    { vertices: [[0, 0], [0.5, -0.3], [0.6, -0.4]], class: "b",
      mirrored: true, endpoint_projection: 0.6 },
  ],
  threshold: 0.75,
  bounds: [0.55, 0.85],
  axis_range: [0.6, 0.9],
  legend: { a: "class-1", b: "class-2" },
};

function render(s: SceneJson = scene) {
  const ctx = new FakeCtx();
  const t = makeTransform(sceneExtent(s), 800, 600);
  renderScene(ctx, s, t, 800, 600);
  return { ctx, t };
}

describe("renderScene", () => {
  it("draws one stroked path per polyline in its class color", () => {
    const { ctx } = render();
    const colors = classColors(scene);
    const strokes = ctx.ops.filter((o) => o.op === "stroke");
    const classStrokes = strokes.filter(
      (o) => o.style === colors.get("a") || o.style === colors.get("b"));
    expect(classStrokes.length).toBe(2);
    expect(colors.get("a")).toBe(ROLE_COLORS[0]);
    expect(colors.get("b")).toBe(ROLE_COLORS[1]);
  });

  it("mirrored polylines draw below the axis", () => {
    const { ctx, t } = render();
    const axisY = t.toScreenY(0);
    const moves = ctx.ops.filter((o) => o.op === "lineTo");
    const ys = moves.map((o) => (o.args as number[])[1]);
    expect(Math.max(...ys)).toBeGreaterThan(axisY);  // something below
    expect(Math.min(...ys)).toBeLessThan(axisY);     // something above
  });

  it("endpoint markers land exactly on the projections", () => {
    const { ctx, t } = render();
    const arcs = ctx.ops.filter((o) => o.op === "arc");
    expect(arcs.length).toBe(2);
    const xs = arcs.map((o) => (o.args as number[])[0]);
    expect(xs[0]).toBeCloseTo(t.toScreenX(0.9), 6);
    expect(xs[1]).toBeCloseTo(t.toScreenX(0.6), 6);
  });

  it("threshold and both bounds draw as dashed verticals", () => {
    const { ctx } = render();
    const dashed = ctx.ops.filter(
      (o) => o.op === "stroke" && (o.dash ?? []).length > 0);
    expect(dashed.length).toBe(3);  // one threshold + two bounds
    const dashPatterns = new Set(dashed.map((o) => JSON.stringify(o.dash)));
    expect(dashPatterns.has(JSON.stringify([6, 4]))).toBe(true);
    expect(dashPatterns.has(JSON.stringify([3, 3]))).toBe(true);
  });

  it("omits the threshold line for scaffold scenes without one", () => {
    const { ctx } = render({ ...scene, threshold: null, bounds: null });
    const dashed = ctx.ops.filter(
      (o) => o.op === "stroke" && (o.dash ?? []).length > 0);
    expect(dashed.length).toBe(0);
  });

  it("renders a legend entry per class", () => {
    const { ctx } = render();
    const texts = ctx.ops.filter((o) => o.op === "fillText")
      .map((o) => (o.args as unknown[])[0]);
    expect(texts).toContain("a");
    expect(texts).toContain("b");
  });
});
