// Canvas scene rendering. Drawing goes through the Ctx2D subset below so
// tests can pass a recording stand-in instead of a real canvas context.

import type { SceneJson } from "./types.js";
import type { Rect, Transform } from "./view.js";

export interface Ctx2D {
  strokeStyle: string | CanvasGradient | CanvasPattern;
  fillStyle: string | CanvasGradient | CanvasPattern;
  lineWidth: number;
  globalAlpha: number;
  beginPath(): void;
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  stroke(): void;
  fill(): void;
  rect(x: number, y: number, w: number, h: number): void;
  arc(x: number, y: number, r: number, a0: number, a1: number): void;
  setLineDash(segments: number[]): void;
  clearRect(x: number, y: number, w: number, h: number): void;
  fillText(text: string, x: number, y: number): void;
}

export const ROLE_COLORS = ["#7d3cb5", "#2e8b57", "#cc5500", "#1f6fb5"];
const THRESHOLD_COLOR = "#1c9c31";
const BOUNDS_COLOR = "#d4b106";

export function classColors(scene: SceneJson): Map<string, string> {
  const colors = new Map<string, string>();
  Object.keys(scene.legend).forEach((label, i) => {
    colors.set(label, ROLE_COLORS[i % ROLE_COLORS.length]);
  });
  return colors;
}

function dashedVertical(ctx: Ctx2D, x: number, height: number, color: string,
                        dash: number[]): void {
  ctx.setLineDash(dash);
  ctx.strokeStyle = color;
  ctx.lineWidth = 1.5;
  ctx.beginPath();
  ctx.moveTo(x, 0);
  ctx.lineTo(x, height);
  ctx.stroke();
  ctx.setLineDash([]);
}

export function renderScene(ctx: Ctx2D, scene: SceneJson, t: Transform,
                            width: number, height: number,
                            pendingRect: Rect | null = null,
                            ruleStrips: Rect[] = []): void {
  ctx.clearRect(0, 0, width, height);
  const colors = classColors(scene);

  // horizontal projection axis through world y = 0
  ctx.globalAlpha = 1;
  ctx.setLineDash([]);
  ctx.strokeStyle = "#999999";
  ctx.lineWidth = 1;
  ctx.beginPath();
  ctx.moveTo(0, t.toScreenY(0));
  ctx.lineTo(width, t.toScreenY(0));
  ctx.stroke();

  ctx.globalAlpha = 0.55;
  for (const p of scene.polylines) {
    ctx.strokeStyle = colors.get(p.class ?? "") ?? "#333333";
    ctx.lineWidth = 1;
    ctx.beginPath();
    ctx.moveTo(t.toScreenX(p.vertices[0][0]), t.toScreenY(p.vertices[0][1]));
    for (let i = 1; i < p.vertices.length; i++) {
      ctx.lineTo(t.toScreenX(p.vertices[i][0]), t.toScreenY(p.vertices[i][1]));
    }
    ctx.stroke();
    // endpoint marker sits exactly on the projection
    const [ex, ey] = p.vertices[p.vertices.length - 1];
    ctx.fillStyle = ctx.strokeStyle;
    ctx.beginPath();
    ctx.arc(t.toScreenX(ex), t.toScreenY(ey), 1.6, 0, Math.PI * 2);
    ctx.fill();
  }
  ctx.globalAlpha = 1;

  if (scene.threshold !== null) {
    dashedVertical(ctx, t.toScreenX(scene.threshold), height,
                   THRESHOLD_COLOR, [6, 4]);
  }
  if (scene.bounds) {
    dashedVertical(ctx, t.toScreenX(scene.bounds[0]), height,
                   BOUNDS_COLOR, [3, 3]);
    dashedVertical(ctx, t.toScreenX(scene.bounds[1]), height,
                   BOUNDS_COLOR, [3, 3]);
  }

  for (const strip of ruleStrips) {
    drawWorldRect(ctx, strip, t, "#d04040", 0.10);
  }
  if (pendingRect) {
    drawWorldRect(ctx, pendingRect, t, "#d04040", 0.18);
  }

  // legend, top-left
  let ty = 14;
  for (const [label] of colors) {
    ctx.fillStyle = colors.get(label) ?? "#333333";
    ctx.fillText(label, 6, ty);
    ty += 14;
  }
}

function drawWorldRect(ctx: Ctx2D, r: Rect, t: Transform, color: string,
                       alpha: number): void {
  const sx = t.toScreenX(r.x0);
  const sy = t.toScreenY(r.y1);  // world y up, screen y down
  const w = t.toScreenX(r.x1) - sx;
  const h = t.toScreenY(r.y0) - sy;
  ctx.globalAlpha = alpha;
  ctx.fillStyle = color;
  ctx.beginPath();
  ctx.rect(sx, sy, w, h);
  ctx.fill();
  ctx.globalAlpha = 1;
  ctx.strokeStyle = color;
  ctx.lineWidth = 1;
  ctx.setLineDash([4, 3]);
  ctx.beginPath();
  ctx.rect(sx, sy, w, h);
  ctx.stroke();
  ctx.setLineDash([]);
}
