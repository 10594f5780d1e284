// View state and the pure coordinate logic behind the canvas: pan/zoom
// world-to-screen transforms, selection rectangle normalization, and the
// state carried between server refreshes.

import type { EvaluationJson, RuleJson, SceneJson, SceneMode, SplitJson } from "./types.js";

export interface Rect {
  x0: number;
  y0: number;
  x1: number;
  y1: number;
}

/** Orders the corners so x0 < x1 and y0 < y1; zero-area rects are rejected
 *  by callers before submission. */
export function normalizeRect(ax: number, ay: number, bx: number, by: number): Rect {
  return {
    x0: Math.min(ax, bx),
    y0: Math.min(ay, by),
    x1: Math.max(ax, bx),
    y1: Math.max(ay, by),
  };
}

export function rectArea(r: Rect): number {
  return (r.x1 - r.x0) * (r.y1 - r.y0);
}

export interface Transform {
  toScreenX(wx: number): number;
  toScreenY(wy: number): number;
  toWorldX(sx: number): number;
  toWorldY(sy: number): number;
}

export interface SceneExtent {
  xMin: number;
  xMax: number;
  yMin: number;
  yMax: number;
}

export function sceneExtent(scene: SceneJson): SceneExtent {
  let xMin = Infinity, xMax = -Infinity, yMin = Infinity, yMax = -Infinity;
  for (const p of scene.polylines) {
    for (const [x, y] of p.vertices) {
      xMin = Math.min(xMin, x); xMax = Math.max(xMax, x);
      yMin = Math.min(yMin, y); yMax = Math.max(yMax, y);
    }
  }
  if (scene.threshold !== null) {
    xMin = Math.min(xMin, scene.threshold);
    xMax = Math.max(xMax, scene.threshold);
  }
  if (scene.bounds) {
    xMin = Math.min(xMin, scene.bounds[0]);
    xMax = Math.max(xMax, scene.bounds[1]);
  }
  xMin = Math.min(xMin, 0); yMin = Math.min(yMin, 0);
  xMax = Math.max(xMax, 0); yMax = Math.max(yMax, 0);
  if (!isFinite(xMin)) {
    return { xMin: 0, xMax: 1, yMin: 0, yMax: 1 };
  }
  return { xMin, xMax, yMin, yMax };
}

/** Fit the extent into width x height with 5% padding, then apply pan
 *  (screen pixels) and zoom about the viewport center. The y axis points
 *  up in world space and down on screen. */
export function makeTransform(extent: SceneExtent, width: number, height: number,
                              panX = 0, panY = 0, zoom = 1): Transform {
  const spanX = extent.xMax - extent.xMin || 1;
  const spanY = extent.yMax - extent.yMin || 1;
  const padX = spanX * 0.05, padY = spanY * 0.05;
  const x0 = extent.xMin - padX, x1 = extent.xMax + padX;
  const y0 = extent.yMin - padY, y1 = extent.yMax + padY;
  const baseSx = width / (x1 - x0);
  const baseSy = height / (y1 - y0);
  const cx = width / 2, cy = height / 2;
  const toScreenX = (wx: number) =>
    (((wx - x0) * baseSx) - cx) * zoom + cx + panX;
  const toScreenY = (wy: number) =>
    ((height - (wy - y0) * baseSy) - cy) * zoom + cy + panY;
  return {
    toScreenX,
    toScreenY,
    toWorldX: (sx: number) => ((sx - panX - cx) / zoom + cx) / baseSx + x0,
    toWorldY: (sy: number) => (height - ((sy - panY - cy) / zoom + cy)) / baseSy + y0,
  };
}

/** Angle fields show 2-decimal degrees; parsing clamps into [0, 90]. */
export function formatAngle(deg: number): string {
  return deg.toFixed(2);
}

export function parseAngle(text: string): number | null {
  const v = Number(text);
  if (!isFinite(v)) {
    return null;
  }
  return Math.min(90, Math.max(0, Math.round(v * 100) / 100));
}

export interface ViewState {
  sessionId: string | null;
  mode: SceneMode;
  scene: SceneJson | null;
  evaluation: EvaluationJson | null;  // always the last server response
  rules: RuleJson[];
  blocks: RuleJson[];
  split: SplitJson | null;
  anglesDeg: number[];
  classRoles: [string, string] | null;
  panX: number;
  panY: number;
  zoom: number;
  dragStart: { x: number; y: number } | null;  // world coords
  pendingRect: Rect | null;
  status: string;
}

export function initialViewState(): ViewState {
  return {
    sessionId: null,
    mode: "glcl",
    scene: null,
    evaluation: null,
    rules: [],
    blocks: [],
    split: null,
    anglesDeg: [],
    classRoles: null,
    panX: 0,
    panY: 0,
    zoom: 1,
    dragStart: null,
    pendingRect: null,
    status: "upload a CSV to begin",
  };
}

export function beginDrag(state: ViewState, wx: number, wy: number): void {
  state.dragStart = { x: wx, y: wy };
  state.pendingRect = null;
}

export function dragTo(state: ViewState, wx: number, wy: number): void {
  if (!state.dragStart) {
    return;
  }
  state.pendingRect = normalizeRect(state.dragStart.x, state.dragStart.y, wx, wy);
}

/** Finish a drag; returns the normalized rectangle when it has area. */
export function endDrag(state: ViewState, wx: number, wy: number): Rect | null {
  if (!state.dragStart) {
    return null;
  }
  const rect = normalizeRect(state.dragStart.x, state.dragStart.y, wx, wy);
  state.dragStart = null;
  state.pendingRect = null;
  return rectArea(rect) > 0 ? rect : null;
}

/** Point indices whose polyline endpoints fall inside a rectangle; used by
 *  the paired-coordinate brush to post an explicit worst-case selection. */
export function endpointsInRect(scene: SceneJson, rect: Rect): number[] {
  const out: number[] = [];
  scene.polylines.forEach((p, i) => {
    const [ex, ey] = p.vertices[p.vertices.length - 1];
    if (ex >= rect.x0 && ex <= rect.x1 && ey >= rect.y0 && ey <= rect.y1) {
      out.push(i);
    }
  });
  return out;
}
