// DOM wiring for the workbench: upload, fit controls, angle fields,
// threshold slider, canvas with pan/zoom and brush selection, rule cards,
// block analytics, and the worst-case report grid. All numbers shown in
// the analytics panels come from server responses.

import { ApiError, MutationQueue, WorkbenchApi } from "./api.js";
import { classColors, renderScene } from "./draw.js";
import {
  evaluationRows,
  reportRows,
  ruleBoundsText,
  ruleCardRows,
  sessionRows,
} from "./panels.js";
import type { FitResponse, RuleJson, SceneMode } from "./types.js";
import {
  beginDrag,
  dragTo,
  endDrag,
  endpointsInRect,
  formatAngle,
  initialViewState,
  makeTransform,
  parseAngle,
  sceneExtent,
} from "./view.js";

const api = new WorkbenchApi("");
const queue = new MutationQueue();
const state = initialViewState();

const $ = <T extends HTMLElement>(id: string): T => {
  const el = document.getElementById(id);
  if (!el) {
    throw new Error(`missing element #${id}`);
  }
  return el as T;
};

const canvas = $("scene") as unknown as HTMLCanvasElement;
const ctx = canvas.getContext("2d")!;

function setStatus(text: string): void {
  state.status = text;
  $("status").textContent = text;
}

function fail(err: unknown): void {
  if (err instanceof ApiError) {
    setStatus(`${err.code}: ${err.message}`);
  } else {
    setStatus(String(err));
  }
}

function renderRows(el: HTMLElement, rows: [string, string][]): void {
  el.innerHTML = "";
  for (const [label, value] of rows) {
    const div = document.createElement("div");
    div.className = "row";
    const k = document.createElement("span");
    k.className = "k";
    k.textContent = label;
    const v = document.createElement("span");
    v.className = "v";
    v.textContent = value;
    div.append(k, v);
    el.appendChild(div);
  }
}

function redraw(): void {
  if (!state.scene) {
    ctx.clearRect(0, 0, canvas.width, canvas.height);
    return;
  }
  const t = makeTransform(sceneExtent(state.scene), canvas.width,
                          canvas.height, state.panX, state.panY, state.zoom);
  const strips = state.rules.map((r) => stripForRule(r));
  renderScene(ctx as never, state.scene, t, canvas.width, canvas.height,
              state.pendingRect, strips);
}

/** Rule overlay strip: the projection interval it was selected from is not
 *  stored server-side, so strips span the endpoint extent of its members. */
function stripForRule(rule: RuleJson): { x0: number; y0: number; x1: number; y1: number } {
  const scene = state.scene!;
  let x0 = Infinity, x1 = -Infinity, y0 = Infinity, y1 = -Infinity;
  for (const i of rule.member_indices) {
    const p = scene.polylines[i];
    if (!p) {
      continue;
    }
    const [ex, ey] = p.vertices[p.vertices.length - 1];
    x0 = Math.min(x0, ex); x1 = Math.max(x1, ex);
    y0 = Math.min(y0, ey); y1 = Math.max(y1, ey);
  }
  return { x0, y0, x1, y1 };
}

async function refreshScene(): Promise<void> {
  if (!state.sessionId) {
    return;
  }
  state.scene = await api.scene(state.sessionId, state.mode);
  redraw();
}

function applyFitResponse(resp: FitResponse): void {
  state.evaluation = resp.evaluation;
  state.anglesDeg = resp.model.angles_deg;
  state.classRoles = resp.model.class_roles;
  renderRows($("analytics"), evaluationRows(resp.evaluation));
  renderAngleFields();
  const slider = $("threshold") as HTMLInputElement;
  slider.value = String(resp.model.threshold);
  $("threshold-value").textContent = resp.model.threshold.toFixed(4);
}

function renderAngleFields(): void {
  const host = $("angles");
  host.innerHTML = "";
  state.anglesDeg.forEach((deg, i) => {
    const wrap = document.createElement("label");
    wrap.className = "angle";
    wrap.textContent = `Q${i + 1}`;
    const input = document.createElement("input");
    input.type = "text";
    input.value = formatAngle(deg);
    input.addEventListener("change", () => {
      const parsed = parseAngle(input.value);
      if (parsed === null || !state.sessionId) {
        input.value = formatAngle(state.anglesDeg[i]);  // revert bad input
        return;
      }
      queue.enqueue(() => api.setAngle(state.sessionId!, i, parsed))
        .then(async (resp) => {
          applyFitResponse(resp);
          await refreshScene();
          setStatus(`angle Q${i + 1} set to ${formatAngle(parsed)} deg`);
        })
        .catch((err) => {
          input.value = formatAngle(state.anglesDeg[i]);
          fail(err);
        });
    });
    wrap.appendChild(input);
    host.appendChild(wrap);
  });
}

function renderRuleCards(): void {
  const host = $("rules");
  host.innerHTML = "";
  for (const rule of [...state.rules, ...state.blocks]) {
    const card = document.createElement("div");
    card.className = "card";
    const rows = document.createElement("div");
    renderRows(rows, ruleCardRows(rule));
    const text = document.createElement("p");
    text.className = "rule-text";
    text.textContent = ruleBoundsText(rule);
    card.append(rows, text);
    host.appendChild(card);
  }
}

// ---- upload and fit -------------------------------------------------------

$("upload").addEventListener("change", async (ev) => {
  const input = ev.target as HTMLInputElement;
  const file = input.files?.[0];
  if (!file) {
    return;
  }
  try {
    const labelCol = ($("label-col") as HTMLInputElement).value || "class";
    const info = await api.createSession(file, labelCol);
    Object.assign(state, initialViewState());
    state.sessionId = info.id;
    renderRows($("session"), sessionRows(info));
    setStatus(`session ${info.id}: ${info.dataset.n_points} points`);
  } catch (err) {
    fail(err);
  }
});

$("fit").addEventListener("click", () => {
  if (!state.sessionId) {
    return;
  }
  const method = ($("method") as HTMLSelectElement).value;
  const kernel = ($("kernel") as HTMLSelectElement).value;
  const positive = ($("positive") as HTMLInputElement).value.trim();
  const body: Parameters<typeof api.fit>[1] = { method };
  if (method === "glc_nl") {
    body.kernel = kernel;
  }
  if (positive) {
    body.positive_class = positive;
  }
  queue.enqueue(() => api.fit(state.sessionId!, body))
    .then(async (resp) => {
      state.rules = [];
      state.blocks = [];
      state.split = null;
      applyFitResponse(resp);
      renderRuleCards();
      await refreshScene();
      setStatus(`fitted ${method}; accuracy ${resp.evaluation.accuracy_display}`);
    })
    .catch(fail);
});

($("threshold") as HTMLInputElement).addEventListener("change", (ev) => {
  if (!state.sessionId) {
    return;
  }
  const t = Number((ev.target as HTMLInputElement).value);
  queue.enqueue(() => api.setThreshold(state.sessionId!, t))
    .then(async (resp) => {
      applyFitResponse(resp);
      await refreshScene();
    })
    .catch(fail);
});

// ---- scene modes ----------------------------------------------------------

for (const mode of ["glcl", "dsc1", "dsc2"] as SceneMode[]) {
  $(`mode-${mode}`).addEventListener("click", async () => {
    state.mode = mode;
    state.panX = 0;
    state.panY = 0;
    state.zoom = 1;
    try {
      await refreshScene();
      setStatus(`mode ${mode}`);
    } catch (err) {
      fail(err);
    }
  });
}

// ---- canvas interaction ---------------------------------------------------

let panning: { sx: number; sy: number } | null = null;

function worldPos(ev: MouseEvent): [number, number] {
  const bounds = canvas.getBoundingClientRect();
  const sx = ev.clientX - bounds.left;
  const sy = ev.clientY - bounds.top;
  const t = makeTransform(sceneExtent(state.scene!), canvas.width,
                          canvas.height, state.panX, state.panY, state.zoom);
  return [t.toWorldX(sx), t.toWorldY(sy)];
}

canvas.addEventListener("mousedown", (ev) => {
  if (!state.scene) {
    return;
  }
  if (ev.shiftKey) {
    const [wx, wy] = worldPos(ev);
    beginDrag(state, wx, wy);
  } else {
    panning = { sx: ev.clientX - state.panX, sy: ev.clientY - state.panY };
  }
});

canvas.addEventListener("mousemove", (ev) => {
  if (!state.scene) {
    return;
  }
  if (state.dragStart) {
    const [wx, wy] = worldPos(ev);
    dragTo(state, wx, wy);
    redraw();
  } else if (panning) {
    state.panX = ev.clientX - panning.sx;
    state.panY = ev.clientY - panning.sy;
    redraw();
  }
});

canvas.addEventListener("mouseup", (ev) => {
  if (panning) {
    panning = null;
    return;
  }
  if (!state.scene || !state.dragStart || !state.sessionId) {
    return;
  }
  const [wx, wy] = worldPos(ev);
  const rect = endDrag(state, wx, wy);
  redraw();
  if (!rect) {
    setStatus("selection has no area");
    return;
  }
  if (state.mode === "dsc2") {
    // paired-coordinate brush: post the explicit member indices
    const indices = endpointsInRect(state.scene, rect);
    if (!indices.length) {
      setStatus("no endpoints inside the brush");
      return;
    }
    queue.enqueue(() => api.manualWorstCase(state.sessionId!, indices))
      .then((resp) => {
        state.split = resp.split;
        setStatus(`manual worst-case split: ${resp.split.indices.length} points`);
      })
      .catch(fail);
    return;
  }
  queue.enqueue(() => api.submitSelection(state.sessionId!, rect))
    .then(async (resp) => {
      state.rules.push(resp.rule);
      renderRuleCards();
      await refreshScene();
      setStatus(`rule ${resp.rule.analytics.block}: `
                + `accuracy ${resp.rule.analytics.accuracy_display}`);
    })
    .catch(fail);
});

canvas.addEventListener("wheel", (ev) => {
  if (!state.scene) {
    return;
  }
  ev.preventDefault();
  const factor = ev.deltaY < 0 ? 1.1 : 1 / 1.1;
  state.zoom = Math.min(40, Math.max(0.1, state.zoom * factor));
  redraw();
}, { passive: false });

// ---- blocks, worst case, replay -------------------------------------------

for (const algo of ["ihyper", "mhyper", "imhyper", "hbrl"]) {
  $(`blocks-${algo}`).addEventListener("click", () => {
    if (!state.sessionId) {
      return;
    }
    queue.enqueue(() => api.runBlocks(state.sessionId!, algo))
      .then((resp) => {
        state.blocks = resp.blocks;
        renderRuleCards();
        setStatus(`${algo}: ${resp.blocks.length} blocks`);
      })
      .catch(fail);
  });
}

$("worstcase").addEventListener("click", () => {
  if (!state.sessionId) {
    return;
  }
  const cap = Number(($("cap") as HTMLInputElement).value) || 0.9;
  queue.enqueue(() => api.worstCase(state.sessionId!, cap))
    .then(async (resp) => {
      state.split = resp.split;
      await refreshScene();
      const rep = await api.worstCaseReport(state.sessionId!);
      const host = $("report");
      host.innerHTML = "";
      for (const [title, rows] of reportRows(rep)) {
        const section = document.createElement("div");
        section.className = "card";
        const h = document.createElement("h3");
        h.textContent = title;
        const body = document.createElement("div");
        renderRows(body, rows);
        section.append(h, body);
        host.appendChild(section);
      }
      setStatus(`worst-case split: ${resp.split.indices.length} points`);
    })
    .catch(fail);
});

$("replay").addEventListener("click", () => {
  if (!state.sessionId) {
    return;
  }
  queue.enqueue(() => api.replay(state.sessionId!))
    .then((resp) => {
      setStatus(`replay of ${resp.ops} ops: `
                + (resp.consistent ? "consistent" : "INCONSISTENT"));
    })
    .catch(fail);
});

setStatus(state.status);
