// Thin typed client over the service routes. Mutating calls must go
// through MutationQueue so a session sees one writer at a time.

import type {
  CrossValJson,
  FitResponse,
  RuleJson,
  SceneJson,
  SceneMode,
  SessionSummary,
  SplitJson,
  WorstCaseReportJson,
} from "./types.js";

export class ApiError extends Error {
  code: string;
  status: number;
  detail: string;

  constructor(status: number, code: string, message: string, detail = "") {
    super(message);
    this.status = status;
    this.code = code;
    this.detail = detail;
  }
}

async function parse<T>(resp: Response): Promise<T> {
  if (resp.ok) {
    return resp.json() as Promise<T>;
  }
  let body = { code: "http", message: resp.statusText, detail: "" };
  try {
    body = await resp.json();
  } catch {
    // non-JSON error body; keep the status text
  }
  throw new ApiError(resp.status, body.code, body.message, body.detail ?? "");
}

export class WorkbenchApi {
  base: string;

  constructor(base = "") {
    this.base = base;
  }

  private async post<T>(path: string, body: unknown): Promise<T> {
    return parse<T>(await fetch(this.base + path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    }));
  }

  private async patch<T>(path: string, body: unknown): Promise<T> {
    return parse<T>(await fetch(this.base + path, {
      method: "PATCH",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    }));
  }

  async createSession(csv: Blob | string, labelCol: string): Promise<SessionSummary> {
    return parse(await fetch(
      `${this.base}/sessions?label_col=${encodeURIComponent(labelCol)}`,
      { method: "POST", headers: { "Content-Type": "text/csv" }, body: csv }));
  }

  async sessionInfo(sid: string): Promise<SessionSummary> {
    return parse(await fetch(`${this.base}/sessions/${sid}`));
  }

  fit(sid: string, body: {
    method: string; kernel?: string; gamma?: number; seed?: number;
    positive_class?: string; super_class_name?: string;
  }): Promise<FitResponse> {
    return this.post(`/sessions/${sid}/model/fit`, body);
  }

  setThreshold(sid: string, t: number): Promise<FitResponse> {
    return this.patch(`/sessions/${sid}/model/threshold`, { t });
  }

  setAngle(sid: string, index: number, degrees: number): Promise<FitResponse> {
    return this.patch(`/sessions/${sid}/model/angles`, { index, degrees });
  }

  async scene(sid: string, mode: SceneMode): Promise<SceneJson> {
    return parse(await fetch(`${this.base}/sessions/${sid}/scene?mode=${mode}`));
  }

  submitSelection(sid: string, rect: { x0: number; y0: number; x1: number; y1: number }):
      Promise<{ rule: RuleJson }> {
    return this.post(`/sessions/${sid}/rules/selection`, { rect });
  }

  runBlocks(sid: string, algo: string, purity = 1.0, impurity = 0.0):
      Promise<{ blocks: RuleJson[] }> {
    return this.post(`/sessions/${sid}/blocks`, { algo, purity, impurity });
  }

  worstCase(sid: string, cap: number): Promise<{ split: SplitJson }> {
    return this.post(`/sessions/${sid}/worstcase`, { cap });
  }

  manualWorstCase(sid: string, indices: number[]): Promise<{ split: SplitJson }> {
    return this.post(`/sessions/${sid}/worstcase/manual`, { indices });
  }

  async worstCaseReport(sid: string): Promise<WorstCaseReportJson> {
    return parse(await fetch(`${this.base}/sessions/${sid}/report/worstcase`));
  }

  crossval(sid: string, model: string, k: number, seed: number): Promise<CrossValJson> {
    return this.post(`/sessions/${sid}/crossval`, { model, k, seed });
  }

  async replay(sid: string): Promise<{ consistent: boolean; ops: number }> {
    return this.post(`/sessions/${sid}/replay`, {});
  }
}

/** Serializes mutating requests: at most one in flight, FIFO order. */
export class MutationQueue {
  private tail: Promise<unknown> = Promise.resolve();
  private depth = 0;

  get pending(): number {
    return this.depth;
  }

  enqueue<T>(job: () => Promise<T>): Promise<T> {
    this.depth += 1;
    const run = this.tail.then(job);
    this.tail = run.catch(() => undefined).then(() => {
      this.depth -= 1;
    });
    return run;
  }
}
