// Source-level guard for the no-client-side-classification invariant: the
// client must never do arithmetic on accuracy or coverage values, and must
// never compare projections against the threshold itself.

import { readdirSync, readFileSync } from "node:fs";
import { join } from "node:path";

import { describe, expect, it } from "vitest";

const SRC = join(__dirname, "..", "src");

function sources(): [string, string][] {
  return readdirSync(SRC)
    .filter((f) => f.endsWith(".ts"))
    .map((f) => [f, readFileSync(join(SRC, f), "utf-8")]);
}

describe("client-side analytics hygiene", () => {
  it("does no arithmetic on accuracy or data_used fields", () => {
    const forbidden = [
      /accuracy\s*[*/+%-]/,
      /[*/+%-]\s*accuracy/,
      /data_used\s*[*/+%-]/,
      /\.accuracy\s*\)?\s*\*\s*100/,
      /toFixed[^\n]*accuracy/,
      /misclassified\s*[*/+-]/,
    ];
    for (const [name, text] of sources()) {
      for (const pattern of forbidden) {
        expect(pattern.test(text), `${name} matches ${pattern}`).toBe(false);
      }
    }
  });

  it("never classifies points against the threshold locally", () => {
    const forbidden = [
      /endpoint_projection\s*[<>]=?\s*[^=]*threshold/,
      /threshold\s*[<>]=?\s*[^=]*endpoint_projection/,
    ];
    for (const [name, text] of sources()) {
      for (const pattern of forbidden) {
        expect(pattern.test(text), `${name} matches ${pattern}`).toBe(false);
      }
    }
  });

  it("panels display *_display fields only for analytics numbers", () => {
    const panels = readFileSync(join(SRC, "panels.ts"), "utf-8");
    expect(panels).toContain("accuracy_display");
    expect(panels).toContain("data_used_display");
    expect(panels).toContain("datapoints_display");
    // the raw numeric fields appear only in the payload types, not panels
    expect(/\bev\.accuracy\b(?!_display)/.test(panels)).toBe(false);
    expect(/\ba\.accuracy\b(?!_display)/.test(panels)).toBe(false);
  });
});
