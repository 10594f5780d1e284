// The workbench invariant under test: every analytics string shown to the
// user is a server-response field passed through verbatim. The instrumented
// payloads below record which fields the panels read.

import { describe, expect, it } from "vitest";

import {
  evaluationRows,
  reportRows,
  ruleCardRows,
  sessionRows,
} from "../src/panels.js";
import type {
  EvaluationJson,
  RuleJson,
  SessionSummary,
  WorstCaseReportJson,
} from "../src/types.js";

const evaluation: EvaluationJson = {
  confusion: [[433, 11], [2, 237]],
  accuracy: 0.9809663250366032,
  accuracy_display: "98.10%",
  misclassified_indices: [4, 9, 13],
  class_roles: ["benign", "malignant"],
  data_used: 1.0,
  data_used_display: "100.00%",
};

const rule: RuleJson = {
  class: "malignant",
  bounds: [[0.1, 0.9]],
  seed_attribute: 2,
  algorithm: "HBRL",
  member_indices: [1, 2, 3],
  rule: "if 0.1 <= a1 <= 0.9 then malignant",
  analytics: {
    block: "1/26",
    class: "malignant",
    seed_attribute: 2,
    datapoints: 345,
    misclassified: 1,
    datapoints_display: "345 (1 misclassified)",
    accuracy: 0.9971014492753624,
    accuracy_display: "99.71%",
  },
};

function instrumented<T extends object>(obj: T): { proxy: T; reads: string[] } {
  const reads: string[] = [];
  const proxy = new Proxy(obj, {
    get(target, prop, receiver) {
      if (typeof prop === "string") {
        reads.push(prop);
      }
      return Reflect.get(target, prop, receiver);
    },
  });
  return { proxy, reads };
}

describe("evaluation panel", () => {
  it("shows the accuracy and data-used strings verbatim", () => {
    const rows = Object.fromEntries(evaluationRows(evaluation));
    expect(rows["Accuracy"]).toBe(evaluation.accuracy_display);
    expect(rows["Data Used"]).toBe(evaluation.data_used_display);
  });

  it("never reads the raw accuracy number (instrumented run)", () => {
    const { proxy, reads } = instrumented(evaluation);
    evaluationRows(proxy);
    expect(reads).toContain("accuracy_display");
    expect(reads).not.toContain("accuracy");
    expect(reads).not.toContain("data_used");
  });
});

describe("rule cards", () => {
  it("mirrors the analytics grid fields verbatim", () => {
    const rows = Object.fromEntries(ruleCardRows(rule));
    expect(rows["Block"]).toBe("1/26");
    expect(rows["Class"]).toBe("malignant");
    expect(rows["Seed Attribute"]).toBe("2");
    expect(rows["Datapoints"]).toBe("345 (1 misclassified)");
    expect(rows["Accuracy"]).toBe("99.71%");
  });

  it("renders a null seed attribute the way the study grids do", () => {
    const r = { ...rule, analytics: { ...rule.analytics, seed_attribute: null } };
    expect(Object.fromEntries(ruleCardRows(r))["Seed Attribute"]).toBe("null");
  });

  it("reads only display fields for the numeric strings", () => {
    const { proxy, reads } = instrumented(rule.analytics);
    ruleCardRows({ ...rule, analytics: proxy });
    expect(reads).toContain("accuracy_display");
    expect(reads).toContain("datapoints_display");
    expect(reads).not.toContain("accuracy");
    expect(reads).not.toContain("datapoints");
    expect(reads).not.toContain("misclassified");
  });
});

describe("worst-case report grid", () => {
  it("builds the four-section grid with verbatim accuracies", () => {
    const rep: WorstCaseReportJson = {
      all_data: evaluation,
      without_overlap: { ...evaluation, accuracy_display: "100.00%",
                         data_used_display: "77.60%" },
      overlap_only: { ...evaluation, accuracy_display: "87.58%",
                      data_used_display: "22.40%" },
      worst_case: { ...evaluation, accuracy_display: "79.74%",
                    data_used_display: "22.40%" },
      no_overlap: false,
      unfittable: [],
    };
    const sections = reportRows(rep);
    expect(sections.map(([title]) => title)).toEqual([
      "All Data Analytics",
      "Data Without Overlap Analytics",
      "Overlap Analytics",
      "Worst Case Data Analytics",
    ]);
    const worst = Object.fromEntries(sections[3][1]);
    expect(worst["Accuracy"]).toBe("79.74%");
    expect(worst["Data Used"]).toBe("22.40%");
  });

  it("marks missing sections instead of inventing numbers", () => {
    const rep: WorstCaseReportJson = {
      all_data: evaluation,
      without_overlap: null,
      overlap_only: null,
      worst_case: null,
      no_overlap: true,
      unfittable: [],
    };
    const sections = reportRows(rep);
    expect(Object.fromEntries(sections[1][1])["Status"]).toBe("no overlap");
  });
});

describe("session panel", () => {
  it("summarizes the upload", () => {
    const info: SessionSummary = {
      id: "abc",
      dataset: { name: "wbc", n_points: 683, n_attributes: 9,
                 attributes: [], classes: { benign: 444, malignant: 239 } },
      has_model: false,
      n_rules: 0,
      n_blocks: 0,
      has_split: false,
      log_length: 4,
    };
    const rows = Object.fromEntries(sessionRows(info));
    expect(rows["Points"]).toBe("683");
    expect(rows["Classes"]).toBe("benign: 444, malignant: 239");
  });
});
