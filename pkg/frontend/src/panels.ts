// Analytics panel content. Every accuracy, coverage, and count string is a
// server-response field passed through verbatim: the client does no
// arithmetic on analytics values anywhere in this module.

import type {
  EvaluationJson,
  RuleJson,
  SessionSummary,
  WorstCaseReportJson,
} from "./types.js";

export type PanelRow = [label: string, value: string];

export function evaluationRows(ev: EvaluationJson): PanelRow[] {
  const [c1, c2] = ev.class_roles;
  return [
    ["Accuracy", ev.accuracy_display],
    ["Data Used", ev.data_used_display],
    [`Real ${c1}`, `${ev.confusion[0][0]} / ${ev.confusion[0][1]}`],
    [`Real ${c2}`, `${ev.confusion[1][0]} / ${ev.confusion[1][1]}`],
    ["Misclassified", String(ev.misclassified_indices.length)],
  ];
}

export function ruleCardRows(rule: RuleJson): PanelRow[] {
  const a = rule.analytics;
  return [
    ["Block", a.block],
    ["Class", a.class],
    ["Seed Attribute", a.seed_attribute === null ? "null" : String(a.seed_attribute)],
    ["Datapoints", a.datapoints_display],
    ["Accuracy", a.accuracy_display],
  ];
}

export function ruleBoundsText(rule: RuleJson): string {
  return rule.rule;
}

export function reportRows(rep: WorstCaseReportJson): [string, PanelRow[]][] {
  const sections: [string, EvaluationJson | null][] = [
    ["All Data Analytics", rep.all_data],
    ["Data Without Overlap Analytics", rep.without_overlap],
    ["Overlap Analytics", rep.overlap_only],
    ["Worst Case Data Analytics", rep.worst_case],
  ];
  return sections.map(([title, ev]) => [
    title,
    ev === null ? [["Status", rep.no_overlap ? "no overlap" : "unfittable"]]
                : evaluationRows(ev),
  ]);
}

export function sessionRows(info: SessionSummary): PanelRow[] {
  const classes = Object.entries(info.dataset.classes)
    .map(([name, count]) => `${name}: ${count}`)
    .join(", ");
  return [
    ["Dataset", info.dataset.name],
    ["Points", String(info.dataset.n_points)],
    ["Attributes", String(info.dataset.n_attributes)],
    ["Classes", classes],
    ["Log length", String(info.log_length)],
  ];
}
