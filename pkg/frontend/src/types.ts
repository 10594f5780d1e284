// JSON payload shapes returned by the workbench service. Analytics carry
// *_display strings rendered verbatim; the client never recomputes them.

export interface DatasetSummary {
  name: string;
  n_points: number;
  n_attributes: number;
  attributes: string[];
  classes: Record<string, number>;
}

export interface SessionSummary {
  id: string;
  dataset: DatasetSummary;
  has_model: boolean;
  n_rules: number;
  n_blocks: number;
  has_split: boolean;
  log_length: number;
}

export interface ModelJson {
  coefficients: number[];
  k: number[];
  c_max_abs: number;
  angles_deg: number[];
  signs: number[];
  threshold: number;
  class_roles: [string, string];
}

export interface EvaluationJson {
  confusion: number[][];
  accuracy: number;
  accuracy_display: string;
  misclassified_indices: number[];
  class_roles: [string, string];
  data_used: number;
  data_used_display: string;
}

export interface FitResponse {
  model: ModelJson;
  evaluation: EvaluationJson;
}

export interface PolylineJson {
  vertices: [number, number][];
  class: string | null;
  mirrored: boolean;
  endpoint_projection: number;
}

export interface SceneJson {
  polylines: PolylineJson[];
  threshold: number | null;
  bounds: [number, number] | null;
  axis_range: [number, number];
  legend: Record<string, string>;
}

export interface RuleAnalyticsJson {
  block: string;
  class: string;
  seed_attribute: number | null;
  datapoints: number;
  misclassified: number;
  datapoints_display: string;
  accuracy: number;
  accuracy_display: string;
}

export interface RuleJson {
  class: string;
  bounds: [number, number][];
  seed_attribute: number | null;
  algorithm: string;
  member_indices: number[];
  rule: string;
  analytics: RuleAnalyticsJson;
}

export interface SplitJson {
  lower: number;
  upper: number;
  indices: number[];
  capped: boolean;
  cap_fraction: number;
  manual: boolean;
}

export interface WorstCaseReportJson {
  all_data: EvaluationJson | null;
  without_overlap: EvaluationJson | null;
  overlap_only: EvaluationJson | null;
  worst_case: EvaluationJson | null;
  no_overlap: boolean;
  unfittable: string[];
}

export interface CrossValJson {
  model: string;
  fold_accuracies: (number | null)[];
  avg: number;
  stdev: number;
  warnings: string[];
}

export interface ApiErrorBody {
  code: string;
  message: string;
  detail?: string;
}

export type SceneMode = "glcl" | "dsc1" | "dsc2";
