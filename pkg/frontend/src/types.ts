/** Payload shapes of the samplab HTTP API. The UI never recomputes any of
 * these numbers; every displayed value round-trips from the service. */

export type InstanceTypeName = "safe" | "borderline" | "rare" | "outlier";

export interface TypeAssignmentPayload {
  id: number;
  type: InstanceTypeName;
  same_class_count: number;
  class: number;
}

export interface TypesPayload {
  active_k: number;
  assignments: TypeAssignmentPayload[];
  distribution: {
    total: number;
    per_type: Record<InstanceTypeName, number>;
    per_class: { class: number; type: InstanceTypeName; count: number }[];
  };
  class_names: string[];
}

export interface RemovalPayload {
  id: number;
  reason: string;
}

export interface AdditionPayload {
  vector: number[];
  class: number;
  parent: number;
  neighbor: number;
  lambda: number;
}

export interface SuggestionPayload {
  algorithm: string;
  params: Record<string, unknown>;
  removals: RemovalPayload[];
  additions: AdditionPayload[];
  dataset_hash: string;
}

export interface ProposalResponse {
  suggestion_id: string;
  suggestion: SuggestionPayload;
}

export interface ProjectionCandidatePayload {
  n_neighbors: number;
  min_dist: number;
  sdc: number;
  coords: [number, number][];
}

export interface ProjectionsPayload {
  candidates: ProjectionCandidatePayload[];
  active_k: number;
}

export interface MetricsPair {
  balanced_accuracy: number;
  f1_macro: number;
}

export interface StepPayload {
  index: number;
  kind: string;
  algorithm: string | null;
  params: Record<string, unknown>;
  removals: number[];
  additions: AdditionPayload[];
  metrics_before: { train: MetricsPair; test: MetricsPair };
  metrics_after: { train: MetricsPair; test: MetricsPair };
}

export interface FlowPayload {
  source: InstanceTypeName;
  target: "us_bin" | "os_bin";
  count: number;
  step_index: number;
}

export interface DeltaPayload {
  step_index: number;
  delta_balanced_accuracy: number;
  delta_f1: number;
}

export interface StepsPayload {
  steps: StepPayload[];
  flows: FlowPayload[];
  deltas: DeltaPayload[];
}

export interface ReportPayload {
  balanced_accuracy: { train: number; test: number };
  f1_macro: { train: number; test: number };
  confusion: { train: number[][]; test: number[][] };
  feature_importance: number[];
  chosen_params: Record<string, unknown>;
  per_instance_probs: Record<string, number[]>;
}

export interface OverlayPointPayload {
  id: number;
  x: number;
  y: number;
  true_class: number;
  predicted_class: number;
  correct: boolean;
}

export interface OverlayPayload {
  points: OverlayPointPayload[];
  train_coords?: Record<string, [number, number]>;
}

export interface JobPayload {
  job_id: string;
  status: "queued" | "running" | "done" | "failed";
  progress: number;
  result?: { step: StepPayload; report: ReportPayload };
  error?: { code: string; message: string };
}

export interface ApiErrorPayload {
  code: string;
  message: string;
  details?: Record<string, unknown>;
}
