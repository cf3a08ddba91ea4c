/** Sampling execution tracker: the Sankey of type-to-bin flows, the per-step
 * performance delta bars, the test-confusion overlay, and the headline
 * initial/current metric pair. Every number comes straight off the API. */

import { classColor, METRIC_COLORS, OS_COLOR, US_COLOR } from "../colors.js";
import type {
  FlowPayload,
  InstanceTypeName,
  OverlayPayload,
  StepsPayload,
} from "../types.js";

export interface SankeyNode {
  name: InstanceTypeName | "us_bin" | "os_bin";
  total: number;
  color: string;
}

export interface SankeyLink {
  source: InstanceTypeName;
  target: "us_bin" | "os_bin";
  count: number;
  stepIndex: number;
}

export interface TrackerScene {
  sankey: { nodes: SankeyNode[]; links: SankeyLink[] };
  deltas: { stepIndex: number; deltaBalancedAccuracy: number; deltaF1: number }[];
  headline: {
    initial: { balancedAccuracy: number; f1: number };
    current: { balancedAccuracy: number; f1: number };
    colors: typeof METRIC_COLORS;
  };
  overlay: OverlayStar[];
}

export interface OverlayStar {
  id: number;
  x: number;
  y: number;
  fill: string;     // true class
  outline: string;  // predicted class
  opaque: boolean;  // misclassified stand out; correct ones are transparent
}

const TYPE_NODES: InstanceTypeName[] = ["safe", "borderline", "rare", "outlier"];

export function binTotals(flows: FlowPayload[]): { us: number; os: number } {
  let us = 0;
  let os = 0;
  for (const f of flows) {
    if (f.target === "us_bin") us += f.count;
    else os += f.count;
  }
  return { us, os };
}

export function buildTrackerScene(
  steps: StepsPayload,
  overlay: OverlayPayload,
  typePopulations: Record<InstanceTypeName, number>,
): TrackerScene {
  const { us, os } = binTotals(steps.flows);
  const nodes: SankeyNode[] = [
    ...TYPE_NODES.map((t) => ({
      name: t,
      total: typePopulations[t] ?? 0,
      color: "#bdbdbd",
    })),
    { name: "us_bin" as const, total: us, color: US_COLOR },
    { name: "os_bin" as const, total: os, color: OS_COLOR },
  ];
  const links: SankeyLink[] = steps.flows.map((f) => ({
    source: f.source,
    target: f.target,
    count: f.count,
    stepIndex: f.step_index,
  }));

  const first = steps.steps[0];
  const last = steps.steps[steps.steps.length - 1];
  const headline = {
    initial: {
      balancedAccuracy: first.metrics_after.test.balanced_accuracy,
      f1: first.metrics_after.test.f1_macro,
    },
    current: {
      balancedAccuracy: last.metrics_after.test.balanced_accuracy,
      f1: last.metrics_after.test.f1_macro,
    },
    colors: METRIC_COLORS,
  };

  const stars: OverlayStar[] = overlay.points.map((p) => ({
    id: p.id,
    x: p.x,
    y: p.y,
    fill: classColor(p.true_class),
    outline: classColor(p.predicted_class),
    opaque: !p.correct,
  }));

  return {
    sankey: { nodes, links },
    deltas: steps.deltas.map((d) => ({
      stepIndex: d.step_index,
      deltaBalancedAccuracy: d.delta_balanced_accuracy,
      deltaF1: d.delta_f1,
    })),
    headline,
    overlay: stars,
  };
}
