/** Inverse polar chart: one circular segment per class (angular span
 * proportional to class size), the true-class probability running from the
 * 100 mark at the inner ring outward to 0 at the rim, and a central chord
 * diagram summarizing the training confusion. Works for two or three
 * classes; beyond that the panel falls back to a confusion table. */

import { classColor, TYPE_GRAYSCALE } from "../colors.js";
import { classSegments, polarPlace, type SegmentGeometry } from "../geometry.js";
import type { InstanceTypeName, ReportPayload, TypesPayload } from "../types.js";

export const INNER_RADIUS = 0.35; // the 100 mark, bordering the chord disc
export const OUTER_RADIUS = 1.0;

export interface PolarPoint {
  id: number;
  radius: number;  // INNER_RADIUS at p_true=1, OUTER_RADIUS at p_true=0
  angle: number;
  pTrue: number;
  fill: string;
  outline: string;
}

export interface Chord {
  fromClass: number;
  toClass: number;
  width: number; // confused-instance count
}

export interface InversePolarScene {
  kind: "polar";
  segments: SegmentGeometry[];
  points: PolarPoint[];
  chords: Chord[];
}

export interface ConfusionFallbackScene {
  kind: "confusion_table";
  confusion: number[][];
  classNames: string[];
}

export function buildInversePolarScene(
  types: TypesPayload,
  report: ReportPayload,
): InversePolarScene | ConfusionFallbackScene {
  const nClasses = types.class_names.length;
  if (nClasses > 3) {
    return { kind: "confusion_table", confusion: report.confusion.train,
             classNames: types.class_names };
  }

  const counts = new Array<number>(nClasses).fill(0);
  for (const a of types.assignments) counts[a.class] += 1;
  const segments = classSegments(counts);

  const points: PolarPoint[] = [];
  for (const a of types.assignments) {
    const probs = report.per_instance_probs[String(a.id)];
    if (!probs) continue;
    const pTrue = probs[a.class];
    const others = probs
      .map((p, c) => ({ p, c }))
      .filter(({ c }) => c !== a.class);
    // difference in predicted probability of the two remaining classes;
    // with two classes the term degenerates to the single remaining one
    const offset = others.length >= 2 ? others[0].p - others[1].p : others[0]?.p ?? 0;
    const { radius, angle } = polarPlace(pTrue, offset, segments[a.class],
                                         INNER_RADIUS, OUTER_RADIUS);
    points.push({
      id: a.id, radius, angle, pTrue,
      fill: classColor(a.class),
      outline: TYPE_GRAYSCALE[a.type as InstanceTypeName],
    });
  }

  const chords: Chord[] = [];
  const conf = report.confusion.train;
  for (let i = 0; i < conf.length; i++) {
    for (let j = 0; j < conf.length; j++) {
      if (i !== j && conf[i][j] > 0) {
        chords.push({ fromClass: i, toClass: j, width: conf[i][j] });
      }
    }
  }
  return { kind: "polar", segments, points, chords };
}

/** Position on the radial axis as the label the chart prints: 100 down to 0. */
export function radialLabel(radius: number): number {
  const t = (radius - INNER_RADIUS) / (OUTER_RADIUS - INNER_RADIUS);
  return Math.round(100 * (1 - t));
}
