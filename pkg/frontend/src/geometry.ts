/** Scales, lasso hit tests, and polar placement math shared by the panels. */

export interface Extent {
  min: number;
  max: number;
}

export function extentOf(values: number[]): Extent {
  let min = Infinity;
  let max = -Infinity;
  for (const v of values) {
    if (v < min) min = v;
    if (v > max) max = v;
  }
  return { min, max };
}

export function linearScale(domain: Extent, range: Extent): (v: number) => number {
  const span = domain.max - domain.min;
  if (span === 0) return () => (range.min + range.max) / 2;
  const k = (range.max - range.min) / span;
  return (v: number) => range.min + (v - domain.min) * k;
}

export type Point = [number, number];

/** Ray-casting point-in-polygon; the polygon closes itself. */
export function pointInPolygon(p: Point, polygon: Point[]): boolean {
  let inside = false;
  const n = polygon.length;
  for (let i = 0, j = n - 1; i < n; j = i++) {
    const [xi, yi] = polygon[i];
    const [xj, yj] = polygon[j];
    const crosses = yi > p[1] !== yj > p[1] &&
      p[0] < ((xj - xi) * (p[1] - yi)) / (yj - yi) + xi;
    if (crosses) inside = !inside;
  }
  return inside;
}

export function lassoSelect(ids: number[], coords: Point[], polygon: Point[]): number[] {
  const out: number[] = [];
  for (let i = 0; i < ids.length; i++) {
    if (pointInPolygon(coords[i], polygon)) out.push(ids[i]);
  }
  return out;
}

export interface PolarPlacement {
  /** distance from the chart center in [innerRadius, outerRadius] */
  radius: number;
  /** absolute angle in radians */
  angle: number;
}

export interface SegmentGeometry {
  classIndex: number;
  startAngle: number;
  endAngle: number;
}

/** Angular segments proportional to class counts, with a small gap. */
export function classSegments(classCounts: number[], gap = 0.04): SegmentGeometry[] {
  const total = classCounts.reduce((a, b) => a + b, 0);
  const usable = 2 * Math.PI - gap * classCounts.length;
  const segments: SegmentGeometry[] = [];
  let angle = 0;
  classCounts.forEach((count, classIndex) => {
    const span = total > 0 ? (count / total) * usable : usable / classCounts.length;
    segments.push({ classIndex, startAngle: angle, endAngle: angle + span });
    angle += span + gap;
  });
  return segments;
}

/**
 * Place one instance inside its class segment. The 100 mark is the inner
 * ring bordering the chord centerpiece: radius grows as the true-class
 * probability falls, handing misclassified cases the larger outer area.
 * The angular offset is the probability difference of the two remaining
 * classes, mapped linearly onto the segment's span.
 */
export function polarPlace(
  pTrue: number,
  offset: number,
  segment: SegmentGeometry,
  innerRadius: number,
  outerRadius: number,
): PolarPlacement {
  const radius = innerRadius + (1 - pTrue) * (outerRadius - innerRadius);
  const mid = (segment.startAngle + segment.endAngle) / 2;
  const halfSpan = (segment.endAngle - segment.startAngle) / 2;
  const angle = mid + Math.max(-1, Math.min(1, offset)) * halfSpan * 0.9;
  return { radius, angle };
}
