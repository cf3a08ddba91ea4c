/** Data-types projection panel: main scatter plus the 3x3 small-multiple
 * grid. Class maps to fill, type to outline grayscale, and the pending
 * suggestion draws an x mark per removal and a + mark per addition. */

import { classColor, TYPE_GRAYSCALE, divergingColor } from "../colors.js";
import { extentOf, linearScale, type Point } from "../geometry.js";
import type {
  InstanceTypeName,
  ProjectionCandidatePayload,
  SuggestionPayload,
  TypesPayload,
} from "../types.js";

export interface ScatterMark {
  id: number;
  x: number;
  y: number;
  fill: string;
  outline: string;
  symbol: "circle" | "removal_x" | "addition_plus";
}

export interface ProjectionScene {
  marks: ScatterMark[];
  removalMarkCount: number;
  additionMarkCount: number;
  width: number;
  height: number;
}

export interface FeatureColoring {
  /** normalized feature value per plotted id, drives the diverging recolor */
  values: Map<number, number>;
}

const THUMBNAIL_POINT_CAP = 1000;

export function buildProjectionScene(
  ids: number[],
  coords: Point[],
  types: TypesPayload,
  labels: Map<number, number>,
  suggestion: SuggestionPayload | null,
  width = 640,
  height = 640,
  featureColoring: FeatureColoring | null = null,
): ProjectionScene {
  const typeById = new Map<number, InstanceTypeName>(
    types.assignments.map((a) => [a.id, a.type]));
  const sx = linearScale(extentOf(coords.map((c) => c[0])), { min: 20, max: width - 20 });
  const sy = linearScale(extentOf(coords.map((c) => c[1])), { min: height - 20, max: 20 });
  const removalIds = new Set(suggestion?.removals.map((r) => r.id) ?? []);

  const marks: ScatterMark[] = ids.map((id, i) => {
    const classIndex = labels.get(id) ?? 0;
    const fill = featureColoring
      ? divergingColor(featureColoring.values.get(id) ?? 0)
      : classColor(classIndex);
    return {
      id,
      x: sx(coords[i][0]),
      y: sy(coords[i][1]),
      fill,
      outline: TYPE_GRAYSCALE[typeById.get(id) ?? "safe"],
      symbol: removalIds.has(id) ? "removal_x" : "circle",
    };
  });

  let additions = 0;
  if (suggestion) {
    // synthetic points have no ids yet; they render as + marks at the
    // position of their parent (the embedding has no coordinates for them)
    const pos = new Map(ids.map((id, i) => [id, i]));
    for (const add of suggestion.additions) {
      const parentRow = pos.get(add.parent);
      if (parentRow === undefined) continue;
      marks.push({
        id: -1 - additions,
        x: sx(coords[parentRow][0]),
        y: sy(coords[parentRow][1]),
        fill: classColor(add.class),
        outline: TYPE_GRAYSCALE.safe,
        symbol: "addition_plus",
      });
      additions += 1;
    }
  }

  return {
    marks,
    removalMarkCount: marks.filter((m) => m.symbol === "removal_x").length,
    additionMarkCount: additions,
    width,
    height,
  };
}

export interface GridThumbnail {
  nNeighbors: number;
  minDist: number;
  sdc: number;
  points: { x: number; y: number }[];
  decimated: boolean;
}

/** The 3x3 grid thumbnails render at most 1000 points for responsiveness. */
export function buildGridScene(candidates: ProjectionCandidatePayload[],
                               size = 160): GridThumbnail[] {
  return candidates.map((c) => {
    const step = Math.max(1, Math.ceil(c.coords.length / THUMBNAIL_POINT_CAP));
    const coords = c.coords.filter((_, i) => i % step === 0);
    const sx = linearScale(extentOf(coords.map((p) => p[0])), { min: 4, max: size - 4 });
    const sy = linearScale(extentOf(coords.map((p) => p[1])), { min: size - 4, max: 4 });
    return {
      nNeighbors: c.n_neighbors,
      minDist: c.min_dist,
      sdc: c.sdc,
      points: coords.map(([x, y]) => ({ x: sx(x), y: sy(y) })),
      decimated: step > 1,
    };
  });
}

export function renderProjectionSvg(scene: ProjectionScene): string {
  const parts = [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${scene.width}" height="${scene.height}">`,
  ];
  for (const m of scene.marks) {
    if (m.symbol === "circle") {
      parts.push(`<circle cx="${m.x.toFixed(1)}" cy="${m.y.toFixed(1)}" r="4" ` +
        `fill="${m.fill}" stroke="${m.outline}" stroke-width="1.5" data-id="${m.id}"/>`);
    } else if (m.symbol === "removal_x") {
      parts.push(`<circle cx="${m.x.toFixed(1)}" cy="${m.y.toFixed(1)}" r="4" ` +
        `fill="${m.fill}" stroke="${m.outline}" stroke-width="1.5" data-id="${m.id}"/>` +
        `<path class="removal-mark" data-id="${m.id}" stroke="#8b0000" stroke-width="2" fill="none" ` +
        `d="M${(m.x - 4).toFixed(1)},${(m.y - 4).toFixed(1)} L${(m.x + 4).toFixed(1)},${(m.y + 4).toFixed(1)} ` +
        `M${(m.x - 4).toFixed(1)},${(m.y + 4).toFixed(1)} L${(m.x + 4).toFixed(1)},${(m.y - 4).toFixed(1)}"/>`);
    } else {
      parts.push(`<path class="addition-mark" stroke="#006400" stroke-width="2" fill="none" ` +
        `d="M${m.x.toFixed(1)},${(m.y - 5).toFixed(1)} L${m.x.toFixed(1)},${(m.y + 5).toFixed(1)} ` +
        `M${(m.x - 5).toFixed(1)},${m.y.toFixed(1)} L${(m.x + 5).toFixed(1)},${m.y.toFixed(1)}"/>`);
    }
  }
  parts.push("</svg>");
  return parts.join("");
}
