/** Table heatmap of the lasso-selected instances: one row per instance, one
 * column per feature, values normalized to 0-1 and binned into the 10-color
 * diverging scale. Rows group by type with outliers first, then rare,
 * borderline, and safe at the top block boundaries mirrored from the docked
 * ordering; hovering a cell reveals the exact value, clicking a column emits
 * a feature-select event. */

import { divergingBin, DIVERGING_10 } from "../colors.js";
import type { InstanceTypeName, TypesPayload } from "../types.js";

export const ROW_TYPE_ORDER: InstanceTypeName[] = ["outlier", "rare", "borderline", "safe"];

export interface HeatmapCell {
  id: number;
  featureIndex: number;
  value: number;        // normalized, may exceed [0,1] for test rows
  bin: number;          // 0..9 after display clamping
  color: string;
}

export interface HeatmapRow {
  id: number;
  type: InstanceTypeName;
  cells: HeatmapCell[];
}

export interface HeatmapScene {
  rows: HeatmapRow[];
  featureOrder: number[];
  hidden: boolean;
}

export function buildHeatmapScene(
  selection: number[],
  normalizedById: Map<number, number[]>,
  types: TypesPayload,
  featureOrder: number[],
): HeatmapScene {
  if (selection.length === 0) {
    return { rows: [], featureOrder, hidden: true };
  }
  const typeById = new Map(types.assignments.map((a) => [a.id, a.type]));
  const rank = new Map(ROW_TYPE_ORDER.map((t, i) => [t, i]));
  const rows = selection
    .filter((id) => normalizedById.has(id))
    .sort((a, b) => {
      const ra = rank.get(typeById.get(a) ?? "safe")!;
      const rb = rank.get(typeById.get(b) ?? "safe")!;
      return ra - rb || a - b;
    })
    .map((id) => {
      const values = normalizedById.get(id)!;
      return {
        id,
        type: typeById.get(id) ?? "safe",
        cells: featureOrder.map((featureIndex) => {
          const value = values[featureIndex];
          const bin = divergingBin(value);
          return { id, featureIndex, value, bin, color: DIVERGING_10[bin] };
        }),
      } as HeatmapRow;
    });
  return { rows, featureOrder, hidden: false };
}

export function cellTooltip(cell: HeatmapCell, featureNames: string[]): string {
  return `${featureNames[cell.featureIndex]} = ${cell.value.toFixed(4)}`;
}
