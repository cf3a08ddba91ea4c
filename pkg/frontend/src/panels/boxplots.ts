/** Per-feature comparison box plots. The mode follows the user's actions:
 * with a lasso selection, selected points are contrasted against the pending
 * suggestion's population; with no selection it falls back to all points
 * against the suggestion. Features run left to right by ascending model
 * importance. Removal boxes render light red, addition boxes light green. */

export interface BoxStats {
  low: number;
  q1: number;
  median: number;
  q3: number;
  high: number;
}

export interface FeatureBoxGroup {
  featureIndex: number;
  featureName: string;
  primary: BoxStats | null;    // selection, or all points when no selection
  suggestion: BoxStats | null; // removal/addition population, when pending
  suggestionKind: "removal" | "addition" | null;
}

export interface BoxplotScene {
  mode: "selection_vs_suggestion" | "all_vs_suggestion";
  groups: FeatureBoxGroup[];
}

export function boxStats(values: number[]): BoxStats | null {
  if (values.length === 0) return null;
  const sorted = [...values].sort((a, b) => a - b);
  const q = (p: number) => {
    const idx = (sorted.length - 1) * p;
    const lo = Math.floor(idx);
    const hi = Math.ceil(idx);
    return sorted[lo] + (sorted[hi] - sorted[lo]) * (idx - lo);
  };
  return { low: sorted[0], q1: q(0.25), median: q(0.5), q3: q(0.75),
           high: sorted[sorted.length - 1] };
}

export function buildBoxplotScene(
  featureNames: string[],
  importanceOrder: number[],           // ascending importance, from the report
  valuesById: Map<number, number[]>,   // raw feature vectors per instance id
  selection: number[],
  suggestionIds: number[],
  suggestionVectors: number[][],       // synthetic vectors for additions
  suggestionKind: "removal" | "addition" | null,
): BoxplotScene {
  const mode = selection.length > 0 ? "selection_vs_suggestion" : "all_vs_suggestion";
  const primaryIds = selection.length > 0 ? selection : [...valuesById.keys()];

  const groups: FeatureBoxGroup[] = importanceOrder.map((featureIndex) => {
    const primaryValues = primaryIds
      .map((id) => valuesById.get(id))
      .filter((v): v is number[] => v !== undefined)
      .map((v) => v[featureIndex]);
    const suggestionValues = [
      ...suggestionIds
        .map((id) => valuesById.get(id))
        .filter((v): v is number[] => v !== undefined)
        .map((v) => v[featureIndex]),
      ...suggestionVectors.map((v) => v[featureIndex]),
    ];
    return {
      featureIndex,
      featureName: featureNames[featureIndex],
      primary: boxStats(primaryValues),
      suggestion: suggestionValues.length ? boxStats(suggestionValues) : null,
      suggestionKind: suggestionValues.length ? suggestionKind : null,
    };
  });
  return { mode, groups };
}

export const SUGGESTION_BOX_COLORS = { removal: "#f4a6a6", addition: "#b5e3b5" };
