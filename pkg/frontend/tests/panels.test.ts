import { describe, expect, it } from "vitest";

import { buildDistributionScene } from "../src/panels/distribution.js";
import { boxStats, buildBoxplotScene } from "../src/panels/boxplots.js";
import { buildHeatmapScene, ROW_TYPE_ORDER } from "../src/panels/tableHeatmap.js";
import { divergingBin, divergingColor } from "../src/colors.js";
import { ViewState } from "../src/state.js";
import type { SuggestionPayload, TypesPayload } from "../src/types.js";

import typesFixture from "./fixtures/types.json";
import proposal from "./fixtures/proposal_ncr.json";

const types = typesFixture as unknown as TypesPayload;
const suggestion = (proposal as { suggestion: SuggestionPayload }).suggestion;

describe("distribution panel", () => {
  it("identical distributions without a suggestion", () => {
    const scene = buildDistributionScene(types, null);
    for (const bar of scene.bars) {
      expect(bar.suggested).toBe(bar.base);
    }
    expect(scene.suggestedTotal).toBe(scene.total);
  });

  it("removal-only suggestions never grow a bar", () => {
    const scene = buildDistributionScene(types, suggestion);
    for (const bar of scene.bars) {
      expect(bar.suggested).toBeLessThanOrEqual(bar.base);
    }
    expect(scene.suggestedTotal).toBe(scene.total - suggestion.removals.length);
  });

  it("additions grow the class as a synthetic band", () => {
    const withAdds: SuggestionPayload = {
      ...suggestion,
      removals: [],
      additions: [
        { vector: [1], class: 1, parent: 1, neighbor: 2, lambda: 0.5 },
        { vector: [1], class: 1, parent: 1, neighbor: 2, lambda: 0.1 },
      ],
    };
    const scene = buildDistributionScene(types, withAdds);
    const synth = scene.bars.find((b) => b.type === "synthetic" && b.classIndex === 1);
    expect(synth?.suggested).toBe(2);
  });
});

describe("box plots", () => {
  const featureNames = ["f0", "f1"];
  const valuesById = new Map<number, number[]>([
    [1, [0.0, 5.0]],
    [2, [1.0, 5.0]],
    [3, [2.0, 5.0]],
    [4, [3.0, 5.0]],
  ]);

  it("auto-switches mode with selection", () => {
    const none = buildBoxplotScene(featureNames, [0, 1], valuesById, [], [1], [], "removal");
    expect(none.mode).toBe("all_vs_suggestion");
    const some = buildBoxplotScene(featureNames, [0, 1], valuesById, [1, 2], [1], [], "removal");
    expect(some.mode).toBe("selection_vs_suggestion");
  });

  it("constant features give zero-height boxes", () => {
    const scene = buildBoxplotScene(featureNames, [1, 0], valuesById, [], [], [], null);
    const constant = scene.groups.find((g) => g.featureIndex === 1)!;
    expect(constant.primary!.high - constant.primary!.low).toBe(0);
  });

  it("features follow the importance order", () => {
    const scene = buildBoxplotScene(featureNames, [1, 0], valuesById, [], [], [], null);
    expect(scene.groups.map((g) => g.featureIndex)).toEqual([1, 0]);
  });

  it("empty suggestion renders single-population boxes", () => {
    const scene = buildBoxplotScene(featureNames, [0, 1], valuesById, [], [], [], null);
    for (const g of scene.groups) {
      expect(g.suggestion).toBeNull();
    }
  });

  it("quartiles come from the sorted values", () => {
    const stats = boxStats([3, 1, 2, 4])!;
    expect(stats.low).toBe(1);
    expect(stats.high).toBe(4);
    expect(stats.median).toBe(2.5);
  });
});

describe("table heatmap", () => {
  it("bins endpoints to the darkest colors", () => {
    expect(divergingColor(0.0)).toBe("#543005"); // darkest brown
    expect(divergingColor(1.0)).toBe("#003c30"); // darkest teal
    expect(divergingBin(0.05)).toBe(0);
    expect(divergingBin(0.95)).toBe(9);
    expect(divergingBin(1.5)).toBe(9); // display clamp for out-of-range test rows
  });

  it("orders rows outliers, rare, borderline, safe", () => {
    const ids = types.assignments.slice(0, 200).map((a) => a.id);
    const normalized = new Map(ids.map((id) => [id, [0.5]]));
    const scene = buildHeatmapScene(ids, normalized, types, [0]);
    const ranks = scene.rows.map((r) => ROW_TYPE_ORDER.indexOf(r.type));
    expect([...ranks].sort((a, b) => a - b)).toEqual(ranks);
  });

  it("hides without a selection", () => {
    const scene = buildHeatmapScene([], new Map(), types, [0]);
    expect(scene.hidden).toBe(true);
    expect(scene.rows).toEqual([]);
  });
});

describe("view state linkage", () => {
  it("one selection event, one id set for every panel", () => {
    const state = new ViewState();
    state.setPlotted([1, 2, 3, 4, 5]);
    const seen: number[][] = [];
    state.subscribe(() => seen.push(state.selection));
    state.setSelection([4, 2, 99]); // 99 is not plotted
    expect(state.selection).toEqual([2, 4]);
    expect(seen[seen.length - 1]).toEqual([2, 4]);
  });

  it("lasso shrinks when plotted ids change", () => {
    const state = new ViewState();
    state.setPlotted([1, 2, 3]);
    state.setSelection([1, 3]);
    state.setPlotted([1, 2]); // id 3 left the plot
    expect(state.selection).toEqual([1]);
  });

  it("type toggles never empty the set", () => {
    const state = new ViewState();
    state.toggleType("safe");
    state.toggleType("borderline");
    state.toggleType("rare");
    state.toggleType("outlier"); // refused: would empty the set
    expect(state.includedTypes.size).toBe(1);
  });
});
