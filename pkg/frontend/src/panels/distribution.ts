/** Stacked/grouped bars of the type distribution per class, with the base
 * distribution side by side against what the pending suggestion would leave. */

import type { InstanceTypeName, SuggestionPayload, TypesPayload } from "../types.js";

export const TYPE_ORDER: InstanceTypeName[] = ["safe", "borderline", "rare", "outlier"];

export interface DistributionBar {
  classIndex: number;
  type: InstanceTypeName | "synthetic";
  base: number;
  suggested: number;
}

export interface DistributionScene {
  bars: DistributionBar[];
  total: number;
  suggestedTotal: number;
}

export function buildDistributionScene(
  types: TypesPayload,
  suggestion: SuggestionPayload | null,
): DistributionScene {
  const byId = new Map(types.assignments.map((a) => [a.id, a]));
  const removed = new Map<string, number>();
  const addedPerClass = new Map<number, number>();
  if (suggestion) {
    for (const r of suggestion.removals) {
      const a = byId.get(r.id);
      if (!a) continue;
      const key = `${a.class}:${a.type}`;
      removed.set(key, (removed.get(key) ?? 0) + 1);
    }
    for (const a of suggestion.additions) {
      addedPerClass.set(a.class, (addedPerClass.get(a.class) ?? 0) + 1);
    }
  }

  const perClass = new Map<number, Map<InstanceTypeName, number>>();
  for (const entry of types.distribution.per_class) {
    if (!perClass.has(entry.class)) perClass.set(entry.class, new Map());
    perClass.get(entry.class)!.set(entry.type, entry.count);
  }

  const bars: DistributionBar[] = [];
  let suggestedTotal = 0;
  for (const [classIndex, counts] of [...perClass.entries()].sort((a, b) => a[0] - b[0])) {
    for (const t of TYPE_ORDER) {
      const base = counts.get(t) ?? 0;
      const suggested = base - (removed.get(`${classIndex}:${t}`) ?? 0);
      bars.push({ classIndex, type: t, base, suggested });
      suggestedTotal += suggested;
    }
    const added = addedPerClass.get(classIndex) ?? 0;
    if (added > 0) {
      // synthetic rows are typed only after confirmation; until then they
      // show as a class-colored growth band
      bars.push({ classIndex, type: "synthetic", base: 0, suggested: added });
      suggestedTotal += added;
    }
  }
  return { bars, total: types.distribution.total, suggestedTotal };
}
