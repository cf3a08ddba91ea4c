/** Central view state: selections, hover, type toggles, and the pending
 * suggestion with per-item accept flags. Panels subscribe to one store so a
 * single selection event updates every linked view with the same id set. */

import type { InstanceTypeName, SuggestionPayload } from "./types.js";

export interface PendingSuggestion {
  suggestionId: string;
  suggestion: SuggestionPayload;
  /** accept flag per removal id */
  acceptedIds: Set<number>;
  /** accept flag per addition index */
  acceptedIndices: Set<number>;
}

export type Listener = () => void;

export class ViewState {
  private plotted = new Set<number>();
  private lasso = new Set<number>();
  hoveredId: number | null = null;
  activeFeature: number | null = null;
  includedTypes = new Set<InstanceTypeName>(["safe", "borderline", "rare", "outlier"]);
  pending: PendingSuggestion | null = null;
  private listeners: Listener[] = [];

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private emit(): void {
    for (const l of this.listeners) l();
  }

  setPlotted(ids: Iterable<number>): void {
    this.plotted = new Set(ids);
    // the lasso selection can only reference plotted points
    this.lasso = new Set([...this.lasso].filter((i) => this.plotted.has(i)));
    this.emit();
  }

  get selection(): number[] {
    return [...this.lasso].sort((a, b) => a - b);
  }

  setSelection(ids: Iterable<number>): void {
    this.lasso = new Set([...ids].filter((i) => this.plotted.has(i)));
    this.emit();
  }

  clearSelection(): void {
    this.lasso.clear();
    this.emit();
  }

  setHovered(id: number | null): void {
    this.hoveredId = id;
    this.emit();
  }

  selectFeature(index: number | null): void {
    this.activeFeature = index;
    this.emit();
  }

  toggleType(type: InstanceTypeName): void {
    if (this.includedTypes.has(type)) {
      if (this.includedTypes.size === 1) return; // never empty
      this.includedTypes.delete(type);
    } else {
      this.includedTypes.add(type);
    }
    this.emit();
  }

  setPending(suggestionId: string, suggestion: SuggestionPayload): void {
    this.pending = {
      suggestionId,
      suggestion,
      acceptedIds: new Set(suggestion.removals.map((r) => r.id)),
      acceptedIndices: new Set(suggestion.additions.map((_, i) => i)),
    };
    this.emit();
  }

  clearPending(): void {
    this.pending = null;
    this.emit();
  }

  setRemovalAccepted(id: number, accepted: boolean): void {
    if (!this.pending) return;
    if (!this.pending.suggestion.removals.some((r) => r.id === id)) {
      throw new Error(`id ${id} is not part of the pending suggestion`);
    }
    if (accepted) this.pending.acceptedIds.add(id);
    else this.pending.acceptedIds.delete(id);
    this.emit();
  }

  setAdditionAccepted(index: number, accepted: boolean): void {
    if (!this.pending) return;
    if (index < 0 || index >= this.pending.suggestion.additions.length) {
      throw new Error(`addition index ${index} is out of range`);
    }
    if (accepted) this.pending.acceptedIndices.add(index);
    else this.pending.acceptedIndices.delete(index);
    this.emit();
  }

  /** Bulk accept/reject driven by a lasso selection over suggestion marks. */
  bulkSetRemovals(ids: Iterable<number>, accepted: boolean): void {
    if (!this.pending) return;
    const valid = new Set(this.pending.suggestion.removals.map((r) => r.id));
    for (const id of ids) {
      if (!valid.has(id)) continue;
      if (accepted) this.pending.acceptedIds.add(id);
      else this.pending.acceptedIds.delete(id);
    }
    this.emit();
  }
}
