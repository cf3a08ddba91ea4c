/** The suggestion review flow: load a proposal into view state, let per-item
 * checkboxes and lasso-driven bulk actions shape the accept set, then post
 * exactly that subset; a stale-suggestion rejection flips the state into a
 * regenerate prompt. */

import { ApiError, SamplabClient } from "./client.js";
import type { ViewState } from "./state.js";
import type { JobPayload } from "./types.js";

export type ReviewOutcome =
  | { kind: "confirmed"; job: JobPayload }
  | { kind: "stale"; message: string }
  | { kind: "failed"; code: string; message: string };

export class SuggestionReview {
  constructor(
    private client: SamplabClient,
    private state: ViewState,
    private sessionId: string,
  ) {}

  async propose(algorithm: string, params: Record<string, unknown>,
                classScope: string): Promise<void> {
    const response = await this.client.propose(this.sessionId, algorithm, params, {
      class_scope: classScope,
      included_types: [...this.state.includedTypes],
    });
    this.state.setPending(response.suggestion_id, response.suggestion);
  }

  acceptAll(): void {
    const pending = this.state.pending;
    if (!pending) return;
    this.state.bulkSetRemovals(pending.suggestion.removals.map((r) => r.id), true);
    pending.suggestion.additions.forEach((_, i) => this.state.setAdditionAccepted(i, true));
  }

  rejectAll(): void {
    const pending = this.state.pending;
    if (!pending) return;
    this.state.bulkSetRemovals(pending.suggestion.removals.map((r) => r.id), false);
    pending.suggestion.additions.forEach((_, i) => this.state.setAdditionAccepted(i, false));
  }

  /** Keep only suggestion items inside the lasso selection (the
   * "grab everything except the cluster you want to keep" move). */
  restrictToSelection(selectedIds: number[]): void {
    const pending = this.state.pending;
    if (!pending) return;
    const keep = new Set(selectedIds);
    for (const r of pending.suggestion.removals) {
      this.state.setRemovalAccepted(r.id, keep.has(r.id));
    }
  }

  /** POST the accepted subset and poll the training job to completion. */
  async confirm(sleep?: (ms: number) => Promise<void>): Promise<ReviewOutcome> {
    const pending = this.state.pending;
    if (!pending) throw new Error("no pending suggestion to confirm");
    const isUndersample = pending.suggestion.removals.length > 0 ||
      pending.suggestion.additions.length === 0;
    const accepted = isUndersample
      ? { ids: [...pending.acceptedIds].sort((a, b) => a - b) }
      : { indices: [...pending.acceptedIndices].sort((a, b) => a - b) };
    try {
      const { job_id } = await this.client.confirm(
        this.sessionId, pending.suggestionId, accepted);
      const job = await this.client.pollJob(job_id, 100, sleep);
      if (job.status === "failed") {
        return { kind: "failed", code: job.error?.code ?? "internal_error",
                 message: job.error?.message ?? "training failed" };
      }
      this.state.clearPending();
      return { kind: "confirmed", job };
    } catch (e) {
      if (e instanceof ApiError && e.code === "stale_suggestion") {
        return { kind: "stale", message: "the training set changed; regenerate the proposal" };
      }
      throw e;
    }
  }
}
