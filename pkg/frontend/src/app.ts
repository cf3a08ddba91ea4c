/** Browser bootstrap: wires the client, the shared view state, and the
 * coordinated panels into their DOM containers. Confirm actions stay
 * disabled while a training job is running; every refresh pulls the panels
 * from the API rather than recomputing anything locally. */

import { fetchTransport, SamplabClient } from "./client.js";
import { ViewState } from "./state.js";
import { SuggestionReview } from "./review.js";
import { buildProjectionScene, renderProjectionSvg, buildGridScene } from "./panels/projection.js";
import { buildDistributionScene } from "./panels/distribution.js";
import { buildTrackerScene } from "./panels/tracker.js";
import { buildInversePolarScene } from "./panels/inversePolar.js";
import type { Point } from "./geometry.js";
import type { ProjectionsPayload, ReportPayload, StepsPayload, TypesPayload, OverlayPayload } from "./types.js";

export interface AppContainers {
  projection: HTMLElement;
  grid: HTMLElement;
  distribution: HTMLElement;
  polar: HTMLElement;
  tracker: HTMLElement;
  status: HTMLElement;
}

export class App {
  readonly state = new ViewState();
  readonly client: SamplabClient;
  review: SuggestionReview | null = null;
  private sessionId: string | null = null;
  private busy = false;

  constructor(baseUrl: string, private containers: AppContainers) {
    this.client = new SamplabClient(fetchTransport(baseUrl));
  }

  async openSession(datasetId: string, options: Record<string, unknown> = {}): Promise<void> {
    const created = await this.client.createSession(datasetId, options);
    this.sessionId = created.session_id;
    this.review = new SuggestionReview(this.client, this.state, created.session_id);
    await this.refresh();
  }

  get trainingBusy(): boolean {
    return this.busy;
  }

  async confirmPending(): Promise<void> {
    if (!this.review || this.busy) return;
    this.busy = true;
    this.containers.status.textContent = "training...";
    try {
      const outcome = await this.review.confirm();
      this.containers.status.textContent =
        outcome.kind === "confirmed" ? "step confirmed"
        : outcome.kind === "stale" ? outcome.message
        : `failed: ${outcome.message}`;
    } finally {
      this.busy = false;
    }
    await this.refresh();
  }

  async refresh(): Promise<void> {
    if (!this.sessionId) return;
    const sid = this.sessionId;
    const [types, projections, steps, overlay, report] = await Promise.all([
      this.client.types(sid),
      this.client.projections(sid),
      this.client.steps(sid),
      this.client.overlay(sid),
      this.client.report(sid),
    ]);
    this.renderAll(types, projections, steps, overlay, report);
  }

  private renderAll(types: TypesPayload, projections: ProjectionsPayload,
                    steps: StepsPayload, overlay: OverlayPayload,
                    report: ReportPayload): void {
    const active = projections.candidates.find((c) => c.n_neighbors === projections.active_k)
      ?? projections.candidates[0];
    const ids = types.assignments.map((a) => a.id);
    const labels = new Map(types.assignments.map((a) => [a.id, a.class]));
    const suggestion = this.state.pending?.suggestion ?? null;
    this.state.setPlotted(ids);

    const scene = buildProjectionScene(ids, active.coords as Point[], types, labels, suggestion);
    this.containers.projection.innerHTML = renderProjectionSvg(scene);

    const grid = buildGridScene(projections.candidates);
    this.containers.grid.innerHTML = grid.map((g) =>
      `<figure data-n="${g.nNeighbors}"><figcaption>k=${g.nNeighbors} ` +
      `sdc=${g.sdc.toFixed(3)}</figcaption></figure>`).join("");

    const dist = buildDistributionScene(types, suggestion);
    this.containers.distribution.innerHTML =
      `<table>${dist.bars.map((b) =>
        `<tr><td>${b.classIndex}</td><td>${b.type}</td>` +
        `<td>${b.base}</td><td>${b.suggested}</td></tr>`).join("")}</table>`;

    const polar = buildInversePolarScene(types, report);
    this.containers.polar.textContent = polar.kind === "polar"
      ? `${polar.points.length} instances, ${polar.chords.length} confusion chords`
      : "confusion table fallback (more than 3 classes)";

    const tracker = buildTrackerScene(steps, overlay, types.distribution.per_type);
    this.containers.tracker.innerHTML =
      `<p>balanced accuracy ${tracker.headline.initial.balancedAccuracy.toFixed(3)} ` +
      `&rarr; ${tracker.headline.current.balancedAccuracy.toFixed(3)}, ` +
      `f1 ${tracker.headline.initial.f1.toFixed(3)} &rarr; ` +
      `${tracker.headline.current.f1.toFixed(3)}</p>`;
  }
}
