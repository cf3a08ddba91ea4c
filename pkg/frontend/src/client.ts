/** Typed client for the samplab HTTP API with an injectable transport so
 * tests can run against recorded payloads. */

import type {
  ApiErrorPayload,
  JobPayload,
  OverlayPayload,
  ProjectionsPayload,
  ProposalResponse,
  ReportPayload,
  StepsPayload,
  TypesPayload,
} from "./types.js";

export interface TransportResponse {
  status: number;
  body: unknown;
}

export type Transport = (
  method: string,
  path: string,
  body?: unknown,
) => Promise<TransportResponse>;

export class ApiError extends Error {
  constructor(public status: number, public payload: ApiErrorPayload) {
    super(payload.message);
  }

  get code(): string {
    return this.payload.code;
  }
}

export function fetchTransport(baseUrl: string): Transport {
  return async (method, path, body) => {
    const response = await fetch(baseUrl + path, {
      method,
      headers: body === undefined ? {} : { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const text = await response.text();
    return { status: response.status, body: text ? JSON.parse(text) : null };
  };
}

export class SamplabClient {
  constructor(private transport: Transport) {}

  private async call<T>(method: string, path: string, body?: unknown): Promise<T> {
    const { status, body: payload } = await this.transport(method, path, body);
    if (status >= 400) {
      throw new ApiError(status, payload as ApiErrorPayload);
    }
    return payload as T;
  }

  createSession(datasetId: string, options: Record<string, unknown> = {}) {
    return this.call<{ session_id: string; report: ReportPayload; types: TypesPayload }>(
      "POST", "/sessions", { dataset_id: datasetId, ...options });
  }

  projections(sessionId: string) {
    return this.call<ProjectionsPayload>("GET", `/sessions/${sessionId}/projections`);
  }

  selectProjection(sessionId: string, nNeighbors: number) {
    return this.call<{ active_k: number }>(
      "POST", `/sessions/${sessionId}/projection`, { n_neighbors: nNeighbors });
  }

  types(sessionId: string) {
    return this.call<TypesPayload>("GET", `/sessions/${sessionId}/types`);
  }

  propose(sessionId: string, algorithm: string, params: Record<string, unknown>,
          scope: Record<string, unknown>) {
    return this.call<ProposalResponse>(
      "POST", `/sessions/${sessionId}/propose`, { algorithm, params, scope });
  }

  confirm(sessionId: string, suggestionId: string,
          accepted: { ids?: number[]; indices?: number[] }) {
    const body: Record<string, unknown> = { suggestion_id: suggestionId };
    if (accepted.ids !== undefined) body.accepted_ids = accepted.ids;
    if (accepted.indices !== undefined) body.accepted_indices = accepted.indices;
    return this.call<{ job_id: string }>(
      "POST", `/sessions/${sessionId}/confirm`, body);
  }

  job(jobId: string) {
    return this.call<JobPayload>("GET", `/jobs/${jobId}`);
  }

  async pollJob(jobId: string, intervalMs = 250,
                sleep: (ms: number) => Promise<void> = defaultSleep): Promise<JobPayload> {
    for (;;) {
      const job = await this.job(jobId);
      if (job.status === "done" || job.status === "failed") return job;
      await sleep(intervalMs);
    }
  }

  report(sessionId: string) {
    return this.call<ReportPayload>("GET", `/sessions/${sessionId}/report`);
  }

  steps(sessionId: string) {
    return this.call<StepsPayload>("GET", `/sessions/${sessionId}/steps`);
  }

  overlay(sessionId: string) {
    return this.call<OverlayPayload>("GET", `/sessions/${sessionId}/overlay`);
  }

  exportSession(sessionId: string) {
    return this.call<unknown>("GET", `/sessions/${sessionId}/export`);
  }
}

function defaultSleep(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}
