/** Typed client for the conflict service's JSON API.
 *
 * The shapes here mirror the wire format exactly; nothing is renamed or
 * post-processed, so every number the UI shows can be traced byte for
 * byte to a response field.
 */

export type Winner = "subject_a" | "subject_b" | "draw";

export interface ConflictResultPayload {
  g_degree: number;
  goal_a_degree: number;
  goal_b_degree: number;
  self_esteem_a_degree: number;
  self_esteem_b_degree: number;
  winner: Winner;
}

export interface WeightedEvaluation {
  semantics: "weighted";
  timestamp: string | null;
  result: ConflictResultPayload;
  degrees: Record<string, number>;
}

export interface WhatIfResponse {
  baseline: WeightedEvaluation;
  adjusted: WeightedEvaluation;
  delta_g: number | null;
}

export interface KbNode {
  id: string;
  label: string;
  kind: "leaf" | "internal";
  role: string | null;
}

export interface KbEdge {
  child: string;
  parent: string;
  weight: number;
}

export interface KbGroup {
  members: string[];
  threshold: number;
}

export interface KbDocument {
  nodes: KbNode[];
  edges: KbEdge[];
  groups: KbGroup[];
}

export interface SeriesResponse {
  series: Record<string, [string, number][]>;
  timestamps: string[];
}

export interface SeriesPoint extends ConflictResultPayload {
  timestamp: string;
}

export interface EvaluateRequest {
  semantics: "weighted";
  leaves?: Record<string, number>;
  timestamp?: string | null;
}

export interface WeightOverride {
  child: string;
  parent: string;
  weight: number;
}

export interface WhatIfRequest {
  baseline: EvaluateRequest;
  overrides: Record<string, number>;
  weight_overrides: WeightOverride[];
}

export class ApiError extends Error {
  constructor(readonly status: number, detail: string) {
    super(`service error ${status}: ${detail}`);
    this.name = "ApiError";
  }
}

export class ApiClient {
  constructor(private readonly base: string = "") {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await fetch(this.base + path, init);
    const text = await response.text();
    if (!response.ok) {
      let detail = text;
      try {
        detail = JSON.stringify((JSON.parse(text) as { detail?: unknown }).detail);
      } catch {
        // non-JSON error body: show it raw
      }
      throw new ApiError(response.status, detail);
    }
    return JSON.parse(text) as T;
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  fetchKb(): Promise<KbDocument> {
    return this.request("/api/kb");
  }

  fetchSeries(): Promise<SeriesResponse> {
    return this.request("/api/series");
  }

  evaluate(body: EvaluateRequest): Promise<WeightedEvaluation> {
    return this.post("/api/evaluate", body);
  }

  whatIf(body: WhatIfRequest): Promise<WhatIfResponse> {
    return this.post("/api/whatif", body);
  }

  evaluateSeries(): Promise<{ points: SeriesPoint[] }> {
    return this.request("/api/evaluate/series");
  }
}
