/** In-memory stand-in for the conflict service, installed as `fetch`.
 *
 * It plays the server's role with its own toy arithmetic — the UI under
 * test must never recompute anything, so the only property that matters
 * is that identical requests get identical responses and that every
 * returned what-if response is recorded for the tests to compare against.
 */

import {
  KbDocument,
  KbEdge,
  KbNode,
  WeightedEvaluation,
  WeightOverride,
  WhatIfResponse,
  Winner,
} from "../src/api.js";

export interface Deferred {
  promise: Promise<void>;
  resolve(): void;
}

export function deferred(): Deferred {
  let resolve!: () => void;
  const promise = new Promise<void>((r) => {
    resolve = r;
  });
  return { promise, resolve };
}

function ok(payload: unknown): Response {
  return {
    ok: true,
    status: 200,
    text: async () => JSON.stringify(payload),
  } as unknown as Response;
}

function bad(status: number, detail: string): Response {
  return {
    ok: false,
    status,
    text: async () => JSON.stringify({ detail }),
  } as unknown as Response;
}

interface WhatIfBody {
  baseline: { semantics: string; leaves?: Record<string, number>; timestamp?: string | null };
  overrides?: Record<string, number>;
  weight_overrides?: WeightOverride[];
}

export class FakeService {
  /** Every what-if response returned, in completion order. */
  readonly whatIfs: WhatIfResponse[] = [];
  readonly requests: Array<{ method: string; path: string; body?: unknown }> = [];
  failNextWhatIf = false;
  malformNextWhatIf = false;
  failKb = false;

  private holds: Deferred[] = [];

  constructor(
    private readonly kb: KbDocument,
    private readonly baselineLeaves: Record<string, number> = {},
    private readonly series: Record<string, [string, number][]> = {},
  ) {}

  /** The next what-if request will wait until the returned deferred resolves. */
  holdNextWhatIf(): Deferred {
    const hold = deferred();
    this.holds.push(hold);
    return hold;
  }

  install(): void {
    globalThis.fetch = this.fetch.bind(this) as typeof fetch;
  }

  timestamps(): string[] {
    const first = Object.values(this.series)[0];
    return first ? first.map(([stamp]) => stamp) : [];
  }

  async fetch(input: RequestInfo | URL, init?: RequestInit): Promise<Response> {
    const path = String(input);
    const method = init?.method ?? "GET";
    const body = init?.body ? (JSON.parse(String(init.body)) as unknown) : undefined;
    this.requests.push({ method, path, body });

    if (path === "/api/kb" && method === "GET") {
      if (this.failKb) {
        return bad(502, "injected outage");
      }
      return ok(this.kb);
    }
    if (path === "/api/series" && method === "GET") {
      return ok({ series: this.series, timestamps: this.timestamps() });
    }
    if (path === "/api/evaluate" && method === "POST") {
      const request = body as { leaves?: Record<string, number>; timestamp?: string | null };
      return ok(this.evaluation(request.leaves ?? {}, request.timestamp ?? null, {}));
    }
    if (path === "/api/evaluate/series" && method === "GET") {
      return ok({
        points: this.timestamps().map((stamp) => {
          const evaluation = this.evaluation({}, stamp, {});
          return { timestamp: stamp, ...evaluation.result };
        }),
      });
    }
    if (path === "/api/whatif" && method === "POST") {
      const hold = this.holds.shift();
      if (hold) {
        await hold.promise;
      }
      if (this.failNextWhatIf) {
        this.failNextWhatIf = false;
        return bad(500, "injected failure");
      }
      if (this.malformNextWhatIf) {
        this.malformNextWhatIf = false;
        return ok({ nonsense: true });
      }
      const request = body as WhatIfBody;
      const timestamp = request.baseline.timestamp ?? null;
      const baseLeaves = request.baseline.leaves ?? {};
      const weights: Record<string, number> = {};
      for (const override of request.weight_overrides ?? []) {
        weights[`${override.child}->${override.parent}`] = override.weight;
      }
      const baseline = this.evaluation(baseLeaves, timestamp, {});
      const adjusted = this.evaluation(
        { ...baseLeaves, ...(request.overrides ?? {}) },
        timestamp,
        weights,
      );
      const response: WhatIfResponse = {
        baseline,
        adjusted,
        delta_g: adjusted.result.g_degree - baseline.result.g_degree,
      };
      this.whatIfs.push(JSON.parse(JSON.stringify(response)) as WhatIfResponse);
      return ok(response);
    }
    return bad(404, `no route ${method} ${path}`);
  }

  private evaluation(
    overrides: Record<string, number>,
    timestamp: string | null,
    weightOverrides: Record<string, number>,
  ): WeightedEvaluation {
    const values: Record<string, number> = { ...this.baselineLeaves };
    if (timestamp !== null) {
      for (const [leaf, points] of Object.entries(this.series)) {
        const hit = points.find(([stamp]) => stamp === timestamp);
        if (hit) {
          values[leaf] = hit[1];
        }
      }
    }
    Object.assign(values, overrides);
    const weights: Record<string, number> = {};
    for (const edge of this.kb.edges) {
      weights[`${edge.child}->${edge.parent}`] = edge.weight;
    }
    Object.assign(weights, weightOverrides);

    const g = this.computeG(values, weights);
    const winner: Winner = g > 1e-9 ? "subject_a" : g < -1e-9 ? "subject_b" : "draw";
    return {
      semantics: "weighted",
      timestamp,
      result: {
        g_degree: g,
        goal_a_degree: g / 2,
        goal_b_degree: -g / 2,
        self_esteem_a_degree: Math.abs(g),
        self_esteem_b_degree: Math.abs(g) / 3,
        winner,
      },
      degrees: {
        ...values,
        A1: Math.abs(g),
        B1: Math.abs(g) / 3,
        GoalA: g / 2,
        GoalB: -g / 2,
        G: g,
      },
    };
  }

  /** Toy arithmetic; deterministic in (values, weights) and nothing else. */
  private computeG(values: Record<string, number>, weights: Record<string, number>): number {
    let acc = 0;
    const entries = Object.entries(values).sort(([a], [b]) =>
      a < b ? -1 : a > b ? 1 : 0,
    );
    for (const [id, value] of entries) {
      acc += (id.startsWith("a") || id.startsWith("b") ? -1 : 1) * value;
    }
    const wg = weights["GoalA->G"] ?? 1;
    const wa = weights["a1->GoalA"] ?? 1;
    return (acc / 24) * wg * (0.5 + wa / 2);
  }
}

/** 18-node conflict-pattern document with 13 reflexive leaves. */
export function patternDocument(): KbDocument {
  const leaf = (id: string, label: string): KbNode => ({
    id,
    label,
    kind: "leaf",
    role: "reflexive_leaf",
  });
  const internal = (id: string, label: string, role: string): KbNode => ({
    id,
    label,
    kind: "internal",
    role,
  });
  const edge = (child: string, parent: string, weight: number): KbEdge => ({
    child,
    parent,
    weight,
  });
  const aSide = ["a2", "b2", "a3", "b3", "a4", "b4"];
  const bSide = ["c2", "d2", "c3", "d3", "c4", "d4"];
  return {
    nodes: [
      internal("G", "Side A prevails over side B", "main"),
      internal("GoalA", "Goal of side A", "subject_goal"),
      internal("GoalB", "Goal of side B", "subject_goal"),
      internal("A1", "Self-esteem of side A", "self_esteem"),
      internal("B1", "Self-esteem of side B", "self_esteem"),
      leaf("a1", "Environment influence on both sides"),
      ...aSide.map((id) => leaf(id, `A-side variable ${id}`)),
      ...bSide.map((id) => leaf(id, `B-side variable ${id}`)),
    ],
    edges: [
      edge("GoalA", "G", 1),
      edge("GoalB", "G", -1),
      edge("a1", "GoalA", 1),
      edge("A1", "GoalA", -1),
      edge("a1", "GoalB", 1),
      edge("B1", "GoalB", -1),
      ...aSide.map((id) => edge(id, "A1", id.endsWith("2") ? 1 : -1)),
      ...bSide.map((id) => edge(id, "B1", id.endsWith("2") ? 1 : -1)),
    ],
    groups: [],
  };
}

/** Poll until `condition` holds; jsdom timers are real, so this settles
 * promise chains without guessing microtask depths. */
export async function until(condition: () => boolean, tries = 400): Promise<void> {
  for (let i = 0; i < tries; i++) {
    if (condition()) {
      return;
    }
    await new Promise((resolve) => setTimeout(resolve, 0));
  }
  throw new Error("condition not met in time");
}
