/** View state and the store that drives it.
 *
 * All displayed numbers come from service responses; the store never
 * computes a degree, a delta, or a winner itself.  User events and network
 * replies funnel through one store; each outgoing what-if request carries
 * a sequence number and replies older than the last applied one are
 * discarded, so the screen always reflects the newest answered request.
 */

import {
  ApiClient,
  KbDocument,
  SeriesPoint,
  WeightedEvaluation,
  WeightOverride,
  WhatIfResponse,
} from "./api.js";

export type Phase = "loading" | "ready" | "error";

export interface ViewState {
  phase: Phase;
  /** Error notice; in phase "ready" the previous numbers stay on screen. */
  notice: string | null;
  kb: KbDocument | null;
  /** Ids of leaves with the reflexive role, in document order. */
  reflexiveLeaves: string[];
  /** Most recent baseline evaluation returned by the service. */
  baseline: WeightedEvaluation | null;
  /** Most recent adjusted evaluation from /api/whatif, if any. */
  adjusted: WeightedEvaluation | null;
  /** delta_g from the most recent what-if response. */
  deltaG: number | null;
  timestamps: string[];
  timelineIndex: number;
  seriesPoints: SeriesPoint[];
  /** Current slider positions (baseline degrees until the user moves one). */
  leafControls: Record<string, number>;
  /** Current weight-editor positions, keyed "child->parent". */
  weightControls: Record<string, number>;
  /** Leaf overrides sent with every what-if request. */
  overrides: Record<string, number>;
  weightOverrides: WeightOverride[];
  pending: boolean;
}

export function initialState(): ViewState {
  return {
    phase: "loading",
    notice: null,
    kb: null,
    reflexiveLeaves: [],
    baseline: null,
    adjusted: null,
    deltaG: null,
    timestamps: [],
    timelineIndex: 0,
    seriesPoints: [],
    leafControls: {},
    weightControls: {},
    overrides: {},
    weightOverrides: [],
    pending: false,
  };
}

export function edgeKey(child: string, parent: string): string {
  return `${child}->${parent}`;
}

function describe(error: unknown): string {
  return error instanceof Error ? error.message : String(error);
}

function checkEvaluation(value: WeightedEvaluation | undefined): WeightedEvaluation {
  if (
    !value ||
    typeof value !== "object" ||
    typeof value.result !== "object" ||
    value.result === null ||
    typeof value.result.g_degree !== "number" ||
    typeof value.result.winner !== "string" ||
    typeof value.degrees !== "object" ||
    value.degrees === null
  ) {
    throw new Error("malformed evaluation response");
  }
  return value;
}

/** Slider positions from a baseline response: overridden leaves keep the
 * user's value, the rest show the degree the service reported. */
function leafControlsFrom(
  evaluation: WeightedEvaluation,
  leaves: string[],
  overrides: Record<string, number>,
): Record<string, number> {
  const controls: Record<string, number> = {};
  for (const id of leaves) {
    const override = overrides[id];
    controls[id] = override !== undefined ? override : evaluation.degrees[id] ?? 0;
  }
  return controls;
}

function weightControlsFrom(kb: KbDocument): Record<string, number> {
  const controls: Record<string, number> = {};
  for (const edge of kb.edges) {
    controls[edgeKey(edge.child, edge.parent)] = edge.weight;
  }
  return controls;
}

export class Store {
  state: ViewState = initialState();

  private seq = 0;
  private applied = 0;
  private listeners: Array<(state: ViewState) => void> = [];

  constructor(private readonly client: ApiClient) {}

  subscribe(listener: (state: ViewState) => void): void {
    this.listeners.push(listener);
  }

  private patch(partial: Partial<ViewState>): void {
    this.state = { ...this.state, ...partial };
    for (const listener of this.listeners) {
      listener(this.state);
    }
  }

  private currentTimestamp(): string | null {
    return this.state.timestamps[this.state.timelineIndex] ?? null;
  }

  async load(): Promise<void> {
    this.patch({ ...initialState(), phase: "loading" });
    try {
      const kb = await this.client.fetchKb();
      const series = await this.client.fetchSeries();
      const timestamp = series.timestamps[0] ?? null;
      const baseline = checkEvaluation(
        await this.client.evaluate({ semantics: "weighted", timestamp }),
      );
      const seriesPoints =
        series.timestamps.length > 0
          ? (await this.client.evaluateSeries()).points
          : [];
      const reflexiveLeaves = kb.nodes
        .filter((node) => node.role === "reflexive_leaf")
        .map((node) => node.id);
      this.patch({
        phase: "ready",
        notice: null,
        kb,
        reflexiveLeaves,
        baseline,
        adjusted: null,
        deltaG: null,
        timestamps: series.timestamps,
        timelineIndex: 0,
        seriesPoints,
        leafControls: leafControlsFrom(baseline, reflexiveLeaves, {}),
        weightControls: weightControlsFrom(kb),
        overrides: {},
        weightOverrides: [],
        pending: false,
      });
    } catch (error) {
      this.patch({ ...initialState(), phase: "error", notice: describe(error) });
    }
  }

  async adjustLeaf(id: string, value: number): Promise<void> {
    this.patch({
      leafControls: { ...this.state.leafControls, [id]: value },
      overrides: { ...this.state.overrides, [id]: value },
    });
    await this.pushWhatIf();
  }

  async adjustWeight(child: string, parent: string, weight: number): Promise<void> {
    const key = edgeKey(child, parent);
    this.patch({
      weightControls: { ...this.state.weightControls, [key]: weight },
      weightOverrides: this.state.weightOverrides
        .filter((o) => edgeKey(o.child, o.parent) !== key)
        .concat([{ child, parent, weight }]),
    });
    await this.pushWhatIf();
  }

  async selectTimestamp(index: number): Promise<void> {
    const count = this.state.timestamps.length;
    if (count === 0) {
      return;
    }
    this.patch({ timelineIndex: Math.min(Math.max(index, 0), count - 1) });
    await this.pushWhatIf();
  }

  /** Drop every override; the next response shows delta 0 by construction. */
  async revertAll(): Promise<void> {
    const { baseline, kb } = this.state;
    if (!baseline || !kb) {
      return;
    }
    this.patch({
      overrides: {},
      weightOverrides: [],
      leafControls: leafControlsFrom(baseline, this.state.reflexiveLeaves, {}),
      weightControls: weightControlsFrom(kb),
    });
    await this.pushWhatIf();
  }

  private async pushWhatIf(): Promise<void> {
    const seq = ++this.seq;
    this.patch({ pending: true, notice: null });
    try {
      const response: WhatIfResponse = await this.client.whatIf({
        baseline: { semantics: "weighted", timestamp: this.currentTimestamp() },
        overrides: this.state.overrides,
        weight_overrides: this.state.weightOverrides,
      });
      const baseline = checkEvaluation(response.baseline);
      const adjusted = checkEvaluation(response.adjusted);
      if (seq <= this.applied) {
        return; // a newer reply already landed; this one is stale
      }
      this.applied = seq;
      this.patch({
        baseline,
        adjusted,
        deltaG: response.delta_g,
        leafControls: leafControlsFrom(
          baseline,
          this.state.reflexiveLeaves,
          this.state.overrides,
        ),
        pending: seq !== this.seq,
      });
    } catch (error) {
      if (seq <= this.applied) {
        return;
      }
      this.applied = seq;
      this.patch({ notice: describe(error), pending: seq !== this.seq });
    }
  }
}
