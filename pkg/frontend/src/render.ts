/** DOM construction and updates.
 *
 * The skeleton is built once; `mountApp` returns an update function that
 * writes the current view state into it.  Displayed numbers are stringified
 * response values — there is no arithmetic here beyond positioning bars.
 */

import { ConflictResultPayload, Winner } from "./api.js";
import { ViewState, edgeKey } from "./state.js";

export interface Handlers {
  onLeafChange(id: string, value: number): void;
  onWeightChange(child: string, parent: string, weight: number): void;
  onTimelineChange(index: number): void;
  onRevertAll(): void;
  onRetry(): void;
}

export const WINNER_TEXT: Record<Winner, string> = {
  subject_a: "Subject A prevails",
  subject_b: "Subject B prevails",
  draw: "Draw",
};

const DEGREE_BARS: Array<[keyof ConflictResultPayload, string]> = [
  ["goal_a_degree", "Goal A"],
  ["goal_b_degree", "Goal B"],
  ["self_esteem_a_degree", "Self-esteem A"],
  ["self_esteem_b_degree", "Self-esteem B"],
];

const SVG_NS = "http://www.w3.org/2000/svg";
const CHART_WIDTH = 300;
const CHART_HEIGHT = 80;

type Attrs = Record<string, string>;

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Attrs = {},
  children: Array<Node | string> = [],
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [name, value] of Object.entries(attrs)) {
    node.setAttribute(name, value);
  }
  node.append(...children);
  return node;
}

function svgEl(tag: string, attrs: Attrs = {}): SVGElement {
  const node = document.createElementNS(SVG_NS, tag) as SVGElement;
  for (const [name, value] of Object.entries(attrs)) {
    node.setAttribute(name, value);
  }
  return node;
}

/** Signed bar geometry: zero sits in the middle, |value| of 1 fills half. */
function signedBar(fill: HTMLElement, value: number): void {
  const span = Math.min(Math.abs(value), 1) * 50;
  fill.style.width = `${span}%`;
  fill.style.left = value >= 0 ? "50%" : `${50 - span}%`;
  fill.classList.toggle("negative", value < 0);
}

interface Refs {
  errorBanner: HTMLElement;
  errorText: HTMLElement;
  winner: HTMLElement;
  gValue: HTMLElement;
  gaugeFill: HTMLElement;
  deltaValue: HTMLElement;
  pending: HTMLElement;
  bars: Map<string, { fill: HTMLElement; value: HTMLElement }>;
  timeline: HTMLElement;
  scrubber: HTMLInputElement;
  timestampLabel: HTMLElement;
  chart: SVGElement;
  controls: HTMLFieldSetElement;
  sliders: HTMLElement;
  weights: HTMLElement;
}

function buildSkeleton(root: HTMLElement, handlers: Handlers): Refs {
  const errorText = el("span", { "data-role": "error-text" });
  const retry = el("button", { type: "button" }, ["Retry"]);
  retry.addEventListener("click", () => handlers.onRetry());
  const errorBanner = el("div", { class: "error-banner", "data-role": "error-banner" }, [
    errorText,
    retry,
  ]);
  errorBanner.hidden = true;

  const winner = el("div", { class: "winner-banner", "data-role": "winner-banner" }, ["—"]);
  const gaugeFill = el("div", { class: "gauge-fill", "data-role": "gauge-fill" });
  const gValue = el("span", { class: "gauge-value", "data-role": "g-value" }, ["—"]);
  const gauge = el("div", { class: "gauge" }, [
    el("div", { class: "gauge-track" }, [el("div", { class: "gauge-axis" }), gaugeFill]),
    el("div", {}, ["G = ", gValue]),
  ]);
  const deltaValue = el("span", { "data-role": "delta-value" }, ["—"]);
  const delta = el("div", { class: "delta" }, ["Δg vs baseline: ", deltaValue]);
  const pending = el("span", { class: "pending", "data-role": "pending" }, ["evaluating…"]);
  pending.hidden = true;

  const bars = new Map<string, { fill: HTMLElement; value: HTMLElement }>();
  const barRows: HTMLElement[] = [];
  for (const [field, label] of DEGREE_BARS) {
    const fill = el("div", { class: "bar-fill" });
    const value = el("span", { class: "bar-value", "data-role": `degree-${field}` }, ["—"]);
    bars.set(field, { fill, value });
    barRows.push(
      el("div", { class: "bar-row" }, [
        el("span", { class: "bar-label" }, [label]),
        el("div", { class: "bar-track" }, [el("div", { class: "bar-axis" }), fill]),
        value,
      ]),
    );
  }

  const scrubber = el("input", {
    type: "range",
    min: "0",
    max: "0",
    step: "1",
    "data-role": "scrubber",
  });
  scrubber.addEventListener("input", () => handlers.onTimelineChange(Number(scrubber.value)));
  const timestampLabel = el("span", { "data-role": "timestamp-label" });
  const chart = svgEl("svg", {
    viewBox: `0 0 ${CHART_WIDTH} ${CHART_HEIGHT}`,
    class: "chart",
    "data-role": "chart",
  });
  const timeline = el("section", { class: "timeline", "data-role": "timeline" }, [
    el("h2", {}, ["G over time"]),
    chart,
    el("div", { class: "timeline-controls" }, [scrubber, timestampLabel]),
  ]);
  timeline.hidden = true;

  const sliders = el("div", { class: "control-grid", "data-role": "sliders" });
  const weights = el("div", { class: "control-grid", "data-role": "weights" });
  const revert = el("button", { type: "button", "data-role": "revert" }, [
    "Reset to baseline",
  ]);
  revert.addEventListener("click", () => handlers.onRevertAll());
  const controls = el("fieldset", { class: "controls", "data-role": "controls" }, [
    el("h2", {}, ["Reflexive variables"]),
    sliders,
    el("h2", {}, ["Influence weights"]),
    weights,
    revert,
  ]);

  root.replaceChildren(
    errorBanner,
    el("header", { class: "verdict" }, [winner, gauge, delta, pending]),
    el("section", { class: "degrees" }, [el("h2", {}, ["Degrees"]), ...barRows]),
    timeline,
    controls,
  );

  return {
    errorBanner,
    errorText,
    winner,
    gValue,
    gaugeFill,
    deltaValue,
    pending,
    bars,
    timeline,
    scrubber,
    timestampLabel,
    chart,
    controls,
    sliders,
    weights,
  };
}

function buildSliderRow(id: string, label: string, handlers: Handlers): HTMLElement {
  const input = el("input", {
    type: "range",
    min: "0",
    max: "1",
    step: "0.01",
    "data-leaf": id,
  });
  const value = el("span", { class: "control-value", "data-role": `leaf-value-${id}` });
  input.addEventListener("input", () => handlers.onLeafChange(id, Number(input.value)));
  return el("div", { class: "control-row" }, [
    el("label", { title: label }, [id]),
    input,
    value,
  ]);
}

function buildWeightRow(child: string, parent: string, handlers: Handlers): HTMLElement {
  const input = el("input", {
    type: "number",
    min: "-1",
    max: "1",
    step: "0.05",
    "data-edge": edgeKey(child, parent),
  });
  input.addEventListener("input", () => {
    const weight = Number(input.value);
    if (Number.isFinite(weight)) {
      handlers.onWeightChange(child, parent, weight);
    }
  });
  return el("div", { class: "control-row" }, [
    el("label", {}, [`${child} → ${parent}`]),
    input,
  ]);
}

function renderChart(refs: Refs, state: ViewState): void {
  const points = state.seriesPoints;
  refs.chart.replaceChildren();
  if (points.length === 0) {
    return;
  }
  const largest = Math.max(...points.map((p) => Math.abs(p.g_degree)), 1e-12);
  const x = (index: number): number =>
    points.length === 1
      ? CHART_WIDTH / 2
      : (index * CHART_WIDTH) / (points.length - 1);
  const y = (g: number): number =>
    CHART_HEIGHT / 2 - (g / largest) * (CHART_HEIGHT / 2 - 6);

  refs.chart.append(
    svgEl("line", {
      x1: "0",
      y1: String(CHART_HEIGHT / 2),
      x2: String(CHART_WIDTH),
      y2: String(CHART_HEIGHT / 2),
      class: "chart-axis",
    }),
  );
  const scrubX = x(state.timelineIndex);
  refs.chart.append(
    svgEl("line", {
      x1: String(scrubX),
      y1: "0",
      x2: String(scrubX),
      y2: String(CHART_HEIGHT),
      class: "chart-scrub",
    }),
  );
  refs.chart.append(
    svgEl("polyline", {
      points: points.map((p, i) => `${x(i)},${y(p.g_degree)}`).join(" "),
      class: "chart-line",
    }),
  );
  points.forEach((point, index) => {
    refs.chart.append(
      svgEl("circle", {
        cx: String(x(index)),
        cy: String(y(point.g_degree)),
        r: "3",
        class: "chart-point",
        "data-timestamp": point.timestamp,
      }),
    );
  });
}

export function mountApp(
  root: HTMLElement,
  handlers: Handlers,
): (state: ViewState) => void {
  const refs = buildSkeleton(root, handlers);
  let sliderSignature = "";
  let weightSignature = "";

  return (state: ViewState): void => {
    refs.errorBanner.hidden = state.phase !== "error" && state.notice === null;
    refs.errorText.textContent = state.notice ?? "";
    refs.controls.disabled = state.phase !== "ready";
    refs.pending.hidden = !state.pending;

    const displayed = state.adjusted ?? state.baseline;
    if (displayed) {
      refs.winner.textContent = WINNER_TEXT[displayed.result.winner];
      refs.winner.dataset.winner = displayed.result.winner;
      refs.gValue.textContent = String(displayed.result.g_degree);
      signedBar(refs.gaugeFill, displayed.result.g_degree);
      for (const [field, parts] of refs.bars) {
        const value = displayed.result[field as keyof ConflictResultPayload];
        if (typeof value === "number") {
          parts.value.textContent = String(value);
          signedBar(parts.fill, value);
        }
      }
    } else {
      refs.winner.textContent = "—";
      delete refs.winner.dataset.winner;
      refs.gValue.textContent = "—";
      signedBar(refs.gaugeFill, 0);
      for (const parts of refs.bars.values()) {
        parts.value.textContent = "—";
        signedBar(parts.fill, 0);
      }
    }
    refs.deltaValue.textContent = state.deltaG === null ? "—" : String(state.deltaG);

    const sliderIds = state.reflexiveLeaves.join(",");
    if (sliderIds !== sliderSignature) {
      sliderSignature = sliderIds;
      const labels = new Map(
        (state.kb?.nodes ?? []).map((node) => [node.id, node.label]),
      );
      refs.sliders.replaceChildren(
        ...state.reflexiveLeaves.map((id) =>
          buildSliderRow(id, labels.get(id) ?? id, handlers),
        ),
      );
    }
    for (const input of refs.sliders.querySelectorAll<HTMLInputElement>("input[data-leaf]")) {
      const id = input.dataset.leaf ?? "";
      const value = state.leafControls[id];
      if (value !== undefined && document.activeElement !== input) {
        input.value = String(value);
      }
      const label = refs.sliders.querySelector(`[data-role="leaf-value-${id}"]`);
      if (label && value !== undefined) {
        label.textContent = String(value);
      }
    }

    const edges = state.kb?.edges ?? [];
    const edgeIds = edges.map((e) => edgeKey(e.child, e.parent)).join(",");
    if (edgeIds !== weightSignature) {
      weightSignature = edgeIds;
      refs.weights.replaceChildren(
        ...edges.map((e) => buildWeightRow(e.child, e.parent, handlers)),
      );
    }
    for (const input of refs.weights.querySelectorAll<HTMLInputElement>("input[data-edge]")) {
      const key = input.dataset.edge ?? "";
      const value = state.weightControls[key];
      if (value !== undefined && document.activeElement !== input) {
        input.value = String(value);
      }
    }

    refs.timeline.hidden = state.timestamps.length === 0;
    if (state.timestamps.length > 0) {
      refs.scrubber.max = String(state.timestamps.length - 1);
      if (document.activeElement !== refs.scrubber) {
        refs.scrubber.value = String(state.timelineIndex);
      }
      refs.timestampLabel.textContent = state.timestamps[state.timelineIndex] ?? "";
      renderChart(refs, state);
    }
  };
}
