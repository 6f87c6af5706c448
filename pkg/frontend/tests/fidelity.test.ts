/** UI fidelity gate: a scripted run of control adjustments where every
 * displayed winner, G value, degree, and delta must equal the field of
 * the what-if response the service actually returned — and reverting all
 * controls must show a delta of exactly 0.
 */

import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { mountApp, WINNER_TEXT } from "../src/render.js";
import { Store } from "../src/state.js";
import { FakeService, patternDocument, until } from "./fake_service.js";

const BASELINE = { a2: 0.25, c3: 0.5, a1: 0.125 };

interface Harness {
  fake: FakeService;
  store: Store;
  root: HTMLElement;
}

async function boot(): Promise<Harness> {
  const fake = new FakeService(patternDocument(), BASELINE);
  fake.install();
  const root = document.createElement("div");
  document.body.replaceChildren(root);
  const store = new Store(new ApiClient(""));
  const update = mountApp(root, {
    onLeafChange: (id, value) => void store.adjustLeaf(id, value),
    onWeightChange: (child, parent, weight) =>
      void store.adjustWeight(child, parent, weight),
    onTimelineChange: (index) => void store.selectTimestamp(index),
    onRevertAll: () => void store.revertAll(),
    onRetry: () => void store.load(),
  });
  store.subscribe(update);
  update(store.state);
  await store.load();
  return { fake, store, root };
}

function text(root: HTMLElement, selector: string): string {
  return root.querySelector(selector)?.textContent ?? "";
}

function setSlider(root: HTMLElement, id: string, value: number): void {
  const input = root.querySelector<HTMLInputElement>(`input[data-leaf="${id}"]`);
  if (!input) {
    throw new Error(`no slider for ${id}`);
  }
  input.value = String(value);
  input.dispatchEvent(new Event("input", { bubbles: true }));
}

function setWeight(
  root: HTMLElement,
  child: string,
  parent: string,
  weight: number,
): void {
  const input = root.querySelector<HTMLInputElement>(
    `input[data-edge="${child}->${parent}"]`,
  );
  if (!input) {
    throw new Error(`no weight editor for ${child}->${parent}`);
  }
  input.value = String(weight);
  input.dispatchEvent(new Event("input", { bubbles: true }));
}

type Action =
  | { kind: "leaf"; id: string; value: number }
  | { kind: "weight"; child: string; parent: string; weight: number };

const SCRIPT: Action[] = [
  { kind: "leaf", id: "a2", value: 0.9 },
  { kind: "leaf", id: "c2", value: 0.4 },
  { kind: "leaf", id: "a1", value: 1 },
  { kind: "leaf", id: "b3", value: 0.2 },
  { kind: "weight", child: "GoalA", parent: "G", weight: 0.5 },
  { kind: "leaf", id: "d4", value: 0.8 },
  { kind: "leaf", id: "a2", value: 0.3 },
  { kind: "weight", child: "a1", parent: "GoalA", weight: 0.75 },
  { kind: "leaf", id: "c3", value: 0.55 },
  { kind: "leaf", id: "b2", value: 0.05 },
];

function apply(root: HTMLElement, action: Action): void {
  if (action.kind === "leaf") {
    setSlider(root, action.id, action.value);
  } else {
    setWeight(root, action.child, action.parent, action.weight);
  }
}

function assertDisplayMatchesResponse(harness: Harness): void {
  const { fake, root } = harness;
  const response = fake.whatIfs.at(-1);
  if (!response) {
    throw new Error("no what-if response recorded");
  }
  const result = response.adjusted.result;
  expect(text(root, '[data-role="winner-banner"]')).toBe(
    WINNER_TEXT[result.winner],
  );
  expect(text(root, '[data-role="g-value"]')).toBe(String(result.g_degree));
  expect(text(root, '[data-role="degree-goal_a_degree"]')).toBe(
    String(result.goal_a_degree),
  );
  expect(text(root, '[data-role="degree-goal_b_degree"]')).toBe(
    String(result.goal_b_degree),
  );
  expect(text(root, '[data-role="degree-self_esteem_a_degree"]')).toBe(
    String(result.self_esteem_a_degree),
  );
  expect(text(root, '[data-role="degree-self_esteem_b_degree"]')).toBe(
    String(result.self_esteem_b_degree),
  );
  expect(text(root, '[data-role="delta-value"]')).toBe(
    response.delta_g === null ? "—" : String(response.delta_g),
  );
}

describe("UI fidelity", () => {
  it("shows exactly the service's answer through 10 scripted adjustments, and delta 0 after reverting them all", async () => {
    const harness = await boot();
    const { fake, store, root } = harness;
    expect(root.querySelectorAll("input[data-leaf]")).toHaveLength(13);

    const leavesBefore = { ...store.state.leafControls };
    const weightsBefore = { ...store.state.weightControls };
    const winners = new Set<string>();

    for (const [index, action] of SCRIPT.entries()) {
      apply(root, action);
      await until(
        () => fake.whatIfs.length === index + 1 && !store.state.pending,
      );
      assertDisplayMatchesResponse(harness);
      winners.add(text(root, '[data-role="winner-banner"]'));
    }
    expect(winners.size).toBeGreaterThanOrEqual(2);

    // put every touched control back where it started; the service must
    // report a delta of exactly 0, and the screen must show it
    const touchedLeaves = [
      ...new Set(
        SCRIPT.filter((a): a is Extract<Action, { kind: "leaf" }> => a.kind === "leaf").map(
          (a) => a.id,
        ),
      ),
    ];
    const touchedWeights = SCRIPT.filter(
      (a): a is Extract<Action, { kind: "weight" }> => a.kind === "weight",
    );
    let issued = SCRIPT.length;
    for (const id of touchedLeaves) {
      setSlider(root, id, leavesBefore[id] ?? 0);
      issued += 1;
      await until(() => fake.whatIfs.length === issued && !store.state.pending);
      assertDisplayMatchesResponse(harness);
    }
    for (const { child, parent } of touchedWeights) {
      setWeight(root, child, parent, weightsBefore[`${child}->${parent}`] ?? 1);
      issued += 1;
      await until(() => fake.whatIfs.length === issued && !store.state.pending);
      assertDisplayMatchesResponse(harness);
    }

    const final = fake.whatIfs.at(-1);
    expect(final?.delta_g).toBe(0);
    expect(text(root, '[data-role="delta-value"]')).toBe("0");
  });

  it("resets to baseline through the button, showing the service's zero delta", async () => {
    const harness = await boot();
    const { fake, store, root } = harness;

    setSlider(root, "a2", 0.9);
    await until(() => fake.whatIfs.length === 1 && !store.state.pending);
    setWeight(root, "GoalA", "G", 0.5);
    await until(() => fake.whatIfs.length === 2 && !store.state.pending);
    expect(text(root, '[data-role="delta-value"]')).not.toBe("0");

    const button = root.querySelector<HTMLButtonElement>('[data-role="revert"]');
    button?.click();
    await until(() => fake.whatIfs.length === 3 && !store.state.pending);

    expect(fake.whatIfs.at(-1)?.delta_g).toBe(0);
    expect(text(root, '[data-role="delta-value"]')).toBe("0");
    const slider = root.querySelector<HTMLInputElement>('input[data-leaf="a2"]');
    expect(slider?.value).toBe("0.25");
    const weight = root.querySelector<HTMLInputElement>(
      'input[data-edge="GoalA->G"]',
    );
    expect(weight?.value).toBe("1");
  });

  it("keeps the banner on the newest response during a rapid drag", async () => {
    const harness = await boot();
    const { fake, store, root } = harness;

    const hold1 = fake.holdNextWhatIf();
    const hold2 = fake.holdNextWhatIf();
    setSlider(root, "a2", 0.6);
    setSlider(root, "a2", 0.9);
    await until(
      () => fake.requests.filter((r) => r.path === "/api/whatif").length === 2,
    );
    hold2.resolve();
    await until(() => fake.whatIfs.length === 1);
    await until(() => store.state.adjusted !== null);
    hold1.resolve();
    await until(() => fake.whatIfs.length === 2);
    await until(() => !store.state.pending);

    // whatIfs[0] is the reply to the *second* request (it completed first)
    const newest = fake.whatIfs[0];
    expect(newest?.adjusted.degrees["a2"]).toBe(0.9);
    expect(text(root, '[data-role="g-value"]')).toBe(
      String(newest?.adjusted.result.g_degree),
    );
    expect(text(root, '[data-role="winner-banner"]')).toBe(
      WINNER_TEXT[newest?.adjusted.result.winner ?? "draw"],
    );
  });
});
