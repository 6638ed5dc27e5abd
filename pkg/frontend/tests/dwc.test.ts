/**
 * Difference-panel toggle behavior against a real run fixture:
 * default shows only deltas, the Similarity toggle reveals agreeing
 * entries, the Difference toggle hides deltas, and both are involutive.
 */

import { beforeEach, describe, expect, it } from "vitest";

import { DiffResponse } from "../src/api";
import { renderDwcPanel } from "../src/dwc";
import { Store } from "../src/state";
import { fixture } from "./helpers";

const diverged = fixture<DiffResponse>("diff_battery_39.json");
const inSync = fixture<DiffResponse>("diff_battery_0.json");
const comm = fixture<DiffResponse>("diff_comm_39.json");
const sciencezone = fixture<DiffResponse>("diff_sciencezone_39.json");

const N = 10;
const BASE = 9;

function countStates(diff: DiffResponse, state: number): number {
  return diff.matrix.cells.flat().filter((c) => c.s === state).length;
}

describe("difference panel", () => {
  let container: HTMLElement;
  let store: Store;

  beforeEach(() => {
    container = document.createElement("div");
    document.body.append(container);
    store = new Store(N);
    store.subscribe(() =>
      renderDwcPanel(container, diverged, { panel: "battery", baseIndex: BASE, store }),
    );
    renderDwcPanel(container, diverged, { panel: "battery", baseIndex: BASE, store });
  });

  it("shows only deltas by default", () => {
    const entries = container.querySelectorAll(".detail-entry");
    expect(entries.length).toBeGreaterThan(0);
    for (const entry of entries) {
      expect(entry.getAttribute("data-state")).toBe("3");
    }
    expect(entries.length).toBe(countStates(diverged, 3));
  });

  it("similarity toggle reveals agreeing entries", () => {
    container.querySelector<HTMLButtonElement>(".toggle-similarity")!.click();
    const agreeing = container.querySelectorAll(".detail-entry.agree");
    expect(agreeing.length).toBe(countStates(diverged, 2));
    // deltas are still there alongside
    expect(container.querySelectorAll(".detail-entry.delta").length).toBe(
      countStates(diverged, 3),
    );
  });

  it("difference toggle hides deltas", () => {
    container.querySelector<HTMLButtonElement>(".toggle-difference")!.click();
    expect(container.querySelectorAll(".detail-entry.delta").length).toBe(0);
  });

  it("toggles are involutive", () => {
    const before = container.innerHTML;
    for (const selector of [".toggle-similarity", ".toggle-difference"]) {
      container.querySelector<HTMLButtonElement>(selector)!.click();
      expect(container.innerHTML).not.toBe(before);
      container.querySelector<HTMLButtonElement>(selector)!.click();
      expect(container.innerHTML).toBe(before);
    }
  });

  it("toggles are independent per panel", () => {
    store.toggleSimilarity("comm");
    expect(store.get().toggles.comm.similarity).toBe(true);
    expect(store.get().toggles.battery.similarity).toBe(false);
  });

  it("renders full piles and an empty detail view for an in-sync tick", () => {
    const clean = document.createElement("div");
    renderDwcPanel(clean, inSync, { panel: "battery", baseIndex: BASE, store: new Store(N) });
    expect(clean.querySelectorAll(".detail-entry").length).toBe(0);
    for (const pile of clean.querySelectorAll<HTMLElement>(".dwc-pile")) {
      expect(pile.dataset.size).toBe(String(N - 1));
    }
    for (const hatch of clean.querySelectorAll<HTMLElement>(".dwc-hatch")) {
      expect(hatch.dataset.size).toBe("0");
    }
  });

  it("shows the complement-set stripe pattern on every diverged panel", () => {
    // the network split {0,6,7,8,9} vs {1,2,3,4,5}: in any diverged column,
    // the disagreeing believers are exactly the subject's complement group
    const groups = [new Set([0, 6, 7, 8, 9]), new Set([1, 2, 3, 4, 5])];
    for (const diff of [diverged, comm, sciencezone]) {
      const node = document.createElement("div");
      renderDwcPanel(node, diff, { panel: "battery", baseIndex: BASE, store: new Store(N) });
      let checked = 0;
      for (const column of node.querySelectorAll<HTMLElement>(".dwc-detail-column")) {
        const subject = Number(column.dataset.agent);
        const believers = [...column.querySelectorAll<HTMLElement>(".detail-entry")].map(
          (e) => Number(e.dataset.believer),
        );
        if (believers.length === 0) continue;
        const expected = groups[0].has(subject) ? groups[1] : groups[0];
        expect(new Set(believers)).toEqual(expected);
        checked++;
      }
      expect(checked).toBeGreaterThan(0);
    }
  });

  it("labels the base station column ST", () => {
    const egos = container.querySelectorAll(".dwc-ego");
    expect(egos[BASE].textContent).toBe("ST");
  });
});
