/** Timeline rendering: lanes, relocation markers, tooltips, chain highlight. */

import { describe, expect, it } from "vitest";

import { EventJson, SnapshotJson, TraceJson } from "../src/api";
import { Store } from "../src/state";
import { renderTimeline, taskOwner } from "../src/timeline";
import { fixture } from "./helpers";

const snapshot = fixture<SnapshotJson>("snapshot_39.json");
const trace = fixture<TraceJson>("trace_6-sci.json");
const N = 10;
const BASE = 9;

function render(events: EventJson[], store = new Store(N)): HTMLElement {
  const container = document.createElement("div");
  renderTimeline(container, events, N, BASE, store);
  return container;
}

describe("timeline", () => {
  it("places each bar on its executor's lane with the owner in the tooltip", () => {
    const container = render(snapshot.events);
    const relocated = container.querySelector<SVGElement>(".bar.relocated");
    expect(relocated).not.toBeNull();
    const owner = Number(relocated!.getAttribute("data-owner"));
    const executor = Number(relocated!.getAttribute("data-executor"));
    expect(owner).not.toBe(executor);
    expect(relocated!.querySelector("title")!.textContent).toContain("owner");
  });

  it("marks relocated steps with a star", () => {
    const container = render(snapshot.events);
    const starred = [...container.querySelectorAll(".bar-label")].filter((l) =>
      l.textContent!.includes("*"),
    );
    expect(starred.length).toBe(
      container.querySelectorAll(".bar.relocated").length,
    );
  });

  it("highlights a whole chain across lanes", () => {
    const store = new Store(N);
    store.highlightChain(6);
    const container = render(snapshot.events, store);
    const highlighted = [...container.querySelectorAll<SVGElement>(".bar.highlighted")];
    expect(highlighted.length).toBeGreaterThan(0);
    expect(highlighted.every((b) => b.getAttribute("data-owner") === "6")).toBe(true);
    // the duplicated relocated step shows up on a lane that is not agent 6's
    const lanes = new Set(highlighted.map((b) => b.getAttribute("data-executor")));
    expect(lanes.size).toBeGreaterThan(1);
  });

  it("time brush hides bars outside the range", () => {
    const store = new Store(N);
    store.setTimeBrush([0, 10]);
    const container = render(snapshot.events, store);
    for (const bar of container.querySelectorAll<SVGElement>(".bar")) {
      const task = bar.getAttribute("data-task")!;
      const event = snapshot.events.find(
        (e) => e.task === task && String(e.executor) === bar.getAttribute("data-executor"),
      )!;
      expect(event.start).toBeLessThan(10);
    }
  });

  it("trace fixture contains the duplicated delivery the run produced", () => {
    const executors = new Set(
      trace.events.filter((e) => e.task === "6-sci-3").map((e) => e.executor),
    );
    expect(trace.owner).toBe(6);
    expect(executors.size).toBeGreaterThan(1);
    expect(taskOwner("6-sci-3")).toBe(6);
  });
});
