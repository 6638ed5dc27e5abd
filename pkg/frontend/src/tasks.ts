/**
 * Task abstraction: one row per rover (the base station owns no chains and
 * deliberately has no row), squares for the three nav steps and triangles
 * for the three sci steps, filled once the step completed.
 */

import { EventJson, agentLabel } from "./api.js";
import { Store } from "./state.js";

export interface TaskGlyphRow {
  agent: number;
  navDone: [boolean, boolean, boolean];
  sciDone: [boolean, boolean, boolean];
  eligible: boolean;
}

export function glyphRows(
  events: EventJson[],
  eligible: number[],
  nAgents: number,
  baseIndex: number,
): TaskGlyphRow[] {
  const done = new Set(
    events.filter((e) => e.completed).map((e) => `${e.task}`),
  );
  const rows: TaskGlyphRow[] = [];
  for (let agent = 0; agent < nAgents; agent++) {
    if (agent === baseIndex) continue;
    const steps = (chain: string): [boolean, boolean, boolean] => [
      done.has(`${agent}-${chain}-1`),
      done.has(`${agent}-${chain}-2`),
      done.has(`${agent}-${chain}-3`),
    ];
    rows.push({
      agent,
      navDone: steps("nav"),
      sciDone: steps("sci"),
      eligible: eligible.includes(agent),
    });
  }
  return rows;
}

export function renderTaskAbstraction(
  container: HTMLElement,
  events: EventJson[],
  eligible: number[],
  nAgents: number,
  baseIndex: number,
  store: Store,
): void {
  const state = store.get();
  container.textContent = "";
  container.classList.add("tasks-panel");
  for (const row of glyphRows(events, eligible, nAgents, baseIndex)) {
    const div = document.createElement("div");
    div.className = `task-row${state.highlightedAgents.has(row.agent) ? " selected" : ""}`;
    div.dataset.agent = String(row.agent);
    const label = document.createElement("span");
    label.className = "task-row-label";
    label.textContent = agentLabel(row.agent, baseIndex);
    label.addEventListener("click", () => store.toggleAgent(row.agent));
    div.append(label);
    row.navDone.forEach((filled, step) => {
      const glyph = document.createElement("span");
      glyph.className = `glyph nav${filled ? " filled" : ""}`;
      glyph.dataset.task = `${row.agent}-nav-${step + 1}`;
      div.append(glyph);
    });
    if (row.eligible) {
      row.sciDone.forEach((filled, step) => {
        const glyph = document.createElement("span");
        glyph.className = `glyph sci${filled ? " filled" : ""}`;
        glyph.dataset.task = `${row.agent}-sci-${step + 1}`;
        div.append(glyph);
      });
    }
    container.append(div);
  }
}
