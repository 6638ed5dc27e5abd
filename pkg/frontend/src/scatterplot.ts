/**
 * Battery vs average-CPU scatterplot with quadrant coloring and the grey
 * neutral band around the center.
 */

import { SnapshotJson, agentLabel } from "./api.js";
import { Store } from "./state.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const NEUTRAL_BAND = 10;

export type Quadrant = "lazy" | "overworked" | "highpower" | "depleted" | "neutral";

export function classifyQuadrant(avgCpu: number, battery: number): Quadrant {
  if (Math.abs(avgCpu - 50) <= NEUTRAL_BAND && Math.abs(battery - 50) <= NEUTRAL_BAND) {
    return "neutral";
  }
  if (avgCpu > 50) return battery > 50 ? "highpower" : "overworked";
  return battery > 50 ? "lazy" : "depleted";
}

function svgEl(tag: string, attrs: Record<string, string>): SVGElement {
  const node = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  return node;
}

export function renderScatterplot(
  container: HTMLElement,
  snapshot: SnapshotJson,
  baseIndex: number,
  store: Store,
  size = 240,
): void {
  const state = store.get();
  container.textContent = "";
  container.classList.add("scatter-panel");
  const svg = svgEl("svg", { viewBox: `0 0 ${size} ${size}`, class: "scatter-svg" });
  const scale = (v: number) => (v / 100) * size;

  // grey neutral band around the 50/50 center
  svg.append(
    svgEl("rect", {
      class: "neutral-band",
      x: String(scale(50 - NEUTRAL_BAND)),
      y: String(size - scale(50 + NEUTRAL_BAND)),
      width: String(scale(2 * NEUTRAL_BAND)),
      height: String(scale(2 * NEUTRAL_BAND)),
    }),
  );
  svg.append(
    svgEl("circle", {
      class: "center-dot",
      cx: String(scale(50)),
      cy: String(size - scale(50)),
      r: "3",
    }),
  );

  for (const agent of snapshot.true_states) {
    const avgCpu = snapshot.avg_cpu[agent.id];
    const quadrant = classifyQuadrant(avgCpu, agent.battery);
    const selected = state.highlightedAgents.has(agent.id);
    const dot = svgEl("circle", {
      class: `scatter-dot ${quadrant}${selected ? " selected" : ""}`,
      "data-agent": String(agent.id),
      "data-quadrant": quadrant,
      cx: String(scale(avgCpu)),
      cy: String(size - scale(agent.battery)),
      r: selected ? "6" : "4",
    });
    const tip = document.createElementNS(SVG_NS, "title");
    tip.textContent = `${agentLabel(agent.id, baseIndex)}  cpu ${avgCpu.toFixed(0)}%  battery ${agent.battery}%`;
    dot.append(tip);
    dot.addEventListener("click", () => store.toggleAgent(agent.id));
    svg.append(dot);
  }
  container.append(svg);
}
