/**
 * Communication graph over the map: agents at their true positions, zones
 * as rectangles, links as edges whose width encodes bandwidth. Selecting
 * an agent in the worldview panel turns its incident edges pink and dims
 * the rest; the base station gets a distinct square glyph.
 */

import { SnapshotJson, agentLabel } from "./api.js";
import { Store } from "./state.js";

const SVG_NS = "http://www.w3.org/2000/svg";

export interface GraphOptions {
  baseIndex: number;
  mapWidth: number;
  mapHeight: number;
  store: Store;
  size?: number;
}

function svgEl(tag: string, attrs: Record<string, string>): SVGElement {
  const node = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  return node;
}

export function renderGraph(
  container: HTMLElement,
  snapshot: SnapshotJson,
  options: GraphOptions,
): void {
  const { baseIndex, mapWidth, mapHeight, store } = options;
  const size = options.size ?? 400;
  const state = store.get();
  const n = snapshot.true_states.length;
  const sx = (x: number) => (x / mapWidth) * size;
  const sy = (y: number) => size - (y / mapHeight) * size;

  container.textContent = "";
  container.classList.add("graph-panel");
  const svg = svgEl("svg", {
    viewBox: `0 0 ${size} ${size}`,
    class: "graph-svg",
  });

  for (const zone of snapshot.zones) {
    svg.append(
      svgEl("rect", {
        class: `zone zone-${zone.kind}`,
        x: String(sx(zone.x0)),
        y: String(sy(zone.y1)),
        width: String(sx(zone.x1) - sx(zone.x0)),
        height: String(sy(zone.y0) - sy(zone.y1)),
      }),
    );
  }

  const highlightSet = state.dwcRowSelection;
  for (let i = 0; i < n; i++) {
    for (let j = i + 1; j < n; j++) {
      const bw = snapshot.links[i][j];
      if (bw <= 0) continue;
      const a = snapshot.true_states[i];
      const b = snapshot.true_states[j];
      const incident = highlightSet.has(i) || highlightSet.has(j);
      const edgeClass =
        highlightSet.size === 0 ? "edge" : incident ? "edge pink" : "edge dim";
      const edge = svgEl("line", {
        class: edgeClass,
        "data-from": String(i),
        "data-to": String(j),
        "data-bandwidth": String(bw),
        x1: String(sx(a.x)),
        y1: String(sy(a.y)),
        x2: String(sx(b.x)),
        y2: String(sy(b.y)),
        "stroke-width": String(Math.max(1, bw / 2)),
      });
      const tip = document.createElementNS(SVG_NS, "title");
      tip.textContent = `${agentLabel(i, baseIndex)} - ${agentLabel(j, baseIndex)}: bandwidth ${bw}`;
      edge.append(tip);
      svg.append(edge);
    }
  }

  for (const agent of snapshot.true_states) {
    const selected = state.highlightedAgents.has(agent.id);
    const cls = `node${agent.base ? " base" : ""}${selected ? " selected" : ""}${agent.radio ? "" : " radio-off"}`;
    const x = sx(agent.x);
    const y = sy(agent.y);
    const glyph = agent.base
      ? svgEl("rect", {
          class: cls,
          "data-agent": String(agent.id),
          x: String(x - 7),
          y: String(y - 7),
          width: "14",
          height: "14",
        })
      : svgEl("circle", {
          class: cls,
          "data-agent": String(agent.id),
          cx: String(x),
          cy: String(y),
          r: "7",
        });
    const tip = document.createElementNS(SVG_NS, "title");
    tip.textContent =
      `${agentLabel(agent.id, baseIndex)}  battery ${agent.battery}%  ` +
      `cpu ${agent.cpu}%  (${agent.x.toFixed(1)}, ${agent.y.toFixed(1)})`;
    glyph.append(tip);
    glyph.addEventListener("click", () => store.toggleAgent(agent.id));
    svg.append(glyph);

    const label = svgEl("text", {
      class: "node-label",
      x: String(x),
      y: String(y - 10),
      "text-anchor": "middle",
    });
    label.textContent = agentLabel(agent.id, baseIndex);
    svg.append(label);
  }

  container.append(svg);
}
