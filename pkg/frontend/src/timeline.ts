/**
 * Execution timeline: one lane per agent, one bar per executed task with
 * its step number, a `*` marking relocated work, and a tooltip naming the
 * task, its start/end, and its owner. Highlighting a chain lights every
 * bar of that owner's tasks, including bars sitting on other agents' lanes.
 */

import { EventJson, agentLabel } from "./api.js";
import { Store } from "./state.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const LANE_HEIGHT = 22;
const BAR_HEIGHT = 16;

function svgEl(tag: string, attrs: Record<string, string>): SVGElement {
  const node = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  return node;
}

export function taskOwner(taskId: string): number {
  return Number(taskId.split("-")[0]);
}

export function renderTimeline(
  container: HTMLElement,
  events: EventJson[],
  nAgents: number,
  baseIndex: number,
  store: Store,
  width = 640,
): void {
  const state = store.get();
  const brush = state.timeBrush;
  const visible = brush
    ? events.filter((e) => e.start < brush[1] && e.end > brush[0])
    : events;
  const maxEnd = Math.max(1, ...events.map((e) => e.end));
  const sx = (t: number) => 40 + (t / maxEnd) * (width - 50);

  container.textContent = "";
  container.classList.add("timeline-panel");
  const svg = svgEl("svg", {
    viewBox: `0 0 ${width} ${nAgents * LANE_HEIGHT}`,
    class: "timeline-svg",
  });

  for (let agent = 0; agent < nAgents; agent++) {
    const y = agent * LANE_HEIGHT;
    const label = svgEl("text", {
      class: "lane-label",
      x: "4",
      y: String(y + BAR_HEIGHT - 2),
    });
    label.textContent = agentLabel(agent, baseIndex);
    svg.append(label);
  }

  for (const event of visible) {
    const owner = taskOwner(event.task);
    const y = event.executor * LANE_HEIGHT;
    const chainHighlight =
      state.highlightedChainOwner !== null && owner === state.highlightedChainOwner;
    const taskHighlight = state.highlightedTask === event.task;
    const cls = [
      "bar",
      event.task.includes("-sci-") ? "sci" : "nav",
      event.relocated ? "relocated" : "",
      event.completed ? "" : "incomplete",
      chainHighlight || taskHighlight ? "highlighted" : "",
    ]
      .filter(Boolean)
      .join(" ");
    const bar = svgEl("rect", {
      class: cls,
      "data-task": event.task,
      "data-owner": String(owner),
      "data-executor": String(event.executor),
      x: String(sx(event.start)),
      y: String(y + 2),
      width: String(Math.max(2, sx(event.end) - sx(event.start))),
      height: String(BAR_HEIGHT),
    });
    const tip = document.createElementNS(SVG_NS, "title");
    tip.textContent =
      `${event.task}  ${event.start.toFixed(1)}s - ${event.end.toFixed(1)}s  ` +
      `owner ${agentLabel(owner, baseIndex)}`;
    bar.append(tip);
    bar.addEventListener("click", () => store.highlightTask(event.task));
    svg.append(bar);

    const step = event.task.split("-")[2];
    const text = svgEl("text", {
      class: "bar-label",
      x: String(sx(event.start) + 3),
      y: String(y + BAR_HEIGHT - 2),
    });
    text.textContent = event.relocated ? `${step}*` : step;
    svg.append(text);
  }

  container.append(svg);
}
