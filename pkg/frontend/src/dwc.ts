/**
 * Worldview difference panel for one monitored attribute.
 *
 * Layout, top to bottom: ego row (every agent's own value, colored by the
 * attribute's colormap), a similarity pile per column sized by how many
 * agents agree, a hatched difference bar sized by how many disagree, the
 * agreement fraction, and the detail list of disagreeing entries below
 * the delta line.
 */

import { DiffResponse, agentLabel, formatValue } from "./api.js";
import { PanelId, PanelToggles, Store } from "./state.js";

const COLORMAP_CLASS: Record<string, string> = {
  comm: "cmap-bandwidth", // purple-to-red sequential
  battery: "cmap-ordinal", // orange sequential
  cpu: "cmap-ordinal",
  sciencezone: "cmap-boolean", // two shades of teal
};

export interface DwcOptions {
  panel: PanelId;
  baseIndex: number;
  store: Store;
}

function el(tag: string, className: string, text?: string): HTMLElement {
  const node = document.createElement(tag);
  node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function renderDwcPanel(
  container: HTMLElement,
  diff: DiffResponse,
  options: DwcOptions,
): void {
  const { panel, baseIndex, store } = options;
  const toggles: PanelToggles = store.get().toggles[panel];
  const selected = store.get().dwcRowSelection;
  const n = diff.matrix.cells.length;
  container.textContent = "";
  container.classList.add("dwc-panel");
  container.dataset.attribute = diff.attribute;

  const controls = el("div", "dwc-controls");
  const simButton = el("button", "toggle-similarity", "Similarity");
  simButton.classList.toggle("active", toggles.similarity);
  simButton.addEventListener("click", () => store.toggleSimilarity(panel));
  const difButton = el("button", "toggle-difference", "Difference");
  difButton.classList.toggle("active", toggles.difference);
  difButton.addEventListener("click", () => store.toggleDifference(panel));
  controls.append(simButton, difButton);
  container.append(controls);

  const grid = el("div", "dwc-grid");
  grid.style.gridTemplateColumns = `repeat(${n}, 1fr)`;

  // ego row: the diagonal values, one per subject column
  for (let j = 0; j < n; j++) {
    const cell = diff.matrix.cells[j][j];
    const ego = el("div", `dwc-ego ${COLORMAP_CLASS[diff.attribute] ?? ""}`);
    ego.dataset.agent = String(j);
    ego.textContent = agentLabel(j, baseIndex);
    ego.classList.toggle("selected", selected.has(j));
    ego.title = cell.v ? formatValue(cell.v, j) : "";
    ego.addEventListener("click", () => store.selectDwcRow(j));
    grid.append(ego);
  }

  // similarity piles and hatched difference bars, scaled per column
  for (let j = 0; j < n; j++) {
    const col = diff.columns[j];
    const pile = el("div", "dwc-pile");
    pile.dataset.size = String(col.similarity_sum);
    pile.style.height = `${4 * col.similarity_sum}px`;
    grid.append(pile);
  }
  for (let j = 0; j < n; j++) {
    const col = diff.columns[j];
    const hatch = el("div", "dwc-hatch");
    hatch.dataset.size = String(col.difference_sum);
    hatch.style.height = `${4 * col.difference_sum}px`;
    grid.append(hatch);
  }
  for (let j = 0; j < n; j++) {
    const col = diff.columns[j];
    const fraction = el(
      "div",
      "dwc-fraction",
      n > 1 ? `${col.similarity_sum}/${n - 1}` : "",
    );
    grid.append(fraction);
  }
  container.append(grid);

  const delta = el("div", "dwc-delta-line");
  container.append(delta);

  // detail view: per column, the entries worth reading individually.
  // Deltas show by default; the Difference toggle hides them, and the
  // Similarity toggle additionally reveals the agreeing entries.
  const detail = el("div", "dwc-detail");
  detail.style.gridTemplateColumns = `repeat(${n}, 1fr)`;
  for (let j = 0; j < n; j++) {
    const column = el("div", "dwc-detail-column");
    column.dataset.agent = String(j);
    for (let i = 0; i < n; i++) {
      if (i === j) continue;
      const cell = diff.matrix.cells[i][j];
      const isDelta = cell.s === 3;
      if (isDelta && toggles.difference) continue;
      if (!isDelta && !toggles.similarity) continue;
      const entry = el("div", isDelta ? "detail-entry delta" : "detail-entry agree");
      entry.dataset.believer = String(i);
      entry.dataset.state = String(cell.s);
      const text = isDelta && cell.v ? formatValue(cell.v, j) : "agrees";
      entry.textContent = `${agentLabel(i, baseIndex)}: ${text}`;
      column.append(entry);
    }
    detail.append(column);
  }
  container.append(detail);
}
