/**
 * App shell: loads run metadata, owns the tick scrubber, and re-renders
 * every panel from the latest API responses. Fetches are coalesced per
 * tick change: responses for a tick the user already scrubbed past are
 * dropped.
 */

import { ApiClient, DiffResponse, MetaJson, SnapshotJson } from "./api.js";
import { renderDwcPanel } from "./dwc.js";
import { renderGraph } from "./graph.js";
import { renderScatterplot } from "./scatterplot.js";
import { PanelId, Store } from "./state.js";
import { renderTaskAbstraction } from "./tasks.js";
import { renderTimeline } from "./timeline.js";

const PANELS: PanelId[] = ["comm", "battery", "sciencezone"];

interface TickData {
  snapshot: SnapshotJson;
  diffs: Record<PanelId, DiffResponse>;
}

export class App {
  private store!: Store;
  private meta!: MetaJson;
  private baseIndex = 0;
  private current: TickData | null = null;
  private requestedTick = -1;

  constructor(
    private readonly api: ApiClient,
    private readonly root: HTMLElement,
  ) {}

  async start(): Promise<void> {
    this.meta = await this.api.meta();
    this.baseIndex = this.meta.config.base_index ?? this.meta.config.n_agents - 1;
    this.store = new Store(this.meta.config.n_agents, this.meta.ticks.first);
    this.buildShell();
    this.store.subscribe(() => this.renderPanels());
    await this.loadTick(this.meta.ticks.first);
  }

  private buildShell(): void {
    this.root.textContent = "";
    const scrubber = document.createElement("input");
    scrubber.type = "range";
    scrubber.className = "tick-scrubber";
    scrubber.min = String(this.meta.ticks.first);
    scrubber.max = String(this.meta.ticks.last);
    scrubber.value = String(this.meta.ticks.first);
    scrubber.addEventListener("input", () => {
      void this.loadTick(Number(scrubber.value));
    });
    const tickLabel = document.createElement("span");
    tickLabel.className = "tick-label";
    const banner = document.createElement("div");
    banner.className = "sync-banner";
    const header = document.createElement("header");
    header.append(scrubber, tickLabel, banner);
    this.root.append(header);
    for (const id of ["graph", "scatter", "tasks", "timeline", ...PANELS]) {
      const panel = document.createElement("section");
      panel.dataset.panel = id;
      this.root.append(panel);
    }
    const error = document.createElement("div");
    error.className = "error-state";
    error.hidden = true;
    this.root.append(error);
  }

  async loadTick(tick: number): Promise<void> {
    this.requestedTick = tick;
    try {
      const [snapshot, comm, battery, sciencezone] = await Promise.all([
        this.api.snapshot(tick),
        this.api.diff("comm", tick),
        this.api.diff("battery", tick),
        this.api.diff("sciencezone", tick),
      ]);
      if (this.requestedTick !== tick) return; // user scrubbed past this tick
      this.current = { snapshot, diffs: { comm, battery, sciencezone } };
      this.setError(null);
      this.store.setTick(tick);
    } catch (err) {
      if (this.requestedTick !== tick) return;
      this.current = null; // no stale data behind an error banner
      this.setError(err instanceof Error ? err.message : String(err));
      this.renderPanels();
    }
  }

  private setError(message: string | null): void {
    const node = this.root.querySelector<HTMLElement>(".error-state");
    if (!node) return;
    node.hidden = message === null;
    node.textContent = message ?? "";
  }

  private panel(id: string): HTMLElement {
    return this.root.querySelector<HTMLElement>(`[data-panel="${id}"]`)!;
  }

  renderPanels(): void {
    if (!this.current) return;
    const { snapshot, diffs } = this.current;
    const label = this.root.querySelector<HTMLElement>(".tick-label");
    if (label) label.textContent = `tick ${snapshot.tick}`;
    const banner = this.root.querySelector<HTMLElement>(".sync-banner");
    if (banner) {
      banner.textContent = snapshot.summary.sync_warning
        ? "WORLDVIEWS OUT OF SYNC"
        : "in sync";
      banner.classList.toggle("warning", snapshot.summary.sync_warning);
    }
    renderGraph(this.panel("graph"), snapshot, {
      baseIndex: this.baseIndex,
      mapWidth: this.meta.config.map.width,
      mapHeight: this.meta.config.map.height,
      store: this.store,
    });
    renderScatterplot(this.panel("scatter"), snapshot, this.baseIndex, this.store);
    renderTaskAbstraction(
      this.panel("tasks"),
      snapshot.events,
      snapshot.eligible,
      this.meta.config.n_agents,
      this.baseIndex,
      this.store,
    );
    renderTimeline(
      this.panel("timeline"),
      snapshot.events,
      this.meta.config.n_agents,
      this.baseIndex,
      this.store,
    );
    for (const id of PANELS) {
      renderDwcPanel(this.panel(id), diffs[id], {
        panel: id,
        baseIndex: this.baseIndex,
        store: this.store,
      });
    }
  }
}

export function mount(root: HTMLElement, baseUrl = ""): App {
  const app = new App(new ApiClient(baseUrl), root);
  void app.start();
  return app;
}

declare const window: { document?: Document } & Record<string, unknown>;
if (typeof window !== "undefined" && window.document) {
  const root = window.document.getElementById("app");
  if (root) mount(root);
}
