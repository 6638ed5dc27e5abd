/**
 * Shared selection state. Every panel renders from this store and writes
 * back through it, which is what keeps the views interlinked: a selection
 * made anywhere highlights the same agent everywhere.
 */

export type PanelId = "comm" | "battery" | "sciencezone";

export interface PanelToggles {
  similarity: boolean;
  difference: boolean;
}

export interface SelectionState {
  highlightedAgents: Set<number>;
  highlightedTask: string | null;
  highlightedChainOwner: number | null;
  dwcRowSelection: Set<number>;
  toggles: Record<PanelId, PanelToggles>;
  timeBrush: [number, number] | null;
  tick: number;
}

export function initialState(tick = 0): SelectionState {
  const toggles = (): PanelToggles => ({ similarity: false, difference: false });
  return {
    highlightedAgents: new Set(),
    highlightedTask: null,
    highlightedChainOwner: null,
    dwcRowSelection: new Set(),
    toggles: { comm: toggles(), battery: toggles(), sciencezone: toggles() },
    timeBrush: null,
    tick,
  };
}

type Listener = (state: SelectionState) => void;

export class Store {
  private state: SelectionState;
  private listeners: Listener[] = [];

  constructor(private readonly nAgents: number, tick = 0) {
    this.state = initialState(tick);
  }

  get(): SelectionState {
    return this.state;
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private commit(): void {
    for (const listener of this.listeners) listener(this.state);
  }

  private checkAgent(agent: number): void {
    if (!Number.isInteger(agent) || agent < 0 || agent >= this.nAgents) {
      throw new RangeError(`agent ${agent} is not part of this run`);
    }
  }

  setTick(tick: number): void {
    this.state.tick = tick;
    this.commit();
  }

  /** Clicking an agent anywhere selects it everywhere; clicking again clears. */
  toggleAgent(agent: number): void {
    this.checkAgent(agent);
    if (this.state.highlightedAgents.has(agent)) {
      this.state.highlightedAgents.delete(agent);
    } else {
      this.state.highlightedAgents.add(agent);
    }
    this.commit();
  }

  selectDwcRow(agent: number): void {
    this.checkAgent(agent);
    if (this.state.dwcRowSelection.has(agent)) {
      this.state.dwcRowSelection.delete(agent);
    } else {
      this.state.dwcRowSelection.add(agent);
    }
    this.commit();
  }

  highlightTask(taskId: string | null): void {
    this.state.highlightedTask = taskId;
    this.commit();
  }

  highlightChain(owner: number | null): void {
    if (owner !== null) this.checkAgent(owner);
    this.state.highlightedChainOwner = owner;
    this.commit();
  }

  /** Both toggles are plain boolean flips, so toggling twice always
   *  restores the previous render. */
  toggleSimilarity(panel: PanelId): void {
    this.state.toggles[panel].similarity = !this.state.toggles[panel].similarity;
    this.commit();
  }

  toggleDifference(panel: PanelId): void {
    this.state.toggles[panel].difference = !this.state.toggles[panel].difference;
    this.commit();
  }

  setTimeBrush(range: [number, number] | null): void {
    this.state.timeBrush = range;
    this.commit();
  }

  clearSelections(): void {
    this.state.highlightedAgents.clear();
    this.state.dwcRowSelection.clear();
    this.state.highlightedTask = null;
    this.state.highlightedChainOwner = null;
    this.commit();
  }
}
