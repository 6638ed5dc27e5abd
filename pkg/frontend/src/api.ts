/**
 * Typed client for the run-log HTTP API. The viewer derives everything it
 * renders from these responses; nothing is recomputed client-side.
 */

export type ValueJson =
  | { t: "loc"; x: number; y: number }
  | { t: "sz"; flag: boolean }
  | { t: "bt"; level: number }
  | { t: "cpu"; level: number }
  | { t: "act"; events: string[] }
  | { t: "cn"; bw: number[]; self: number };

export interface DiffCellJson {
  s: 1 | 2 | 3;
  v?: ValueJson;
}

export interface ColumnSummaryJson {
  column: number;
  similarity_sum: number;
  difference_sum: number;
}

export interface DiffResponse {
  tick: number;
  attribute: string;
  matrix: { kind: string; cells: DiffCellJson[][] };
  columns: ColumnSummaryJson[];
}

export interface TrueStateJson {
  id: number;
  base: boolean;
  x: number;
  y: number;
  battery: number;
  cpu: number;
  radio: boolean;
}

export interface ZoneJson {
  kind: "science" | "comm_cutoff";
  x0: number;
  y0: number;
  x1: number;
  y1: number;
}

export interface EventJson {
  task: string;
  executor: number;
  start: number;
  end: number;
  relocated: boolean;
  completed: boolean;
}

export interface SummaryJson {
  fractions: number[] | null;
  sync_warning: boolean;
  mini_dwc: Record<string, [number, number][]>;
  report: {
    in_sync: boolean;
    cells: Record<string, number[][]>;
    contrarian_sets: Record<string, number[][]>;
  };
}

export interface SnapshotJson {
  tick: number;
  true_states: TrueStateJson[];
  links: number[][];
  events: EventJson[];
  eligible: number[];
  avg_cpu: number[];
  zones: ZoneJson[];
  summary: SummaryJson;
}

export interface MetaJson {
  schema: string;
  config: {
    n_agents: number;
    tick_seconds: number;
    base_index: number | null;
    map: { width: number; height: number; zones: ZoneJson[] };
  };
  ticks: { first: number; last: number; count: number };
}

export interface TraceJson {
  owner: number;
  chain: string;
  events: EventJson[];
}

export class ApiError extends Error {
  constructor(readonly status: number, readonly code: string, message: string) {
    super(message);
  }
}

export class ApiClient {
  constructor(private readonly baseUrl: string = "") {}

  private async get<T>(path: string): Promise<T> {
    const response = await fetch(this.baseUrl + path);
    const body = await response.json();
    if (!response.ok) {
      throw new ApiError(response.status, body.code ?? "error", body.message ?? path);
    }
    return body as T;
  }

  meta(): Promise<MetaJson> {
    return this.get("/api/meta");
  }

  snapshot(tick: number): Promise<SnapshotJson> {
    return this.get(`/api/snapshot/${tick}`);
  }

  diff(attribute: string, tick: number): Promise<DiffResponse> {
    return this.get(`/api/diff/${attribute}/${tick}`);
  }

  summary(tick: number): Promise<SummaryJson & { tick: number }> {
    return this.get(`/api/summary/${tick}`);
  }

  timeline(fromTick?: number, toTick?: number): Promise<{ events: EventJson[] }> {
    const params = new URLSearchParams();
    if (fromTick !== undefined) params.set("from", String(fromTick));
    if (toTick !== undefined) params.set("to", String(toTick));
    const query = params.toString();
    return this.get(`/api/timeline${query ? "?" + query : ""}`);
  }

  trace(taskId: string): Promise<TraceJson> {
    return this.get(`/api/trace/${taskId}`);
  }
}

/** Base station is rendered as "ST" everywhere. */
export function agentLabel(index: number, baseIndex: number): string {
  return index === baseIndex ? "ST" : String(index);
}

/** Compact cell text for presumed values in the Detail View. */
export function formatValue(value: ValueJson, subject: number): string {
  switch (value.t) {
    case "bt":
    case "cpu":
      return String(value.level);
    case "sz":
      return value.flag ? "T" : "F";
    case "loc":
      return `(${value.x.toFixed(1)},${value.y.toFixed(1)})`;
    case "act":
      return `${value.events.length} events`;
    case "cn":
      return value.bw.map((b, k) => (k === value.self ? "-" : String(b))).join(",");
  }
}
