// Thin typed client over the service HTTP API. Every method is one GET;
// callers own caching and stale-response policy (see RequestSlot).

import type {
  ActionsSummary,
  ApiErrorBody,
  Distributions,
  EventList,
  EventStats,
  FramesPayload,
  Freezes,
  GlobalStats,
  Meta,
  SeriesPayload,
  Timeline,
} from "./types.js";

/** Minimal fetch surface so tests can stub the transport without DOM types. */
export interface FetchResponse {
  ok: boolean;
  status: number;
  json(): Promise<unknown>;
}

export type FetchLike = (url: string) => Promise<FetchResponse>;

export class ApiError extends Error {
  readonly code: string;
  readonly status: number;

  constructor(code: string, message: string, status: number) {
    super(message);
    this.name = "ApiError";
    this.code = code;
    this.status = status;
  }
}

export interface EventQuery {
  action?: string;
  filters?: string[];
}

export interface SeriesQuery {
  vars?: string[];
  simplify?: boolean;
  maxPoints?: number;
  scope?: string;
}

export interface FramesQuery {
  from?: number;
  to?: number;
  stride?: number;
}

export class ApiClient {
  private readonly base: string;
  private readonly fetchFn: FetchLike;

  constructor(base = "/api/v1", fetchFn: FetchLike = (url) => fetch(url)) {
    this.base = base.replace(/\/$/, "");
    this.fetchFn = fetchFn;
  }

  private async get<T>(path: string, params?: [string, string][]): Promise<T> {
    let url = this.base + path;
    if (params && params.length > 0) {
      const qs = new URLSearchParams(params);
      url += "?" + qs.toString();
    }
    const res = await this.fetchFn(url);
    if (!res.ok) {
      const body = (await res.json().catch(() => null)) as ApiErrorBody | null;
      const code = body?.error?.code ?? "http_error";
      const message = body?.error?.message ?? `request failed with ${res.status}`;
      throw new ApiError(code, message, res.status);
    }
    return (await res.json()) as T;
  }

  meta(): Promise<Meta> {
    return this.get("/meta");
  }

  actionsSummary(): Promise<ActionsSummary> {
    return this.get("/actions/summary");
  }

  timeline(): Promise<Timeline> {
    return this.get("/actions/timeline");
  }

  events(query: EventQuery = {}): Promise<EventList> {
    const params: [string, string][] = [];
    if (query.action) params.push(["action", query.action]);
    for (const f of query.filters ?? []) params.push(["filter", f]);
    return this.get("/events", params);
  }

  eventSeries(eventId: string, query: SeriesQuery = {}): Promise<SeriesPayload> {
    const params: [string, string][] = [];
    if (query.vars && query.vars.length > 0) params.push(["vars", query.vars.join(",")]);
    if (query.simplify !== undefined) params.push(["simplify", String(query.simplify)]);
    if (query.maxPoints !== undefined) params.push(["max_points", String(query.maxPoints)]);
    if (query.scope) params.push(["scope", query.scope]);
    return this.get(`/events/${encodeURIComponent(eventId)}/series`, params);
  }

  eventStats(eventId: string): Promise<EventStats> {
    return this.get(`/events/${encodeURIComponent(eventId)}/stats`);
  }

  eventFrames(eventId: string, query: FramesQuery = {}): Promise<FramesPayload> {
    const params: [string, string][] = [];
    if (query.from !== undefined) params.push(["from", String(query.from)]);
    if (query.to !== undefined) params.push(["to", String(query.to)]);
    if (query.stride !== undefined) params.push(["stride", String(query.stride)]);
    return this.get(`/events/${encodeURIComponent(eventId)}/frames`, params);
  }

  globalStats(): Promise<GlobalStats> {
    return this.get("/stats/global");
  }

  distributions(vars?: string[], action?: string): Promise<Distributions> {
    const params: [string, string][] = [];
    if (vars && vars.length > 0) params.push(["vars", vars.join(",")]);
    if (action) params.push(["action", action]);
    return this.get("/distributions", params);
  }

  freezes(eventId?: string): Promise<Freezes> {
    const params: [string, string][] = [];
    if (eventId) params.push(["event", eventId]);
    return this.get("/freezes", params);
  }
}

/**
 * Latest-request-wins guard. Each panel keeps one slot; when several
 * requests race, only the most recently issued one is allowed to land.
 */
export class RequestSlot {
  private seq = 0;

  /** Returns a token for a new request and invalidates all older ones. */
  issue(): number {
    return ++this.seq;
  }

  /** True while `token` is still the newest issued request. */
  isCurrent(token: number): boolean {
    return token === this.seq;
  }
}
