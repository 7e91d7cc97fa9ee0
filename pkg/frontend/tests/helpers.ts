// In-memory stand-in for the service: a fetch function backed by a route
// table keyed on "pathname?sorted-query". Records every request so tests
// can assert on traffic, and supports gating a route to exercise the
// latest-request-wins behavior.

import type { FetchLike, FetchResponse } from "../src/api.js";
import * as fx from "./fixtures.js";
import { GRID_MAX_POINTS, REPLAY_MAX_POSES } from "../src/state.js";

export interface RouteError {
  __error: { status: number; code: string; message: string };
}

export type RouteTable = Record<string, unknown | RouteError>;

export interface MockApi {
  fetch: FetchLike;
  calls: string[];
  /** Hold responses for `key` until the returned release function runs. */
  gate(key: string): () => void;
}

export function normalizeUrl(url: string): string {
  const u = new URL(url, "http://mock");
  const params = [...new URLSearchParams(u.search).entries()];
  params.sort((a, b) => (a[0] + "=" + a[1] < b[0] + "=" + b[1] ? -1 : 1));
  const path = decodeURIComponent(u.pathname);
  if (params.length === 0) return path;
  return path + "?" + params.map(([k, v]) => `${k}=${v}`).join("&");
}

function isRouteError(value: unknown): value is RouteError {
  return typeof value === "object" && value !== null && "__error" in value;
}

export function mockApi(routes: RouteTable): MockApi {
  const calls: string[] = [];
  const gates = new Map<string, Promise<void>[]>();
  const releases = new Map<string, () => void>();

  const fetchFn: FetchLike = async (url: string): Promise<FetchResponse> => {
    const key = normalizeUrl(url);
    calls.push(key);
    const pending = gates.get(key);
    if (pending) await Promise.all(pending);
    if (!(key in routes)) {
      return {
        ok: false,
        status: 404,
        json: async () => ({
          error: { code: "not_found", message: `no route ${key}` },
        }),
      };
    }
    const value = routes[key];
    if (isRouteError(value)) {
      const { status, code, message } = value.__error;
      return { ok: false, status, json: async () => ({ error: { code, message } }) };
    }
    return {
      ok: true,
      status: 200,
      json: async () => structuredClone(value),
    };
  };

  return {
    fetch: fetchFn,
    calls,
    gate(key: string): () => void {
      let release!: () => void;
      const barrier = new Promise<void>((resolve) => {
        release = resolve;
      });
      const list = gates.get(key) ?? [];
      list.push(barrier);
      gates.set(key, list);
      releases.set(key, release);
      return release;
    },
  };
}

/** Full route table for the composite-day fixtures. */
export function compositeRoutes(): RouteTable {
  const routes: RouteTable = {
    "/api/v1/meta": fx.META,
    "/api/v1/actions/summary": fx.ACTIONS_SUMMARY,
    "/api/v1/actions/timeline": fx.TIMELINE,
    "/api/v1/stats/global": fx.GLOBAL_STATS,
    "/api/v1/events": fx.ALL_EVENTS,
    "/api/v1/events?action=walking": fx.WALKING_EVENTS,
    "/api/v1/events?action=walking&filter=potential_freezes": fx.FREEZE_WALKS,
    "/api/v1/distributions": fx.DISTRIBUTIONS,
    "/api/v1/freezes": fx.FREEZES,
  };
  for (const row of fx.ALL_EVENTS.events) {
    const id = row.event_id;
    routes[`/api/v1/events/${id}/series?max_points=${GRID_MAX_POINTS}&simplify=true`] =
      fx.binnedSeries(id);
    routes[`/api/v1/events/${id}/series?max_points=${GRID_MAX_POINTS}&simplify=false`] =
      fx.rawSeries(id);
    routes[`/api/v1/events/${id}/stats`] = fx.statsFor(id);
  }
  for (const row of fx.WALKING_EVENTS.events) {
    const stride = Math.max(1, Math.ceil((row.end_frame - row.start_frame) / REPLAY_MAX_POSES));
    routes[`/api/v1/events/${row.event_id}/frames?stride=${stride}`] = fx.framesFor(
      row.event_id,
      stride,
    );
    routes[`/api/v1/freezes?event=${row.event_id}`] = {
      freezes: fx.FREEZES.freezes.filter((f) => f.parent_event_id === row.event_id),
    };
  }
  return routes;
}

export function emptyRoutes(): RouteTable {
  return {
    "/api/v1/meta": fx.EMPTY_DATASET.meta,
    "/api/v1/actions/summary": fx.EMPTY_DATASET.summary,
    "/api/v1/actions/timeline": fx.EMPTY_DATASET.timeline,
    "/api/v1/stats/global": fx.EMPTY_DATASET.globals,
    "/api/v1/events": fx.EMPTY_DATASET.events,
    "/api/v1/distributions": fx.EMPTY_DATASET.distributions,
    "/api/v1/freezes": fx.EMPTY_DATASET.freezes,
  };
}
