// Single source of truth for the dashboard. All panels render from this
// state and mutate it only through Store methods, which enforce the view
// invariants:
//   - the selected event is always one of the currently listed events
//   - the local play range stays inside the selected event's bounds
//   - each color ramp ceiling stays inside that variable's data range
//   - the heatmap cursor and the replay share one frame index
// Server responses are applied latest-request-wins per panel, so a slow
// stale response can never overwrite a newer selection.

import { ApiClient, ApiError, RequestSlot } from "./api.js";
import type {
  ActionSummaryRow,
  Distribution,
  EventRow,
  EventStats,
  FramesPayload,
  FreezeRow,
  Meta,
  SeriesPayload,
  TimelineEvent,
} from "./types.js";

export const GRID_MAX_POINTS = 400;
export const REPLAY_MAX_POSES = 1500;

export interface ViewState {
  meta: Meta | null;
  actions: ActionSummaryRow[] | null;
  timeline: TimelineEvent[] | null;
  percentSitting: number | null;
  events: EventRow[] | null;
  allEvents: EventRow[] | null;
  selectedAction: string | null;
  activeFilters: string[];
  enabledVariables: string[];
  rampMax: Record<string, number>;
  rampBounds: Record<string, [number, number]>;
  distributions: Distribution[] | null;
  seriesByEvent: Record<string, SeriesPayload>;
  simplified: boolean;
  selectedEvent: string | null;
  stats: EventStats | null;
  frames: FramesPayload | null;
  freezes: FreezeRow[] | null;
  globalRange: [number, number];
  localRange: [number, number] | null;
  cursorFrame: number | null;
  playing: boolean;
  loading: boolean;
  error: string | null;
}

type Listener = (state: ViewState) => void;

function initialState(): ViewState {
  return {
    meta: null,
    actions: null,
    timeline: null,
    percentSitting: null,
    events: null,
    allEvents: null,
    selectedAction: null,
    activeFilters: [],
    enabledVariables: [],
    rampMax: {},
    rampBounds: {},
    distributions: null,
    seriesByEvent: {},
    simplified: true,
    selectedEvent: null,
    stats: null,
    frames: null,
    freezes: null,
    globalRange: [0, 0],
    localRange: null,
    cursorFrame: null,
    playing: false,
    loading: false,
    error: null,
  };
}

const clamp = (v: number, lo: number, hi: number) => Math.min(hi, Math.max(lo, v));

export class Store {
  readonly state: ViewState = initialState();

  private readonly client: ApiClient;
  private readonly listeners = new Set<Listener>();
  private readonly eventsSlot = new RequestSlot();
  private readonly gridSlot = new RequestSlot();
  private readonly detailSlot = new RequestSlot();
  private readonly framesSlot = new RequestSlot();
  // fractional playback position; cursorFrame is its rounded mirror
  private cursorFloat = 0;

  constructor(client: ApiClient) {
    this.client = client;
  }

  subscribe(fn: Listener): () => void {
    this.listeners.add(fn);
    return () => this.listeners.delete(fn);
  }

  private notify(): void {
    for (const fn of this.listeners) fn(this.state);
  }

  private fail(err: unknown): void {
    this.state.error =
      err instanceof ApiError ? `${err.code}: ${err.message}` : String(err);
    this.state.loading = false;
    this.notify();
  }

  /** Initial load: overview data, ramp bounds and the day's freeze list. */
  async load(): Promise<void> {
    const s = this.state;
    s.loading = true;
    s.error = null;
    this.notify();
    try {
      const [meta, summary, timeline, globals, events, dists, freezes] =
        await Promise.all([
          this.client.meta(),
          this.client.actionsSummary(),
          this.client.timeline(),
          this.client.globalStats(),
          this.client.events(),
          this.client.distributions(),
          this.client.freezes(),
        ]);
      s.meta = meta;
      s.actions = summary.actions;
      s.timeline = timeline.events;
      s.percentSitting = globals.percent_sitting;
      s.events = events.events;
      s.allEvents = events.events;
      s.freezes = freezes.freezes;
      s.distributions = dists.distributions;
      s.enabledVariables = [...meta.variables];
      s.globalRange = [0, meta.span_s];
      for (const d of dists.distributions) {
        const lo = d.edges[0];
        const hi = d.edges[d.edges.length - 1];
        s.rampBounds[d.variable] = [lo, hi];
        s.rampMax[d.variable] = hi;
      }
      s.loading = false;
      this.notify();
      await this.fetchGridSeries();
    } catch (err) {
      this.fail(err);
    }
  }

  async selectAction(action: string | null): Promise<void> {
    this.state.selectedAction = action;
    this.notify();
    await this.refreshEvents();
  }

  async toggleFilter(filter: string): Promise<void> {
    const active = this.state.activeFilters;
    const idx = active.indexOf(filter);
    if (idx >= 0) active.splice(idx, 1);
    else active.push(filter);
    this.notify();
    await this.refreshEvents();
  }

  async setFilters(filters: string[]): Promise<void> {
    this.state.activeFilters = [...filters];
    this.notify();
    await this.refreshEvents();
  }

  private async refreshEvents(): Promise<void> {
    const s = this.state;
    const token = this.eventsSlot.issue();
    try {
      const list = await this.client.events({
        action: s.selectedAction ?? undefined,
        filters: s.activeFilters,
      });
      if (!this.eventsSlot.isCurrent(token)) return;
      s.events = list.events;
      s.error = null;
      // selection invariant: a selected event must stay in the listed set
      if (s.selectedEvent && !list.events.some((e) => e.event_id === s.selectedEvent)) {
        this.clearSelection();
      }
      this.notify();
      await this.fetchGridSeries();
    } catch (err) {
      if (this.eventsSlot.isCurrent(token)) this.fail(err);
    }
  }

  private clearSelection(): void {
    const s = this.state;
    s.selectedEvent = null;
    s.stats = null;
    s.frames = null;
    s.localRange = null;
    s.cursorFrame = null;
    s.playing = false;
  }

  /** Fetch heatmap series for listed events that are not cached yet. */
  private async fetchGridSeries(): Promise<void> {
    const s = this.state;
    const token = this.gridSlot.issue();
    const wanted = (s.events ?? []).filter((e) => !(e.event_id in s.seriesByEvent));
    for (const row of wanted) {
      try {
        const payload = await this.client.eventSeries(row.event_id, {
          simplify: s.simplified,
          maxPoints: GRID_MAX_POINTS,
        });
        if (!this.gridSlot.isCurrent(token)) return;
        s.seriesByEvent[row.event_id] = payload;
        this.notify();
      } catch (err) {
        if (!this.gridSlot.isCurrent(token)) return;
        this.fail(err);
        return;
      }
    }
  }

  async selectEvent(eventId: string | null): Promise<void> {
    const s = this.state;
    if (eventId === null) {
      this.clearSelection();
      this.notify();
      return;
    }
    const row = (s.events ?? []).find((e) => e.event_id === eventId);
    if (!row) return; // not in the listed set, ignore
    s.selectedEvent = eventId;
    s.localRange = [row.start_frame, row.end_frame];
    this.cursorFloat = row.start_frame;
    s.cursorFrame = row.start_frame;
    s.playing = false;
    s.stats = null;
    s.frames = null;
    this.notify();

    const token = this.detailSlot.issue();
    const frameToken = this.framesSlot.issue();
    const span = row.end_frame - row.start_frame;
    const stride = Math.max(1, Math.ceil(span / REPLAY_MAX_POSES));
    try {
      const [stats, frames] = await Promise.all([
        this.client.eventStats(eventId),
        this.client.eventFrames(eventId, { stride }),
      ]);
      if (this.detailSlot.isCurrent(token)) {
        s.stats = stats;
        s.error = null;
      }
      if (this.framesSlot.isCurrent(frameToken)) s.frames = frames;
      this.notify();
    } catch (err) {
      if (this.detailSlot.isCurrent(token)) this.fail(err);
    }
  }

  /** Ramp ceiling is a pure display control: clamp and repaint, no fetch. */
  setRampMax(variable: string, value: number): void {
    const bounds = this.state.rampBounds[variable];
    if (!bounds) return;
    const floor = Math.min(bounds[0] + 1e-9, bounds[1]);
    this.state.rampMax[variable] = clamp(value, floor, bounds[1]);
    this.notify();
  }

  toggleVariable(variable: string): void {
    const s = this.state;
    if (!s.meta || !s.meta.variables.includes(variable)) return;
    const enabled = new Set(s.enabledVariables);
    if (enabled.has(variable)) enabled.delete(variable);
    else enabled.add(variable);
    // keep the meta ordering so heatmap rows never reshuffle
    s.enabledVariables = s.meta.variables.filter((v) => enabled.has(v));
    this.notify();
  }

  async toggleSimplified(): Promise<void> {
    const s = this.state;
    s.simplified = !s.simplified;
    s.seriesByEvent = {};
    this.notify();
    await this.fetchGridSeries();
  }

  setGlobalRange(range: [number, number]): void {
    const s = this.state;
    const span = s.meta?.span_s ?? 0;
    let lo = clamp(range[0], 0, span);
    let hi = clamp(range[1], 0, span);
    if (hi < lo) [lo, hi] = [hi, lo];
    s.globalRange = [lo, hi];
    this.notify();
  }

  setLocalRange(range: [number, number]): void {
    const s = this.state;
    const row = this.selectedRow();
    if (!row) return;
    // local window invariant: never extends past the event's own bounds
    let lo = clamp(range[0], row.start_frame, row.end_frame);
    let hi = clamp(range[1], row.start_frame, row.end_frame);
    if (hi < lo) [lo, hi] = [hi, lo];
    s.localRange = [lo, hi];
    if (s.cursorFrame !== null) this.scrubTo(s.cursorFrame);
    else this.notify();
  }

  selectedRow(): EventRow | null {
    const s = this.state;
    if (!s.selectedEvent) return null;
    return (s.events ?? []).find((e) => e.event_id === s.selectedEvent) ?? null;
  }

  /** Move the shared cursor; the replay view follows the same frame. */
  scrubTo(frame: number): void {
    const s = this.state;
    const range = s.localRange;
    if (!range) return;
    this.cursorFloat = clamp(frame, range[0], range[1]);
    s.cursorFrame = Math.round(this.cursorFloat);
    this.notify();
  }

  play(): void {
    if (!this.state.localRange) return;
    this.state.playing = true;
    this.notify();
  }

  pause(): void {
    this.state.playing = false;
    this.notify();
  }

  togglePlay(): void {
    if (this.state.playing) this.pause();
    else this.play();
  }

  playbackFps(): number {
    const s = this.state;
    const row = this.selectedRow();
    if (row && s.meta) {
      const seg = s.meta.segments[row.segment];
      if (seg) return seg.fps;
    }
    return s.frames?.fps ?? 30;
  }

  /** Advance playback by wall-clock dt, at the capture's own frame rate. */
  tick(dtMs: number): void {
    const s = this.state;
    if (!s.playing || !s.localRange) return;
    this.cursorFloat += (this.playbackFps() * dtMs) / 1000;
    if (this.cursorFloat >= s.localRange[1]) {
      this.cursorFloat = s.localRange[1];
      s.playing = false;
    }
    s.cursorFrame = Math.round(this.cursorFloat);
    this.notify();
  }
}
