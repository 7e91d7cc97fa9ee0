// Pure projections from ViewState to render-ready structures. Renderers
// map these one-to-one onto DOM and canvas; tests assert on them directly.
// Nothing here computes analytics: values, durations and labels are taken
// from server payloads as-is, only scaled into pixel fractions.

import { actionColor, GAP_COLOR, heatColor, isLeftVariable, variableColor } from "./color.js";
import { actionLabel, formatDuration, formatPercent, weightShiftLabel } from "./format.js";
import { isBinned } from "./types.js";
import type { EventRow, FramePose, SeriesPayload, VectorSample } from "./types.js";
import type { ViewState } from "./state.js";

export interface OverviewBar {
  action: string;
  label: string;
  color: string;
  totalS: number;
  durationText: string;
  eventCount: number;
  widthFrac: number;
  selected: boolean;
}

export interface TimelineBlock {
  eventId: string;
  action: string;
  color: string;
  lane: number;
  x0: number;
  x1: number;
  selected: boolean;
}

export interface OverviewModel {
  empty: boolean;
  emptyMessage: string;
  datasetId: string;
  spanText: string;
  percentSittingText: string | null;
  bars: OverviewBar[];
  blocks: TimelineBlock[];
  laneCount: number;
}

const EMPTY_MESSAGE = "No recorded activity in this dataset.";

export function overviewModel(state: ViewState): OverviewModel {
  const actions = state.actions ?? [];
  const empty = actions.length === 0;
  const maxTotal = actions.reduce((m, a) => Math.max(m, a.total_s), 0);
  const bars: OverviewBar[] = actions.map((a) => ({
    action: a.action,
    label: actionLabel(a.action),
    color: actionColor(a.action),
    totalS: a.total_s,
    durationText: formatDuration(a.total_s),
    eventCount: a.events,
    widthFrac: maxTotal > 0 ? a.total_s / maxTotal : 0,
    selected: state.selectedAction === a.action,
  }));

  const { blocks, laneCount } = timelineBlocks(state);
  return {
    empty,
    emptyMessage: EMPTY_MESSAGE,
    datasetId: state.meta?.dataset_id ?? "",
    spanText: formatDuration(state.meta?.span_s ?? 0),
    percentSittingText:
      state.percentSitting !== null ? formatPercent(state.percentSitting) : null,
    bars,
    blocks,
    laneCount,
  };
}

/** Seconds from the start of the day to a frame of a given segment. */
export function dayOffsetS(state: ViewState, segment: number, frame: number): number {
  const segments = state.meta?.segments ?? [];
  let offset = 0;
  for (let i = 0; i < segment && i < segments.length; i++) {
    offset += segments[i].duration_s;
  }
  const fps = segments[segment]?.fps ?? 30;
  return offset + frame / fps;
}

function timelineBlocks(state: ViewState): { blocks: TimelineBlock[]; laneCount: number } {
  const events = state.timeline ?? [];
  const [lo, hi] = state.globalRange;
  const width = hi - lo;
  if (events.length === 0 || width <= 0) return { blocks: [], laneCount: 1 };

  // greedy lane packing so simultaneous actions stack instead of overlap
  const laneEnds: number[] = [];
  const blocks: TimelineBlock[] = [];
  const listed = new Set((state.events ?? []).map((e) => e.event_id));
  for (const ev of events) {
    const start = dayOffsetS(state, ev.segment, ev.start_frame);
    const end = dayOffsetS(state, ev.segment, ev.end_frame);
    if (end <= lo || start >= hi) continue;
    let lane = laneEnds.findIndex((t) => t <= start + 1e-9);
    if (lane === -1) {
      lane = laneEnds.length;
      laneEnds.push(end);
    } else {
      laneEnds[lane] = end;
    }
    blocks.push({
      eventId: ev.event_id,
      action: ev.action,
      color: actionColor(ev.action),
      lane,
      x0: Math.max(0, (start - lo) / width),
      x1: Math.min(1, (end - lo) / width),
      selected: listed.has(ev.event_id) && state.selectedAction !== null,
    });
  }
  return { blocks, laneCount: Math.max(1, laneEnds.length) };
}

export interface HeatCell {
  x0: number;
  x1: number;
  color: string;
  outlier: boolean;
  gap: boolean;
}

export interface HeatRowModel {
  variable: string;
  color: string;
  cells: HeatCell[];
}

export interface FreezeSpan {
  x0: number;
  x1: number;
  durationText: string;
}

export interface EventHeatModel {
  eventId: string;
  action: string;
  color: string;
  title: string;
  durationText: string;
  freezeCount: number;
  loaded: boolean;
  rows: HeatRowModel[];
  freezeSpans: FreezeSpan[];
  selected: boolean;
}

export interface HeatmapGridModel {
  events: EventHeatModel[];
  simplified: boolean;
  message: string | null;
}

function rowCells(
  payload: SeriesPayload,
  variable: string,
  rampMax: number,
  window?: [number, number],
): HeatCell[] {
  const lo = window ? window[0] : payload.start_frame;
  const hi = window ? window[1] : payload.end_frame;
  const span = hi - lo;
  if (span <= 0) return [];
  const entry = payload.series.find((s) => s.variable === variable);
  if (!entry) return [];
  const cells: HeatCell[] = [];
  const push = (a: number, b: number, value: number | null, outlier: boolean) => {
    const x0 = Math.max(0, (a - lo) / span);
    const x1 = Math.min(1, (b - lo) / span);
    if (x1 <= x0) return;
    cells.push({
      x0,
      x1,
      color: value === null ? GAP_COLOR : heatColor(variable, value, rampMax),
      outlier,
      gap: value === null,
    });
  };
  if (isBinned(entry)) {
    for (const [a, b, value, outlier] of entry.bins) push(a, b, value, outlier);
  } else {
    const pts = entry.points;
    for (let i = 0; i < pts.length; i++) {
      const a = pts[i][0];
      const b = i + 1 < pts.length ? pts[i + 1][0] : payload.end_frame;
      push(a, b, pts[i][1], false);
    }
  }
  return cells;
}

function freezeSpansFor(
  state: ViewState,
  row: EventRow,
  window?: [number, number],
): FreezeSpan[] {
  const lo = window ? window[0] : row.start_frame;
  const hi = window ? window[1] : row.end_frame;
  const span = hi - lo;
  if (span <= 0) return [];
  const spans: FreezeSpan[] = [];
  for (const f of state.freezes ?? []) {
    if (f.parent_event_id !== row.event_id) continue;
    if (f.end_frame <= lo || f.start_frame >= hi) continue;
    spans.push({
      x0: Math.max(0, (f.start_frame - lo) / span),
      x1: Math.min(1, (f.end_frame - lo) / span),
      durationText: formatDuration(f.duration_s),
    });
  }
  return spans;
}

export function heatmapGridModel(state: ViewState): HeatmapGridModel {
  const events = state.events ?? [];
  if (events.length === 0) {
    return {
      events: [],
      simplified: state.simplified,
      message: state.allEvents === null ? "Loading..." : "No events match the current filters.",
    };
  }
  const models: EventHeatModel[] = events.map((row) => {
    const payload = state.seriesByEvent[row.event_id];
    const rows: HeatRowModel[] = payload
      ? state.enabledVariables.map((variable) => ({
          variable,
          color: variableColor(variable),
          cells: rowCells(payload, variable, state.rampMax[variable] ?? 1),
        }))
      : [];
    return {
      eventId: row.event_id,
      action: row.action,
      color: actionColor(row.action),
      title: `${actionLabel(row.action)} · segment ${row.segment} · frames ${row.start_frame}-${row.end_frame}`,
      durationText: formatDuration(row.duration_s),
      freezeCount: row.freezes,
      loaded: payload !== undefined,
      rows,
      freezeSpans: freezeSpansFor(state, row),
      selected: state.selectedEvent === row.event_id,
    };
  });
  return { events: models, simplified: state.simplified, message: null };
}

export interface LegendCurve {
  points: [number, number][];
  dotted: boolean;
  color: string;
  variable: string;
}

export interface LegendModel {
  variable: string;
  color: string;
  bounds: [number, number];
  rampMax: number;
  gradientStops: string[];
  curves: LegendCurve[];
}

function curveFor(state: ViewState, variable: string): LegendCurve | null {
  const dist = (state.distributions ?? []).find((d) => d.variable === variable);
  if (!dist || dist.counts.length === 0) return null;
  const lo = dist.edges[0];
  const hi = dist.edges[dist.edges.length - 1];
  const width = hi - lo || 1;
  const peak = Math.max(...dist.counts, 1);
  const points: [number, number][] = dist.counts.map((count, i) => {
    const mid = (dist.edges[i] + dist.edges[i + 1]) / 2;
    return [(mid - lo) / width, count / peak];
  });
  return { points, dotted: isLeftVariable(variable), color: variableColor(variable), variable };
}

const PAIRS: Record<string, string> = {
  arm_l: "arm_r",
  arm_r: "arm_l",
  foot_l: "foot_r",
  foot_r: "foot_l",
  weight_l: "weight_r",
  weight_r: "weight_l",
};

export function legendModels(state: ViewState): LegendModel[] {
  return state.enabledVariables.map((variable) => {
    const bounds = state.rampBounds[variable] ?? [0, 1];
    const rampMax = state.rampMax[variable] ?? bounds[1];
    const curves: LegendCurve[] = [];
    const own = curveFor(state, variable);
    if (own) curves.push(own);
    const partner = PAIRS[variable];
    // paired variables overlay both curves: left dotted, right solid
    if (partner && state.enabledVariables.includes(partner)) {
      const other = curveFor(state, partner);
      if (other) curves.push(other);
    }
    const stops = [0, 0.25, 0.5, 0.75, 1].map((t) =>
      heatColor(variable, bounds[0] + t * (rampMax - bounds[0]), rampMax),
    );
    return { variable, color: variableColor(variable), bounds, rampMax, gradientStops: stops, curves };
  });
}

export interface StatLine {
  label: string;
  value: string;
}

export interface DetailModel {
  eventId: string;
  title: string;
  actionText: string;
  statLines: StatLine[];
  variableStats: { variable: string; min: string; mean: string; max: string }[];
  rows: HeatRowModel[];
  freezeSpans: FreezeSpan[];
  eventBounds: [number, number];
  localRange: [number, number];
  globalWindow: { x0: number; x1: number };
  cursorFrac: number | null;
  cursorFrame: number | null;
  playing: boolean;
  loaded: boolean;
}

export function detailModel(state: ViewState): DetailModel | null {
  const id = state.selectedEvent;
  if (!id) return null;
  const row = (state.events ?? []).find((e) => e.event_id === id);
  if (!row) return null;
  const local: [number, number] = state.localRange ?? [row.start_frame, row.end_frame];
  const payload = state.seriesByEvent[id];
  const rows: HeatRowModel[] = payload
    ? state.enabledVariables.map((variable) => ({
        variable,
        color: variableColor(variable),
        cells: rowCells(payload, variable, state.rampMax[variable] ?? 1, local),
      }))
    : [];

  const stats = state.stats;
  const statLines: StatLine[] = [];
  if (stats) {
    statLines.push({ label: "Duration", value: formatDuration(stats.duration_s) });
    statLines.push({ label: "Weight shift", value: weightShiftLabel(stats.weight_text) });
    statLines.push({ label: "Freezes", value: String(row.freezes) });
  }
  const variableStats = stats
    ? Object.entries(stats.variables).map(([variable, v]) => ({
        variable,
        min: v.min.toFixed(2),
        mean: v.mean.toFixed(2),
        max: v.max.toFixed(2),
      }))
    : [];

  const span = state.meta?.span_s ?? 0;
  const startS = dayOffsetS(state, row.segment, row.start_frame);
  const endS = dayOffsetS(state, row.segment, row.end_frame);
  const width = local[1] - local[0];
  const cursorFrac =
    state.cursorFrame !== null && width > 0
      ? Math.min(1, Math.max(0, (state.cursorFrame - local[0]) / width))
      : null;

  return {
    eventId: id,
    title: `${actionLabel(row.action)} · ${formatDuration(row.duration_s)}`,
    actionText: actionLabel(row.action),
    statLines,
    variableStats,
    rows,
    freezeSpans: freezeSpansFor(state, row, local),
    eventBounds: [row.start_frame, row.end_frame],
    localRange: local,
    globalWindow: span > 0 ? { x0: startS / span, x1: endS / span } : { x0: 0, x1: 1 },
    cursorFrac,
    cursorFrame: state.cursorFrame,
    playing: state.playing,
    loaded: stats !== null,
  };
}

export interface ReplayArrow {
  variable: string;
  color: string;
  origin: [number, number, number];
  direction: [number, number, number];
  magnitude: number;
}

export interface ReplayModel {
  available: boolean;
  frame: number | null;
  pose: FramePose | null;
  joints: string[];
  arrows: ReplayArrow[];
  fps: number;
  playing: boolean;
}

/** Pose whose source frame index is closest to the shared cursor. */
export function poseAtCursor(state: ViewState): FramePose | null {
  const frames = state.frames;
  if (!frames || frames.frames.length === 0 || state.cursorFrame === null) return null;
  const first = frames.frames[0].frame;
  const idx = Math.round((state.cursorFrame - first) / frames.stride);
  const clamped = Math.min(frames.frames.length - 1, Math.max(0, idx));
  return frames.frames[clamped];
}

export function replayModel(state: ViewState): ReplayModel {
  const frames = state.frames;
  const pose = poseAtCursor(state);
  const arrows: ReplayArrow[] = [];
  if (pose && pose.vectors) {
    const jointIndex = new Map((frames?.joints ?? []).map((j, i) => [j, i]));
    for (const [variable, vec] of Object.entries(pose.vectors)) {
      const sample = vec as VectorSample;
      if (sample.magnitude === 0) continue; // zero-length arrows stay hidden
      const at = jointIndex.get(sample.origin);
      if (at === undefined) continue;
      const origin = pose.positions[at];
      if (!origin) continue;
      arrows.push({
        variable,
        color: variableColor(variable === "weight" ? "weight_l" : variable),
        origin,
        direction: sample.direction,
        magnitude: sample.magnitude,
      });
    }
  }
  return {
    available: frames !== null && pose !== null,
    frame: state.cursorFrame,
    pose,
    joints: frames?.joints ?? [],
    arrows,
    fps: frames?.fps ?? 30,
    playing: state.playing,
  };
}
