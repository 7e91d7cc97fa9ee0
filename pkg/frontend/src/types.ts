// Wire types for the capture service JSON API (/api/v1).
// Field names match the server payloads verbatim; the UI never derives
// its own numbers from raw frames, it only displays what these carry.

export interface SegmentMeta {
  index: number;
  frames: number;
  fps: number;
  duration_s: number;
  wall_clock_start: string | null;
}

export interface Meta {
  dataset_id: string;
  segments: SegmentMeta[];
  span_s: number;
  total_frames: number;
  joints: string[];
  variables: string[];
  config: Record<string, number | string>;
}

export interface ActionSummaryRow {
  action: string;
  total_s: number;
  events: number;
}

export interface ActionsSummary {
  actions: ActionSummaryRow[];
}

export interface TimelineEvent {
  event_id: string;
  action: string;
  segment: number;
  start_frame: number;
  end_frame: number;
  duration_s: number;
  start_time: string | null;
  end_time: string | null;
}

export interface Timeline {
  events: TimelineEvent[];
}

export interface EventRow {
  event_id: string;
  action: string;
  segment: number;
  start_frame: number;
  end_frame: number;
  duration_s: number;
  freezes: number;
}

export interface EventList {
  events: EventRow[];
}

/** One sigma bin: [start_frame, end_frame, mean_value | null, is_outlier]. */
export type SigmaBin = [number, number, number | null, boolean];

export interface BinnedSeries {
  variable: string;
  mu: number;
  sigma: number;
  bins: SigmaBin[];
}

/** One downsampled point: [frame, value | null, min | null, max | null]. */
export type RawPoint = [number, number | null, number | null, number | null];

export interface RawSeries {
  variable: string;
  points: RawPoint[];
}

export interface SeriesPayload {
  event_id: string;
  segment: number;
  start_frame: number;
  end_frame: number;
  simplified: boolean;
  series: (BinnedSeries | RawSeries)[];
}

export interface VariableStats {
  min: number;
  mean: number;
  max: number;
}

export interface EventStats {
  event_id: string;
  action: string;
  duration_s: number;
  weight_mean_l: number;
  weight_text: string;
  variables: Record<string, VariableStats>;
}

export interface VectorSample {
  direction: [number, number, number];
  magnitude: number;
  origin: string;
}

export interface FramePose {
  frame: number;
  valid: boolean;
  positions: ([number, number, number] | null)[];
  vectors: Record<string, VectorSample> | null;
}

export interface FramesPayload {
  event_id: string;
  segment: number;
  fps: number;
  stride: number;
  joints: string[];
  frames: FramePose[];
}

export interface GlobalStats {
  percent_sitting: number;
  action_totals_s: Record<string, number>;
  span_s: number;
  total_frames: number;
}

export interface Distribution {
  variable: string;
  paired: boolean;
  edges: number[];
  counts: number[];
}

export interface Distributions {
  action: string | null;
  distributions: Distribution[];
}

export interface FreezeRow {
  parent_event_id: string;
  segment: number;
  start_frame: number;
  end_frame: number;
  duration_s: number;
}

export interface Freezes {
  freezes: FreezeRow[];
}

export interface ApiErrorBody {
  error: { code: string; message: string };
}

export function isBinned(s: BinnedSeries | RawSeries): s is BinnedSeries {
  return "bins" in s;
}
