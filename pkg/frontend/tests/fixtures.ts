// Canned service payloads modeled on a synthetic composite day: four
// capture segments at 30 fps, seven action kinds, three walking events
// that carry a freeze each. Tests treat these as the source of truth.

import type {
  ActionsSummary,
  Distributions,
  EventList,
  EventRow,
  EventStats,
  FramePose,
  FramesPayload,
  Freezes,
  GlobalStats,
  Meta,
  SeriesPayload,
  SigmaBin,
  Timeline,
} from "../src/types.js";

export const JOINTS = [
  "pelvis",
  "left_hip",
  "right_hip",
  "neck",
  "left_hand",
  "right_hand",
  "left_foot",
  "right_foot",
];

export const VARIABLES = [
  "trunk",
  "arm_l",
  "arm_r",
  "foot_l",
  "foot_r",
  "weight_l",
  "weight_r",
];

export const META: Meta = {
  dataset_id: "synthetic-day-7",
  segments: [
    { index: 0, frames: 25200, fps: 30, duration_s: 840.0, wall_clock_start: "2024-03-14T09:00:00Z" },
    { index: 1, frames: 27000, fps: 30, duration_s: 900.0, wall_clock_start: "2024-03-14T09:14:00Z" },
    { index: 2, frames: 24300, fps: 30, duration_s: 810.0, wall_clock_start: "2024-03-14T09:29:00Z" },
    { index: 3, frames: 13500, fps: 30, duration_s: 450.0, wall_clock_start: "2024-03-14T09:42:30Z" },
  ],
  span_s: 3000.0,
  total_frames: 90000,
  joints: JOINTS,
  variables: VARIABLES,
  config: { delta_feet_m: 0.15, min_freeze_s: 1.0, min_duration_s: 5.0 },
};

export const ACTIONS_SUMMARY: ActionsSummary = {
  actions: [
    { action: "sit_to_stand", total_s: 19.5, events: 3 },
    { action: "sitting", total_s: 1315.0, events: 8 },
    { action: "stand_to_sit", total_s: 10.5, events: 3 },
    { action: "reaching", total_s: 60.0, events: 6 },
    { action: "walking", total_s: 1300.0, events: 13 },
    { action: "standing", total_s: 295.0, events: 6 },
    { action: "taking_medicine", total_s: 45.0, events: 2 },
  ],
};

export const GLOBAL_STATS: GlobalStats = {
  percent_sitting: 0.43833333333333335,
  action_totals_s: Object.fromEntries(
    ACTIONS_SUMMARY.actions.map((a) => [a.action, a.total_s]),
  ),
  span_s: 3000.0,
  total_frames: 90000,
};

interface EventSeed {
  action: string;
  segment: number;
  start: number;
  end: number;
  freezes: number;
}

// chronological across segments; reaching overlaps the standing event
const EVENT_SEEDS: EventSeed[] = [
  { action: "sitting", segment: 0, start: 0, end: 6375, freezes: 0 },
  { action: "walking", segment: 0, start: 6375, end: 8625, freezes: 1 },
  { action: "standing", segment: 0, start: 8625, end: 10125, freezes: 0 },
  { action: "reaching", segment: 0, start: 8700, end: 9300, freezes: 0 },
  { action: "walking", segment: 0, start: 13500, end: 16200, freezes: 0 },
  { action: "sitting", segment: 1, start: 0, end: 7110, freezes: 0 },
  { action: "walking", segment: 1, start: 7110, end: 9090, freezes: 1 },
  { action: "sit_to_stand", segment: 1, start: 9090, end: 9285, freezes: 0 },
  { action: "walking", segment: 2, start: 600, end: 3300, freezes: 1 },
  { action: "stand_to_sit", segment: 2, start: 3300, end: 3405, freezes: 0 },
  { action: "walking", segment: 3, start: 900, end: 2700, freezes: 0 },
  { action: "taking_medicine", segment: 3, start: 2700, end: 3375, freezes: 0 },
];

const FPS = 30;

function rowFor(seed: EventSeed): EventRow {
  return {
    event_id: `${seed.action}:${seed.segment}:${seed.start}`,
    action: seed.action,
    segment: seed.segment,
    start_frame: seed.start,
    end_frame: seed.end,
    duration_s: (seed.end - seed.start) / FPS,
    freezes: seed.freezes,
  };
}

export const ALL_EVENTS: EventList = { events: EVENT_SEEDS.map(rowFor) };

export const WALKING_EVENTS: EventList = {
  events: ALL_EVENTS.events.filter((e) => e.action === "walking"),
};

export const FREEZE_WALKS: EventList = {
  events: WALKING_EVENTS.events.filter((e) => e.freezes > 0),
};

export const FREEZE_IDS = FREEZE_WALKS.events.map((e) => e.event_id);

export const TIMELINE: Timeline = {
  events: ALL_EVENTS.events.map((e) => ({
    event_id: e.event_id,
    action: e.action,
    segment: e.segment,
    start_frame: e.start_frame,
    end_frame: e.end_frame,
    duration_s: e.duration_s,
    start_time: null,
    end_time: null,
  })),
};

export const FREEZES: Freezes = {
  freezes: [
    { parent_event_id: "walking:0:6375", segment: 0, start_frame: 7200, end_frame: 7260, duration_s: 2.0 },
    { parent_event_id: "walking:1:7110", segment: 1, start_frame: 8000, end_frame: 8090, duration_s: 3.0 },
    { parent_event_id: "walking:2:600", segment: 2, start_frame: 1500, end_frame: 1545, duration_s: 1.5 },
  ],
};

const RANGES: Record<string, [number, number]> = {
  trunk: [0, 40],
  arm_l: [0, 0.6],
  arm_r: [0, 0.6],
  foot_l: [0, 0.8],
  foot_r: [0, 0.8],
  weight_l: [0, 1],
  weight_r: [0, 1],
};

export const DISTRIBUTIONS: Distributions = {
  action: null,
  distributions: VARIABLES.map((variable) => {
    const [lo, hi] = RANGES[variable];
    const bins = 16;
    const edges = Array.from({ length: bins + 1 }, (_, i) => lo + ((hi - lo) * i) / bins);
    const counts = Array.from({ length: bins }, (_, i) => 40 + ((i * 37) % 160));
    return { variable, paired: variable !== "trunk", edges, counts };
  }),
};

export function binnedSeries(eventId: string): SeriesPayload {
  const row = ALL_EVENTS.events.find((e) => e.event_id === eventId);
  if (!row) throw new Error(`no fixture event ${eventId}`);
  const nBins = 6;
  const span = row.end_frame - row.start_frame;
  return {
    event_id: eventId,
    segment: row.segment,
    start_frame: row.start_frame,
    end_frame: row.end_frame,
    simplified: true,
    series: VARIABLES.map((variable, vi) => {
      const [lo, hi] = RANGES[variable];
      const bins: SigmaBin[] = [];
      for (let i = 0; i < nBins; i++) {
        const a = row.start_frame + Math.round((span * i) / nBins);
        const b = row.start_frame + Math.round((span * (i + 1)) / nBins);
        // one gap bin and one outlier bin per trunk row
        const gap = variable === "trunk" && i === 2;
        const outlier = variable === "trunk" && i === 4;
        const value = gap ? null : lo + (hi - lo) * (0.2 + 0.12 * ((i + vi) % 5));
        bins.push([a, b, value, outlier]);
      }
      return { variable, mu: (lo + hi) / 2, sigma: (hi - lo) / 6, bins };
    }),
  };
}

export function rawSeries(eventId: string): SeriesPayload {
  const row = ALL_EVENTS.events.find((e) => e.event_id === eventId);
  if (!row) throw new Error(`no fixture event ${eventId}`);
  const n = 24;
  const span = row.end_frame - row.start_frame;
  return {
    event_id: eventId,
    segment: row.segment,
    start_frame: row.start_frame,
    end_frame: row.end_frame,
    simplified: false,
    series: VARIABLES.map((variable, vi) => {
      const [lo, hi] = RANGES[variable];
      const points = Array.from({ length: n }, (_, i) => {
        const frame = row.start_frame + Math.round((span * i) / n);
        const value = lo + (hi - lo) * (0.25 + 0.1 * ((i + vi) % 4));
        return [frame, value, value * 0.9, value * 1.1] as [number, number, number, number];
      });
      return { variable, points };
    }),
  };
}

export function statsFor(eventId: string): EventStats {
  const row = ALL_EVENTS.events.find((e) => e.event_id === eventId);
  if (!row) throw new Error(`no fixture event ${eventId}`);
  const variables: EventStats["variables"] = {};
  for (const variable of VARIABLES) {
    const [lo, hi] = RANGES[variable];
    variables[variable] = {
      min: lo + (hi - lo) * 0.05,
      mean: lo + (hi - lo) * 0.4,
      max: lo + (hi - lo) * 0.9,
    };
  }
  return {
    event_id: eventId,
    action: row.action,
    duration_s: row.duration_s,
    weight_mean_l: 0.512,
    weight_text: "balanced",
    variables,
  };
}

export function framesFor(eventId: string, stride: number): FramesPayload {
  const row = ALL_EVENTS.events.find((e) => e.event_id === eventId);
  if (!row) throw new Error(`no fixture event ${eventId}`);
  const frames: FramePose[] = [];
  for (let f = row.start_frame; f < row.end_frame; f += stride) {
    const k = (f - row.start_frame) / stride; // pose index in the payload
    const t = (f - row.start_frame) / FPS;
    const sway = 0.05 * Math.sin(t * 2.1);
    const positions: [number, number, number][] = [
      [sway, 0.95, 0], // pelvis
      [sway - 0.12, 0.9, 0],
      [sway + 0.12, 0.9, 0],
      [sway, 1.45, 0.02], // neck
      [sway - 0.25, 1.0, 0.1],
      [sway + 0.25, 1.0, -0.1],
      [sway - 0.12, 0.05, 0.12],
      [sway + 0.12, 0.05, -0.12],
    ];
    // one occlusion dropout early in every block of forty poses
    const valid = k % 40 !== 21;
    frames.push({
      frame: f,
      valid,
      positions,
      vectors: valid
        ? {
            trunk: { direction: [0, 0.99, 0.04], magnitude: 6.5, origin: "pelvis" },
            arm_l: { direction: [0, 0, 1], magnitude: 0.21, origin: "left_hand" },
            arm_r: { direction: [0, 0, -1], magnitude: 0.19, origin: "right_hand" },
            foot_l: { direction: [0, 0, 1], magnitude: 0.3, origin: "left_foot" },
            foot_r: { direction: [0, 0, -1], magnitude: 0.28, origin: "right_foot" },
            // even poses carry a zero-length weight vector (balanced)
            weight: { direction: [1, 0, 0], magnitude: k % 2 === 0 ? 0 : 0.12, origin: "pelvis" },
          }
        : null,
    });
  }
  return {
    event_id: eventId,
    segment: row.segment,
    fps: FPS,
    stride,
    joints: JOINTS,
    frames,
  };
}

export const EMPTY_DATASET = {
  meta: { ...META, dataset_id: "empty-day", segments: [], span_s: 0, total_frames: 0 },
  summary: { actions: [] } as ActionsSummary,
  timeline: { events: [] } as Timeline,
  globals: { percent_sitting: 0, action_totals_s: {}, span_s: 0, total_frames: 0 } as GlobalStats,
  events: { events: [] } as EventList,
  distributions: { action: null, distributions: [] } as Distributions,
  freezes: { freezes: [] } as Freezes,
};
