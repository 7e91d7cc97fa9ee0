"""Dataset-level orchestration: series, events, freezes, and the JSON
payload builders shared by the CLI report and the HTTP service.

A DatasetAnalysis is computed once per dataset and is immutable
afterwards, so any number of readers can query it concurrently.
"""

from __future__ import annotations

import csv
import math

import numpy as np

from .aggregate import (
    coarsen_bins,
    distribution,
    downsample,
    event_stats,
    global_stats,
    robust_range,
    simplify,
)
from .config import DEFAULT_CONFIG, AnalysisConfig
from .errors import EmptyScope, NoValidFrames, UnknownFilter
from .events import (
    EventSet,
    FreezeInterval,
    apply_filters,
    detect_freezes,
    extract_events,
    parse_filter,
)
from .kinematics import VARIABLE_PAIRS, VARIABLES, compute_series
from .model import Dataset, Event, format_rfc3339


def _clean_float(x: float) -> float | None:
    return float(x) if math.isfinite(x) else None


class DatasetAnalysis:
    """Precomputed view of one dataset under one config."""

    def __init__(self, dataset: Dataset, config: AnalysisConfig = DEFAULT_CONFIG):
        self.dataset = dataset
        self.config = config
        self.series = {
            seg.index: compute_series(seg.capture, config) for seg in dataset.segments
        }
        self.events = extract_events(dataset)
        self.freezes: list[FreezeInterval] = []
        for seg in dataset.segments:
            seg_events = [e for e in self.events if e.segment_index == seg.index]
            self.freezes.extend(
                detect_freezes(
                    self.series[seg.index],
                    seg_events,
                    delta_feet_m=config.delta_feet_m,
                    min_freeze_s=config.min_freeze_s,
                    gap_frames=config.fallback_frames,
                )
            )
        self._by_id = {e.id: e for e in self.events}
        self.stats = global_stats(dataset, self.events)
        self._population_cache: dict[tuple[str, str], np.ndarray] = {}

    # -- lookups ---------------------------------------------------------------

    def event(self, event_id: str) -> Event:
        try:
            return self._by_id[event_id]
        except KeyError:
            raise KeyError(f"unknown event id {event_id!r}") from None

    def series_for(self, event: Event):
        return self.series[event.segment_index]

    def freezes_for(self, event_id: str) -> list[FreezeInterval]:
        return [f for f in self.freezes if f.parent_event_id == event_id]

    def event_arrays(self, event: Event, variable: str):
        series = self.series_for(event)
        lo, hi = event.start_frame, event.end_frame
        return series.values(variable)[lo:hi], series.valid[lo:hi]

    def population(self, variable: str, action: str | None = None) -> np.ndarray:
        """Valid values of one variable across an action's events, or the
        whole dataset when action is None. Used as the simplify and
        distribution scope."""
        key = (variable, action or "")
        cached = self._population_cache.get(key)
        if cached is not None:
            return cached
        chunks = []
        if action is None:
            for series in self.series.values():
                chunks.append(series.values(variable)[series.valid])
        else:
            for event in self.events.by_action(action):
                values, valid = self.event_arrays(event, variable)
                chunks.append(values[valid])
        pop = np.concatenate(chunks) if chunks else np.empty(0, dtype=np.float64)
        self._population_cache[key] = pop
        return pop

    def simplify_event(self, event: Event, variable: str, scope: str | None = None):
        scope = scope or self.config.simplify_scope
        if scope not in ("selection", "global"):
            raise ValueError(f'scope must be "selection" or "global", got {scope!r}')
        if scope == "global":
            population = self.population(variable)
        else:
            population = self.population(variable, event.action)
        values, valid = self.event_arrays(event, variable)
        return simplify(values, valid, population=population, variable=variable,
                        frame_offset=event.start_frame)


def _parse_vars(vars_param: str | None) -> list[str]:
    if not vars_param:
        return list(VARIABLES)
    seen = []
    for name in vars_param.split(","):
        name = name.strip()
        if name not in VARIABLES:
            raise ValueError(f"unknown variable {name!r}")
        if name not in seen:
            seen.append(name)
    return seen


# -- payload builders ----------------------------------------------------------
# Each returns plain JSON-serializable data; the service wraps them in HTTP
# and the CLI report embeds them, so both surfaces always agree.


def payload_meta(analysis: DatasetAnalysis) -> dict:
    ds = analysis.dataset
    segments = []
    for seg in ds.segments:
        segments.append(
            {
                "index": seg.index,
                "frames": seg.capture.n_frames,
                "fps": seg.capture.fps,
                "duration_s": seg.duration_s,
                "wall_clock_start": (
                    format_rfc3339(seg.wall_clock_start)
                    if seg.wall_clock_start is not None else None
                ),
            }
        )
    return {
        "dataset_id": ds.dataset_id,
        "segments": segments,
        "span_s": ds.span_s,
        "total_frames": ds.total_frames,
        "joints": list(ds.segments[0].capture.joints) if ds.segments else [],
        "variables": list(VARIABLES),
        "config": analysis.config.to_dict(),
    }


def payload_actions_summary(analysis: DatasetAnalysis) -> dict:
    totals = analysis.stats.action_totals_s
    counts: dict[str, int] = {action: 0 for action in totals}
    for event in analysis.events:
        counts[event.action] += 1
    return {
        "actions": [
            {"action": action, "total_s": totals[action], "events": counts[action]}
            for action in totals
        ]
    }


def payload_timeline(analysis: DatasetAnalysis) -> dict:
    entries = []
    for event in analysis.events:
        seg = analysis.dataset.segments[event.segment_index]
        start_t = seg.time_at(event.start_frame)
        end_t = seg.time_at(event.end_frame)
        entries.append(
            {
                "event_id": event.id,
                "action": event.action,
                "segment": event.segment_index,
                "start_frame": event.start_frame,
                "end_frame": event.end_frame,
                "duration_s": event.duration_s,
                "start_time": format_rfc3339(start_t) if start_t else None,
                "end_time": format_rfc3339(end_t) if end_t else None,
            }
        )
    return {"events": entries}


def _event_entry(analysis: DatasetAnalysis, event: Event) -> dict:
    return {
        "event_id": event.id,
        "action": event.action,
        "segment": event.segment_index,
        "start_frame": event.start_frame,
        "end_frame": event.end_frame,
        "duration_s": event.duration_s,
        "freezes": len(analysis.freezes_for(event.id)),
    }


def payload_events(
    analysis: DatasetAnalysis, action: str | None = None, filters=()
) -> dict:
    events = analysis.events
    if action is not None:
        if action not in analysis.stats.action_totals_s:
            raise ValueError(f"unknown action {action!r}")
        events = EventSet(events.by_action(action))
    specs = [parse_filter(f) if isinstance(f, str) else f for f in filters]
    filtered = apply_filters(events, analysis.series, specs,
                             config=analysis.config, freezes=analysis.freezes)
    return {"events": [_event_entry(analysis, e) for e in filtered]}


def payload_event_series(
    analysis: DatasetAnalysis,
    event_id: str,
    vars_param: str | None = None,
    simplified: bool = True,
    max_points: int | None = None,
    scope: str | None = None,
) -> dict:
    event = analysis.event(event_id)
    names = _parse_vars(vars_param)
    budget = max_points if max_points is not None else analysis.config.max_points
    if budget < 2:
        raise ValueError("max_points must be >= 2")
    out = {"event_id": event_id, "segment": event.segment_index,
           "start_frame": event.start_frame, "end_frame": event.end_frame,
           "simplified": simplified, "series": []}
    for name in names:
        if simplified:
            binned = coarsen_bins(analysis.simplify_event(event, name, scope), budget)
            out["series"].append(
                {
                    "variable": name,
                    "mu": binned.mu,
                    "sigma": binned.sigma,
                    "bins": [
                        [int(a), int(b), _clean_float(v), bool(o)]
                        for a, b, v, o in zip(binned.starts, binned.ends,
                                              binned.values, binned.is_outlier)
                    ],
                }
            )
        else:
            values, valid = analysis.event_arrays(event, name)
            down = downsample(values, valid, budget, frame_offset=event.start_frame)
            out["series"].append(
                {
                    "variable": name,
                    "points": [
                        [int(f), _clean_float(v), _clean_float(lo), _clean_float(hi)]
                        for f, v, lo, hi in zip(down.frames, down.values,
                                                down.mins, down.maxs)
                    ],
                }
            )
    return out


def payload_event_stats(analysis: DatasetAnalysis, event_id: str) -> dict:
    event = analysis.event(event_id)
    stats = event_stats(event, analysis.series_for(event), analysis.config)
    return {
        "event_id": event_id,
        "action": event.action,
        "duration_s": stats.duration_s,
        "weight_mean_l": stats.weight_mean_l,
        "weight_text": stats.weight_text,
        "variables": stats.variables,
    }


def payload_global_stats(analysis: DatasetAnalysis) -> dict:
    return {
        "percent_sitting": analysis.stats.percent_sitting,
        "action_totals_s": analysis.stats.action_totals_s,
        "span_s": analysis.stats.span_s,
        "total_frames": analysis.stats.total_frames,
    }


def payload_distributions(
    analysis: DatasetAnalysis, vars_param: str | None = None, action: str | None = None
) -> dict:
    names = _parse_vars(vars_param)
    if action is not None and action not in analysis.stats.action_totals_s:
        raise ValueError(f"unknown action {action!r}")
    pair_of = {}
    for a, b in VARIABLE_PAIRS:
        pair_of[a] = b
        pair_of[b] = a
    out = []
    for name in names:
        pop = analysis.population(name, action)
        partner = pair_of.get(name)
        if partner is not None:
            both = np.concatenate([pop, analysis.population(partner, action)])
            if both.size == 0:
                raise EmptyScope(f"no valid frames in scope for {name!r}")
            value_range = robust_range(both)
            dist = distribution(name, pop, bins=analysis.config.distribution_bins,
                                value_range=value_range, paired=True)
        else:
            dist = distribution(name, pop, bins=analysis.config.distribution_bins)
        out.append(
            {
                "variable": name,
                "paired": dist.paired,
                "edges": [float(e) for e in dist.edges],
                "counts": [int(c) for c in dist.counts],
            }
        )
    return {"action": action, "distributions": out}


def payload_freezes(analysis: DatasetAnalysis, event_id: str | None = None) -> dict:
    freezes = analysis.freezes
    if event_id is not None:
        analysis.event(event_id)  # 404 on unknown id
        freezes = analysis.freezes_for(event_id)
    return {
        "freezes": [
            {
                "parent_event_id": f.parent_event_id,
                "segment": f.segment_index,
                "start_frame": f.start_frame,
                "end_frame": f.end_frame,
                "duration_s": f.duration_s,
            }
            for f in freezes
        ]
    }


_VECTOR_ORIGINS = {
    "trunk": "pelvis",
    "arm_l": "left_hand",
    "arm_r": "right_hand",
    "foot_l": "left_foot",
    "foot_r": "right_foot",
    "weight": "pelvis",
}

MAX_FRAMES_PER_REQUEST = 10_000


def payload_frames(
    analysis: DatasetAnalysis,
    event_id: str,
    start: int | None = None,
    stop: int | None = None,
    stride: int = 1,
) -> dict:
    """Joint positions plus world-space body-variable vectors for replay.

    Each vector is (origin joint, unit direction, magnitude); the weight
    vector points toward the loaded side with magnitude 2*|weight_l-0.5|.
    """
    event = analysis.event(event_id)
    series = analysis.series_for(event)
    capture = analysis.dataset.segments[event.segment_index].capture
    lo = event.start_frame if start is None else start
    hi = event.end_frame if stop is None else stop
    if stride < 1:
        raise ValueError("stride must be >= 1")
    if not (event.start_frame <= lo < hi <= event.end_frame):
        raise ValueError("frame range outside the event bounds")
    indices = range(lo, hi, stride)
    if len(indices) > MAX_FRAMES_PER_REQUEST:
        raise ValueError(
            f"request would return {len(indices)} frames; "
            f"limit is {MAX_FRAMES_PER_REQUEST}, increase stride"
        )

    joints = capture.joints
    pelvis = capture.joint("pelvis")
    neck = capture.joint("neck")
    frames_out = []
    for i in indices:
        positions = []
        for j in range(len(joints)):
            pos = capture.frames[i, j]
            positions.append([float(c) for c in pos] if np.isfinite(pos).all() else None)
        entry = {"frame": i, "valid": bool(series.valid[i]), "positions": positions,
                 "vectors": None}
        if series.valid[i]:
            zx, zz = float(series.axis_zx[i]), float(series.axis_zz[i])
            xx, xz = float(series.axis_xx[i]), float(series.axis_xz[i])
            t = neck[i] - pelvis[i]
            t_norm = float(np.sqrt(t @ t))
            vectors = {
                "trunk": {
                    "direction": [float(c / t_norm) for c in t],
                    "magnitude": float(series.trunk[i]),
                },
                "foot_l": {
                    "direction": [zx, 0.0, zz] if series.foot_l[i] >= 0 else [-zx, 0.0, -zz],
                    "magnitude": float(np.abs(series.foot_l[i])),
                },
                "foot_r": {
                    "direction": [zx, 0.0, zz] if series.foot_r[i] >= 0 else [-zx, 0.0, -zz],
                    "magnitude": float(np.abs(series.foot_r[i])),
                },
                "weight": {
                    "direction": [-xx, 0.0, -xz] if series.weight_l[i] >= 0.5 else [xx, 0.0, xz],
                    "magnitude": float(2.0 * np.abs(series.weight_l[i] - 0.5)),
                },
            }
            for side, hand_name in (("arm_l", "left_hand"), ("arm_r", "right_hand")):
                hand = capture.joint(hand_name)[i]
                sag = (hand[0] - pelvis[i, 0]) * zx + (hand[2] - pelvis[i, 2]) * zz
                vectors[side] = {
                    "direction": [zx, 0.0, zz] if sag >= 0 else [-zx, 0.0, -zz],
                    "magnitude": float(series.values(side)[i]),
                }
            for name, vec in vectors.items():
                vec["origin"] = _VECTOR_ORIGINS[name]
            entry["vectors"] = vectors
        frames_out.append(entry)

    return {
        "event_id": event_id,
        "segment": event.segment_index,
        "fps": capture.fps,
        "stride": stride,
        "joints": list(joints),
        "frames": frames_out,
    }


# -- CLI report ------------------------------------------------------------------


def build_report(analysis: DatasetAnalysis) -> dict:
    """The analyze report: global stats, summaries, per-event stats,
    freezes, and per-kind filter hits at config thresholds.

    Deliberately contains no generation timestamp so identical inputs
    produce identical bytes.
    """
    per_event = []
    for event in analysis.events:
        try:
            stats = payload_event_stats(analysis, event.id)
        except NoValidFrames:
            stats = None
        entry = _event_entry(analysis, event)
        entry["stats"] = stats
        per_event.append(entry)

    filter_hits = {}
    for kind in ("min_duration", "high_trunk", "imbalanced_arm",
                 "imbalanced_weight", "potential_freezes"):
        try:
            hit = apply_filters(analysis.events, analysis.series, [parse_filter(kind)],
                                config=analysis.config, freezes=analysis.freezes)
        except UnknownFilter:  # pragma: no cover - kinds are the known five
            continue
        filter_hits[kind] = [e.id for e in hit]

    return {
        "meta": payload_meta(analysis),
        "global_stats": payload_global_stats(analysis),
        "actions": payload_actions_summary(analysis)["actions"],
        "timeline": payload_timeline(analysis)["events"],
        "events": per_event,
        "freezes": payload_freezes(analysis)["freezes"],
        "filter_hits": filter_hits,
    }


def write_variables_csv(analysis: DatasetAnalysis, fileobj) -> None:
    """Per-frame body variables for external tooling; invalid frames keep
    their row with empty value cells."""
    writer = csv.writer(fileobj, lineterminator="\n")
    writer.writerow(["segment", "frame", "valid", "suspect", *VARIABLES])
    for seg in analysis.dataset.segments:
        series = analysis.series[seg.index]
        columns = [series.values(name) for name in VARIABLES]
        for i in range(series.n_frames):
            if series.valid[i]:
                cells = [repr(float(col[i])) for col in columns]
            else:
                cells = ["" for _ in columns]
            writer.writerow(
                [seg.index, i, int(series.valid[i]), int(series.suspect[i]), *cells]
            )
