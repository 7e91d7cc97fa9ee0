"""Events, candidate freeze-of-gait intervals, and event filtering.

An event is one labeled occurrence of an action inside one segment.
Freeze candidates are stretches of a walking event where both feet stay
sagittally under the pelvis; they are flagged for review, not diagnosed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_CONFIG, AnalysisConfig
from .errors import UnknownFilter
from .kinematics import EPS, BodyVariableSeries
from .model import Dataset, Event

FILTER_KINDS = (
    "min_duration",
    "high_trunk",
    "imbalanced_arm",
    "imbalanced_weight",
    "potential_freezes",
)

# filters that take a numeric threshold; potential_freezes is bare
_VALUED = FILTER_KINDS[:4]


@dataclass(frozen=True)
class EventSet:
    """Events in chronological order, queryable per action."""

    events: tuple[Event, ...]

    def __len__(self) -> int:
        return len(self.events)

    def __iter__(self):
        return iter(self.events)

    def by_action(self, action: str) -> tuple[Event, ...]:
        return tuple(e for e in self.events if e.action == action)

    def get(self, event_id: str) -> Event | None:
        for e in self.events:
            if e.id == event_id:
                return e
        return None


@dataclass(frozen=True)
class FreezeInterval:
    """Half-open frame run inside a walking event where gait stalled."""

    parent_event_id: str
    segment_index: int
    start_frame: int
    end_frame: int
    duration_s: float


def extract_events(dataset: Dataset) -> EventSet:
    """One Event per merged label, ordered by segment then start frame."""
    events = []
    for segment in dataset.segments:
        for label in segment.labels:
            events.append(
                Event(
                    action=label.action,
                    segment_index=segment.index,
                    start_frame=label.start_frame,
                    end_frame=label.end_frame,
                    fps=segment.capture.fps,
                )
            )
    events.sort(key=lambda e: (e.segment_index, e.start_frame, e.end_frame, e.action))
    return EventSet(tuple(events))


def _runs(cls: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Start/end indices of maximal constant runs in a class array."""
    cuts = np.flatnonzero(np.diff(cls)) + 1
    starts = np.concatenate(([0], cuts))
    ends = np.concatenate((cuts, [cls.shape[0]]))
    return starts, ends


def detect_freezes(
    series: BodyVariableSeries,
    events,
    delta_feet_m: float = DEFAULT_CONFIG.delta_feet_m,
    min_freeze_s: float = DEFAULT_CONFIG.min_freeze_s,
    gap_frames: int = DEFAULT_CONFIG.fallback_frames,
) -> list[FreezeInterval]:
    """Scan the walking events of one segment for freeze candidates.

    A candidate is a maximal run in which every valid frame keeps both
    feet within delta_feet_m of the pelvis sagittally. Runs begin and end
    on such frames; interior invalid stretches of at most gap_frames are
    bridged (they count toward the duration), longer ones split the run.
    Runs shorter than min_freeze_s are discarded.
    """
    out: list[FreezeInterval] = []
    for event in events:
        if event.action != "walking":
            continue
        lo, hi = event.start_frame, event.end_frame
        valid = series.valid[lo:hi]
        still = (
            valid
            & (np.abs(series.foot_l[lo:hi]) < delta_feet_m)
            & (np.abs(series.foot_r[lo:hi]) < delta_feet_m)
        )
        # 2 = still, 1 = invalid (bridgeable), 0 = valid but moving
        cls = np.where(still, 2, np.where(valid, 0, 1)).astype(np.int8)
        starts, ends = _runs(cls)
        run_cls = cls[starts]

        cur_start = -1
        cur_end = -1

        def emit():
            duration = (cur_end - cur_start) / event.fps
            if duration >= min_freeze_s:
                out.append(
                    FreezeInterval(
                        parent_event_id=event.id,
                        segment_index=event.segment_index,
                        start_frame=int(lo + cur_start),
                        end_frame=int(lo + cur_end),
                        duration_s=float(duration),
                    )
                )

        for a, b, c in zip(starts, ends, run_cls):
            if c == 2:
                if cur_start < 0:
                    cur_start = a
                cur_end = b
            elif c == 1:
                if cur_start >= 0 and b - a > gap_frames:
                    emit()
                    cur_start = -1
            else:
                if cur_start >= 0:
                    emit()
                    cur_start = -1
        if cur_start >= 0:
            emit()
    return out


@dataclass(frozen=True)
class FilterSpec:
    """One predicate from the query grammar "kind" or "kind=value"."""

    kind: str
    value: float | None = None

    def __post_init__(self):
        if self.kind not in FILTER_KINDS:
            raise UnknownFilter(f"unknown filter kind {self.kind!r}")
        if self.kind == "potential_freezes":
            if self.value is not None:
                raise UnknownFilter("potential_freezes takes no value")
        elif self.value is not None:
            if not (isinstance(self.value, (int, float)) and math.isfinite(self.value)
                    and self.value > 0):
                raise UnknownFilter(f"{self.kind}: threshold must be finite and > 0")


def parse_filter(text: str) -> FilterSpec:
    """Parse "kind" or "kind=value" into a FilterSpec."""
    kind, sep, raw = text.partition("=")
    kind = kind.strip()
    if not sep:
        return FilterSpec(kind)
    try:
        value = float(raw)
    except ValueError:
        raise UnknownFilter(f"{kind}: malformed threshold {raw!r}") from None
    return FilterSpec(kind, value)


def _mean_valid(values: np.ndarray, valid: np.ndarray) -> float | None:
    picked = values[valid]
    if picked.size == 0:
        return None
    return float(np.mean(picked))


def _passes(
    event: Event,
    spec: FilterSpec,
    series: BodyVariableSeries,
    config: AnalysisConfig,
    freeze_parents: set[str],
) -> bool:
    lo, hi = event.start_frame, event.end_frame
    valid = series.valid[lo:hi]
    if spec.kind == "min_duration":
        threshold = spec.value if spec.value is not None else config.min_duration_s
        return event.duration_s > threshold
    if spec.kind == "potential_freezes":
        return event.id in freeze_parents
    if not valid.any():
        return False  # value filters cannot be demonstrated without valid frames
    if spec.kind == "high_trunk":
        threshold = spec.value if spec.value is not None else config.trunk_p95_deg
        return float(np.percentile(series.trunk[lo:hi][valid], 95)) > threshold
    if spec.kind == "imbalanced_arm":
        threshold = spec.value if spec.value is not None else config.arm_ratio
        mean_l = _mean_valid(series.arm_l[lo:hi], valid)
        mean_r = _mean_valid(series.arm_r[lo:hi], valid)
        ratio = max(mean_l, mean_r) / max(min(mean_l, mean_r), EPS)
        return ratio > threshold
    if spec.kind == "imbalanced_weight":
        threshold = spec.value if spec.value is not None else config.weight_dev
        mean_l = _mean_valid(series.weight_l[lo:hi], valid)
        return abs(mean_l - 0.5) > threshold
    raise UnknownFilter(f"unknown filter kind {spec.kind!r}")


def apply_filters(
    event_set: EventSet,
    series,
    filters,
    config: AnalysisConfig = DEFAULT_CONFIG,
    freezes: list[FreezeInterval] | None = None,
) -> EventSet:
    """Keep the events satisfying every filter (conjunction).

    series is one BodyVariableSeries for single-segment data or a mapping
    of segment index to series. When a potential_freezes filter is present
    and no precomputed freezes are given, the detector runs here with the
    config thresholds.
    """
    specs = [parse_filter(f) if isinstance(f, str) else f for f in filters]
    for spec in specs:
        if spec.kind not in FILTER_KINDS:
            raise UnknownFilter(f"unknown filter kind {spec.kind!r}")
    series_map = series if isinstance(series, dict) else {0: series}

    freeze_parents: set[str] = set()
    if any(s.kind == "potential_freezes" for s in specs):
        if freezes is None:
            freezes = []
            for seg_index, seg_series in series_map.items():
                seg_events = [e for e in event_set if e.segment_index == seg_index]
                freezes.extend(
                    detect_freezes(
                        seg_series, seg_events,
                        delta_feet_m=config.delta_feet_m,
                        min_freeze_s=config.min_freeze_s,
                        gap_frames=config.fallback_frames,
                    )
                )
        freeze_parents = {f.parent_event_id for f in freezes}

    kept = tuple(
        e for e in event_set.events
        if all(_passes(e, s, series_map[e.segment_index], config, freeze_parents)
               for s in specs)
    )
    return EventSet(kept)
