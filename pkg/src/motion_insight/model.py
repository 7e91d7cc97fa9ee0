"""Canonical data model: captures, action labels, manifests, and datasets.

File formats are JSON throughout. A capture holds per-frame 3D joint
positions in meters (y-up); missing or non-finite positions are kept as
NaN and flagged per frame rather than rejected, so long recordings stay
contiguous through tracker dropouts.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from datetime import datetime, timedelta
from pathlib import Path

import numpy as np

from .errors import (
    JointError,
    OverlapError,
    RangeError,
    SchemaError,
    UnitError,
    VocabularyError,
)

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1

CANONICAL_JOINTS = (
    "pelvis",
    "left_hip",
    "right_hip",
    "neck",
    "left_hand",
    "right_hand",
    "left_foot",
    "right_foot",
)

ACTIONS = (
    "sit_to_stand",
    "sitting",
    "stand_to_sit",
    "reaching",
    "walking",
    "standing",
    "taking_medicine",
)


def parse_rfc3339(value: str, context: str = "timestamp") -> datetime:
    """Parse an RFC3339 timestamp ("Z" suffix accepted)."""
    if not isinstance(value, str):
        raise SchemaError(f"{context}: expected RFC3339 string, got {type(value).__name__}")
    try:
        parsed = datetime.fromisoformat(value.replace("Z", "+00:00"))
    except ValueError as exc:
        raise SchemaError(f"{context}: invalid RFC3339 timestamp {value!r}") from exc
    if parsed.tzinfo is None:
        # naive instants would make wall-clock ordering checks blow up later
        raise SchemaError(f"{context}: timestamp {value!r} must carry a UTC offset")
    return parsed


def format_rfc3339(value: datetime) -> str:
    return value.isoformat()


# -- capture -----------------------------------------------------------------


@dataclass(eq=False)
class Capture:
    """One contiguous recording of joint positions at a fixed frame rate.

    frames has shape (n_frames, n_joints, 3), float64, NaN marking absent
    coordinates. frame_valid flags frames whose canonical joints are all
    finite; only those frames feed kinematics.
    """

    fps: float
    joints: tuple[str, ...]
    frames: np.ndarray
    start_time: datetime | None = None
    units: str = "meters"
    up_axis: str = "y"
    _joint_index: dict[str, int] = field(init=False, repr=False)
    _frame_valid: np.ndarray | None = field(init=False, repr=False, default=None)

    def __post_init__(self):
        if not (isinstance(self.fps, (int, float)) and math.isfinite(self.fps) and self.fps > 0):
            raise SchemaError(f"fps must be finite and > 0, got {self.fps!r}")
        self.fps = float(self.fps)
        self.joints = tuple(self.joints)
        missing = [j for j in CANONICAL_JOINTS if j not in self.joints]
        if missing:
            raise JointError(f"capture missing canonical joints: {', '.join(missing)}")
        self.frames = np.asarray(self.frames, dtype=np.float64)
        if self.frames.ndim != 3 or self.frames.shape[1:] != (len(self.joints), 3):
            raise SchemaError(
                f"frames must have shape (n, {len(self.joints)}, 3), got {self.frames.shape}"
            )
        if self.units != "meters":
            raise UnitError(f'units must be "meters", got {self.units!r}')
        if self.up_axis != "y":
            raise UnitError(f'up_axis must be "y", got {self.up_axis!r}')
        self.frames.flags.writeable = False
        self._joint_index = {name: i for i, name in enumerate(self.joints)}

    @property
    def n_frames(self) -> int:
        return self.frames.shape[0]

    @property
    def duration_s(self) -> float:
        return self.n_frames / self.fps

    def joint(self, name: str) -> np.ndarray:
        """(n_frames, 3) view of one joint's positions."""
        return self.frames[:, self._joint_index[name], :]

    @property
    def frame_valid(self) -> np.ndarray:
        """Bool array: canonical joints all finite in this frame."""
        if self._frame_valid is None:
            idx = [self._joint_index[j] for j in CANONICAL_JOINTS]
            valid = np.isfinite(self.frames[:, idx, :]).all(axis=(1, 2))
            valid.flags.writeable = False
            self._frame_valid = valid
        return self._frame_valid

    def __eq__(self, other) -> bool:
        if not isinstance(other, Capture):
            return NotImplemented
        return (
            self.fps == other.fps
            and self.joints == other.joints
            and self.start_time == other.start_time
            and self.units == other.units
            and self.up_axis == other.up_axis
            and self.frames.shape == other.frames.shape
            and np.array_equal(self.frames, other.frames, equal_nan=True)
        )


def _coerce_frames(raw, n_joints: int) -> np.ndarray:
    """Convert the raw frames list to (n, j, 3) float64 with NaN for nulls."""
    try:
        arr = np.asarray(raw, dtype=np.float64)
        if arr.ndim == 3 and arr.shape[1:] == (n_joints, 3):
            return arr
        if arr.size == 0:
            return np.empty((0, n_joints, 3), dtype=np.float64)
        raise SchemaError(
            f"frames must be a list of {n_joints}-joint position triples, got shape {arr.shape}"
        )
    except (TypeError, ValueError):
        pass  # nulls or ragged rows: fall through to the per-frame path

    out = np.empty((len(raw), n_joints, 3), dtype=np.float64)
    for i, frame in enumerate(raw):
        if not isinstance(frame, list) or len(frame) != n_joints:
            raise SchemaError(f"frame {i}: expected {n_joints} position triples")
        try:
            out[i] = np.asarray(frame, dtype=np.float64)
            continue
        except (TypeError, ValueError):
            pass
        for j, pos in enumerate(frame):
            if pos is None:
                out[i, j] = np.nan
                continue
            if not isinstance(pos, list) or len(pos) != 3:
                raise SchemaError(f"frame {i}, joint {j}: position must be [x, y, z]")
            for k, c in enumerate(pos):
                if c is None:
                    out[i, j, k] = np.nan
                elif isinstance(c, (int, float)):
                    out[i, j, k] = float(c)
                else:
                    raise SchemaError(
                        f"frame {i}, joint {j}: coordinate must be a number or null"
                    )
    return out


def _require(obj: dict, key: str, context: str):
    if key not in obj:
        raise SchemaError(f"{context}: missing required field {key!r}")
    return obj[key]


def _check_version(obj: dict, context: str):
    version = _require(obj, "version", context)
    if version != FORMAT_VERSION:
        raise SchemaError(f"{context}: unsupported version {version!r}")


def _load_json(data: bytes | str, context: str) -> dict:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        obj = json.loads(data)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{context}: not valid JSON ({exc})") from exc
    if not isinstance(obj, dict):
        raise SchemaError(f"{context}: top level must be an object")
    return obj


def parse_capture(data: bytes | str) -> Capture:
    """Parse a capture file; flags (rather than rejects) frames with gaps."""
    obj = _load_json(data, "capture")
    _check_version(obj, "capture")
    fps = _require(obj, "fps", "capture")
    units = _require(obj, "units", "capture")
    up_axis = _require(obj, "up_axis", "capture")
    joints = _require(obj, "joints", "capture")
    raw_frames = _require(obj, "frames", "capture")
    if not (isinstance(fps, (int, float)) and not isinstance(fps, bool)
            and math.isfinite(fps) and fps > 0):
        raise SchemaError(f"capture: fps must be a finite positive number, got {fps!r}")
    if units != "meters":
        raise UnitError(f'capture: units must be "meters", got {units!r}')
    if up_axis != "y":
        raise UnitError(f'capture: up_axis must be "y", got {up_axis!r}')
    if not isinstance(joints, list) or not all(isinstance(j, str) for j in joints):
        raise SchemaError("capture: joints must be a list of strings")
    if len(set(joints)) != len(joints):
        raise SchemaError("capture: joint names must be unique")
    if not isinstance(raw_frames, list):
        raise SchemaError("capture: frames must be a list")
    start_time = None
    if obj.get("start_time") is not None:
        start_time = parse_rfc3339(obj["start_time"], "capture.start_time")
    frames = _coerce_frames(raw_frames, len(joints))
    return Capture(fps=fps, joints=tuple(joints), frames=frames, start_time=start_time)


def _frames_payload(frames: np.ndarray) -> list:
    """frames -> nested lists with None for non-finite coordinates."""
    payload = frames.tolist()
    finite = np.isfinite(frames)
    if not finite.all():
        for i, j, k in np.argwhere(~finite):
            payload[i][j][k] = None
    return payload


def serialize_capture(capture: Capture) -> bytes:
    """Canonical byte serialization; a fixed point of parse -> serialize."""
    doc = {
        "version": FORMAT_VERSION,
        "fps": capture.fps,
        "units": capture.units,
        "up_axis": capture.up_axis,
    }
    if capture.start_time is not None:
        doc["start_time"] = format_rfc3339(capture.start_time)
    doc["joints"] = list(capture.joints)
    doc["frames"] = _frames_payload(capture.frames)
    return json.dumps(doc, separators=(",", ":"), allow_nan=False).encode("utf-8")


# -- action labels -----------------------------------------------------------


@dataclass(frozen=True, order=True)
class ActionLabel:
    """Half-open frame interval [start_frame, end_frame) of one action."""

    action: str
    start_frame: int
    end_frame: int


def merge_labels(labels: list[ActionLabel]) -> list[ActionLabel]:
    """Merge overlapping or adjacent same-action intervals; sort the result.

    Idempotent and independent of input order.
    """
    by_action: dict[str, list[ActionLabel]] = {}
    for label in labels:
        by_action.setdefault(label.action, []).append(label)
    merged: list[ActionLabel] = []
    for action in sorted(by_action):
        runs = sorted(by_action[action], key=lambda l: l.start_frame)
        cur_start, cur_end = runs[0].start_frame, runs[0].end_frame
        for label in runs[1:]:
            if label.start_frame <= cur_end:
                cur_end = max(cur_end, label.end_frame)
            else:
                merged.append(ActionLabel(action, cur_start, cur_end))
                cur_start, cur_end = label.start_frame, label.end_frame
        merged.append(ActionLabel(action, cur_start, cur_end))
    return sorted(merged)


def parse_labels(data: bytes | str, capture: Capture, strict: bool = True) -> list[ActionLabel]:
    """Parse a labels file against its capture.

    Same-action overlapping or adjacent intervals are merged. Unknown action
    names raise VocabularyError in strict mode and are dropped (with a
    warning) in lenient mode; range violations always raise.
    """
    obj = _load_json(data, "labels")
    _check_version(obj, "labels")
    entries = _require(obj, "actions", "labels")
    if not isinstance(entries, list):
        raise SchemaError("labels: actions must be a list")
    labels: list[ActionLabel] = []
    for i, entry in enumerate(entries):
        if not isinstance(entry, dict):
            raise SchemaError(f"labels: entry {i} must be an object")
        action = _require(entry, "action", f"labels entry {i}")
        start = _require(entry, "start_frame", f"labels entry {i}")
        end = _require(entry, "end_frame", f"labels entry {i}")
        if not (isinstance(start, int) and isinstance(end, int)
                and not isinstance(start, bool) and not isinstance(end, bool)):
            raise SchemaError(f"labels entry {i}: frame indices must be integers")
        if action not in ACTIONS:
            if strict:
                raise VocabularyError(f"labels entry {i}: unknown action {action!r}")
            logger.warning("labels entry %d: dropping unknown action %r", i, action)
            continue
        if not (0 <= start < end <= capture.n_frames):
            raise RangeError(
                f"labels entry {i}: [{start}, {end}) out of range for "
                f"{capture.n_frames}-frame capture"
            )
        labels.append(ActionLabel(action, start, end))
    return merge_labels(labels)


def serialize_labels(labels: list[ActionLabel]) -> bytes:
    doc = {
        "version": FORMAT_VERSION,
        "actions": [
            {"action": l.action, "start_frame": l.start_frame, "end_frame": l.end_frame}
            for l in sorted(labels)
        ],
    }
    return json.dumps(doc, separators=(",", ":")).encode("utf-8")


# -- manifest ----------------------------------------------------------------


@dataclass(frozen=True)
class ManifestSegment:
    capture: str
    labels: str
    wall_clock_start: datetime


@dataclass(frozen=True)
class SegmentManifest:
    dataset_id: str
    segments: tuple[ManifestSegment, ...]
    base_dir: Path | None = None


def parse_manifest(data: bytes | str, base_dir: str | Path | None = None) -> SegmentManifest:
    obj = _load_json(data, "manifest")
    _check_version(obj, "manifest")
    dataset_id = _require(obj, "dataset_id", "manifest")
    if not isinstance(dataset_id, str):
        raise SchemaError("manifest: dataset_id must be a string")
    raw_segments = _require(obj, "segments", "manifest")
    if not isinstance(raw_segments, list) or not raw_segments:
        raise SchemaError("manifest: segments must be a non-empty list")
    segments = []
    for i, seg in enumerate(raw_segments):
        if not isinstance(seg, dict):
            raise SchemaError(f"manifest: segment {i} must be an object")
        capture = _require(seg, "capture", f"manifest segment {i}")
        labels = _require(seg, "labels", f"manifest segment {i}")
        start = parse_rfc3339(
            _require(seg, "wall_clock_start", f"manifest segment {i}"),
            f"manifest segment {i}.wall_clock_start",
        )
        segments.append(ManifestSegment(capture, labels, start))
    for a, b in zip(segments, segments[1:]):
        if b.wall_clock_start <= a.wall_clock_start:
            raise OverlapError("manifest: segment wall-clock starts must be ascending")
    return SegmentManifest(
        dataset_id=dataset_id,
        segments=tuple(segments),
        base_dir=Path(base_dir) if base_dir is not None else None,
    )


def serialize_manifest(manifest: SegmentManifest) -> bytes:
    doc = {
        "version": FORMAT_VERSION,
        "dataset_id": manifest.dataset_id,
        "segments": [
            {
                "capture": s.capture,
                "labels": s.labels,
                "wall_clock_start": format_rfc3339(s.wall_clock_start),
            }
            for s in manifest.segments
        ],
    }
    return json.dumps(doc, separators=(",", ":")).encode("utf-8")


# -- events ------------------------------------------------------------------


@dataclass(frozen=True)
class Event:
    """One labeled occurrence of an action inside one segment."""

    action: str
    segment_index: int
    start_frame: int
    end_frame: int
    fps: float

    @property
    def id(self) -> str:
        return f"{self.action}:{self.segment_index}:{self.start_frame}"

    @property
    def n_frames(self) -> int:
        return self.end_frame - self.start_frame

    @property
    def duration_s(self) -> float:
        return self.n_frames / self.fps


# -- dataset -----------------------------------------------------------------


@dataclass(eq=False)
class Segment:
    """One capture with its merged labels, anchored to wall-clock time."""

    index: int
    capture: Capture
    labels: list[ActionLabel]
    wall_clock_start: datetime | None

    @property
    def duration_s(self) -> float:
        return self.capture.duration_s

    def time_at(self, frame: int) -> datetime | None:
        if self.wall_clock_start is None:
            return None
        return self.wall_clock_start + timedelta(seconds=frame / self.capture.fps)


class Dataset:
    """Immutable multi-segment recording; safe to share across readers."""

    def __init__(self, dataset_id: str, segments: list[Segment]):
        self.dataset_id = dataset_id
        self.segments = list(segments)
        anchored = [s for s in self.segments if s.wall_clock_start is not None]
        spans = sorted(
            (s.wall_clock_start, s.wall_clock_start + timedelta(seconds=s.duration_s))
            for s in anchored
        )
        for (_, end_a), (start_b, _) in zip(spans, spans[1:]):
            if start_b < end_a:
                raise OverlapError(
                    f"dataset {dataset_id!r}: segment wall-clock ranges overlap"
                )

    @property
    def total_frames(self) -> int:
        return sum(s.capture.n_frames for s in self.segments)

    @property
    def span_s(self) -> float:
        """Total captured time in seconds (gaps between segments excluded)."""
        return sum(s.duration_s for s in self.segments)

    @property
    def wall_clock_range(self) -> tuple[datetime, datetime] | None:
        anchored = [s for s in self.segments if s.wall_clock_start is not None]
        if not anchored:
            return None
        start = min(s.wall_clock_start for s in anchored)
        end = max(
            s.wall_clock_start + timedelta(seconds=s.duration_s) for s in anchored
        )
        return start, end


def load_dataset(manifest: SegmentManifest | str | Path, strict: bool = True) -> Dataset:
    """Load every segment referenced by a manifest into one Dataset.

    Parse errors are re-raised with segment context. Relative capture and
    label paths resolve against the manifest's directory.
    """
    if isinstance(manifest, (str, Path)):
        path = Path(manifest)
        manifest = parse_manifest(path.read_bytes(), base_dir=path.parent)
    base = manifest.base_dir or Path(".")
    segments = []
    for i, seg in enumerate(manifest.segments):
        capture_path = base / seg.capture
        labels_path = base / seg.labels
        try:
            capture = parse_capture(capture_path.read_bytes())
            labels = parse_labels(labels_path.read_bytes(), capture, strict=strict)
        except (SchemaError, UnitError, JointError, RangeError, VocabularyError) as exc:
            raise type(exc)(f"segment {i} ({seg.capture}): {exc}") from exc
        segments.append(
            Segment(index=i, capture=capture, labels=labels,
                    wall_clock_start=seg.wall_clock_start)
        )
    return Dataset(manifest.dataset_id, segments)
