"""Deterministic synthetic motion generator with ground-truth manifests.

Builds kinematically plausible joint trajectories for activities of daily
living from a parametric sinusoidal gait model, injects configurable
deficits (gait freezes, a fall, one-sided arm swing, lateral weight bias,
slow chair transfers), and records exactly what was injected so the
analysis pipeline can be tested against known truth.

Determinism contract: equal spec and seed produce byte-identical files.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone
from pathlib import Path

import numpy as np

from .errors import SpecError
from .model import (
    CANONICAL_JOINTS,
    ActionLabel,
    Capture,
    Dataset,
    ManifestSegment,
    Segment,
    SegmentManifest,
    merge_labels,
    serialize_capture,
    serialize_labels,
    serialize_manifest,
)

SCENARIOS = (
    "clean_walk",
    "freeze_walk",
    "fall_stand",
    "imbalanced_arm_walk",
    "weight_bias_walk",
    "slow_sit_to_stand",
    "composite_day",
)

EXTRA_JOINTS = (
    "head",
    "spine_mid",
    "left_shoulder",
    "right_shoulder",
    "left_elbow",
    "right_elbow",
    "left_wrist",
    "right_wrist",
    "left_knee",
    "right_knee",
    "left_toe",
    "right_toe",
    "left_heel",
    "right_heel",
)

BASE_START = datetime(2024, 3, 14, 9, 0, 0, tzinfo=timezone.utc)

# body proportions (meters)
HIP_HALF_WIDTH = 0.10
HIP_DROP = 0.05
TRUNK_LEN = 0.50
FOOT_HALF_WIDTH = 0.10
FOOT_HEIGHT = 0.05
HAND_HALF_WIDTH = 0.25
HAND_DROP = 0.15

# gait model
STRIDE_HZ = 1.0
WALK_SPEED = 0.9
FOOT_AMP = 0.30
ARM_AMP = 0.25
FREEZE_FOOT_AMP = 0.02
FREEZE_ARM_AMP = 0.05
NOISE_STD = 0.004


@dataclass(frozen=True)
class ScenarioSpec:
    """Parameters for one synthetic recording."""

    scenario: str
    duration_s: float = 60.0
    fps: float = 30.0
    seed: int = 0
    freeze_count: int = 1
    freeze_duration_s: float = 1.5
    arm_ratio: float = 3.0
    weight_bias: float = 0.06
    extra_joints: int = 0

    def __post_init__(self):
        if self.scenario not in SCENARIOS:
            raise SpecError(f"unknown scenario {self.scenario!r}")
        if not self.duration_s > 0:
            raise SpecError("duration_s must be > 0")
        if not self.fps > 0:
            raise SpecError("fps must be > 0")
        if not 0 <= self.extra_joints <= len(EXTRA_JOINTS):
            raise SpecError(f"extra_joints must be in [0, {len(EXTRA_JOINTS)}]")
        if self.freeze_count < 0:
            raise SpecError("freeze_count must be >= 0")
        if not self.freeze_duration_s > 0:
            raise SpecError("freeze_duration_s must be > 0")
        if not self.arm_ratio >= 1.0:
            raise SpecError("arm_ratio must be >= 1")
        if not -0.08 <= self.weight_bias <= 0.08:
            raise SpecError("weight_bias must be within [-0.08, 0.08]")


@dataclass(frozen=True)
class Deficit:
    kind: str
    segment: int
    start_frame: int
    end_frame: int
    params: dict


@dataclass(frozen=True)
class ScheduleEntry:
    action: str
    segment: int
    start_frame: int
    end_frame: int


@dataclass(frozen=True)
class DeficitTruth:
    """Everything the generator injected, for use as a test oracle."""

    deficits: tuple[Deficit, ...]
    schedule: tuple[ScheduleEntry, ...]


def serialize_truth(truth: DeficitTruth) -> bytes:
    doc = {
        "version": 1,
        "deficits": [
            {
                "kind": d.kind,
                "segment": d.segment,
                "start_frame": d.start_frame,
                "end_frame": d.end_frame,
                "params": d.params,
            }
            for d in truth.deficits
        ],
        "schedule": [
            {
                "action": s.action,
                "segment": s.segment,
                "start_frame": s.start_frame,
                "end_frame": s.end_frame,
            }
            for s in truth.schedule
        ],
    }
    return json.dumps(doc, separators=(",", ":"), sort_keys=True).encode("utf-8")


def parse_truth(data: bytes | str) -> DeficitTruth:
    obj = json.loads(data if isinstance(data, str) else data.decode("utf-8"))
    deficits = tuple(
        Deficit(d["kind"], d["segment"], d["start_frame"], d["end_frame"], d["params"])
        for d in obj["deficits"]
    )
    schedule = tuple(
        ScheduleEntry(s["action"], s["segment"], s["start_frame"], s["end_frame"])
        for s in obj["schedule"]
    )
    return DeficitTruth(deficits, schedule)


def _smoothstep(u: np.ndarray) -> np.ndarray:
    u = np.clip(u, 0.0, 1.0)
    return u * u * (3.0 - 2.0 * u)


def _bump(u: np.ndarray) -> np.ndarray:
    """Smooth 0 -> 1 -> 0 envelope over u in [0,1]."""
    return np.sin(np.pi * np.clip(u, 0.0, 1.0)) ** 2


class _SegmentBuilder:
    """Accumulates action blocks, then synthesizes joints in one pass.

    Walking feet follow amp * sin(phase) sagittally; a freeze drops the
    amplitude to near zero for its window. Phase offsets are chosen per
    region so the frames flanking a freeze sit near the swing peak,
    which keeps the detected interval aligned with the injected one even
    with measurement noise.
    """

    def __init__(self, fps: float, segment_index: int, rng: np.random.Generator,
                 extra_joints: int = 0):
        self.fps = fps
        self.segment_index = segment_index
        self.rng = rng
        self.extra_joints = extra_joints
        self.heading = rng.uniform(0.0, 2.0 * np.pi)
        self.blocks: list[dict] = []
        self.labels: list[ActionLabel] = []
        self.deficits: list[Deficit] = []
        self.cursor = 0

    def frames(self, seconds: float) -> int:
        n = round(seconds * self.fps)
        if abs(n - seconds * self.fps) > 1e-9:
            raise SpecError(f"block duration {seconds}s is not a whole frame count")
        return int(n)

    def _push(self, action: str, n: int, **params) -> tuple[int, int]:
        start, end = self.cursor, self.cursor + n
        self.blocks.append({"action": action, "start": start, "end": end, **params})
        self.labels.append(ActionLabel(action, start, end))
        self.cursor = end
        return start, end

    def add_sitting(self, seconds: float):
        self._push("sitting", self.frames(seconds))

    def add_standing(self, seconds: float, weight_bias: float = 0.0,
                     fall_at_s: float | None = None):
        n = self.frames(seconds)
        start, end = self._push("standing", n, weight_bias=weight_bias,
                                fall_at_s=fall_at_s)
        if weight_bias:
            self.deficits.append(Deficit("weight_bias", self.segment_index, start, end,
                                         {"weight_bias": weight_bias}))
        if fall_at_s is not None:
            fall_len = 3.5  # ramp 0.7 + floor hold 2.0 + recovery 0.8
            if fall_at_s < 0 or fall_at_s + fall_len > seconds:
                raise SpecError("fall does not fit inside its standing block")
            a = start + self.frames(fall_at_s)
            b = a + round(fall_len * self.fps)
            self.deficits.append(Deficit("fall", self.segment_index, a, int(b), {}))

    def add_walking(self, seconds: float, freezes=(), arm_ratio: float = 1.0,
                    weight_bias: float = 0.0):
        n = self.frames(seconds)
        windows = []
        for rel_s, dur_s in freezes:
            a = self.cursor + self.frames(rel_s)
            b = a + round(dur_s * self.fps)
            if b >= self.cursor + n:
                raise SpecError("freeze does not fit inside its walking block")
            windows.append((a, int(b)))
            self.deficits.append(Deficit("freeze", self.segment_index, a, int(b),
                                         {"duration_s": (int(b) - a) / self.fps}))
        start, end = self._push("walking", n, freezes=tuple(windows),
                                arm_ratio=arm_ratio, weight_bias=weight_bias)
        if arm_ratio > 1.0:
            self.deficits.append(Deficit("imbalanced_arm", self.segment_index,
                                         start, end, {"arm_ratio": arm_ratio}))
        if weight_bias:
            self.deficits.append(Deficit("weight_bias", self.segment_index, start, end,
                                         {"weight_bias": weight_bias}))

    def add_transfer(self, action: str, seconds: float, slow: bool = False):
        start, end = self._push(action, self.frames(seconds))
        if slow:
            self.deficits.append(Deficit("slow_transfer", self.segment_index,
                                         start, end, {"duration_s": seconds}))

    def add_reaching(self, seconds: float):
        self._push("reaching", self.frames(seconds))

    def add_taking_medicine(self, seconds: float):
        start, end = self._push("taking_medicine", self.frames(seconds))
        # the subject remains standing while dosing; labels may overlap
        self.labels.append(ActionLabel("standing", start, end))

    # -- synthesis -------------------------------------------------------------

    def _param_arrays(self, n: int):
        p = {
            "theta": np.full(n, 4.0),
            "height": np.full(n, 1.0),
            "speed": np.zeros(n),
            "beta": np.zeros(n),
            "foot_amp": np.zeros(n),
            "foot_static": np.zeros(n),
            "arm_amp_l": np.zeros(n),
            "arm_amp_r": np.zeros(n),
            "arm_static_l": np.full(n, 0.05),
            "arm_static_r": np.full(n, 0.05),
            "phase_off": np.zeros(n),
        }
        dphi = 2.0 * np.pi * STRIDE_HZ / self.fps
        for blk in self.blocks:
            s, e = blk["start"], blk["end"]
            m = e - s
            u = np.arange(m) / max(m - 1, 1)
            t = np.arange(m) / self.fps
            action = blk["action"]
            if action == "sitting":
                p["theta"][s:e] = 8.0
                p["height"][s:e] = 0.5
                p["foot_static"][s:e] = 0.22
                p["arm_static_l"][s:e] = 0.12
                p["arm_static_r"][s:e] = 0.12
            elif action == "standing":
                p["theta"][s:e] = 4.0
                p["beta"][s:e] = blk.get("weight_bias", 0.0)
                if blk.get("fall_at_s") is not None:
                    f0 = blk["fall_at_s"]
                    keys_t = [0.0, f0, f0 + 0.7, f0 + 2.7, f0 + 3.5, m / self.fps]
                    p["theta"][s:e] = np.interp(t, keys_t, [4.0, 4.0, 68.0, 68.0, 4.0, 4.0])
                    p["height"][s:e] = np.interp(t, keys_t, [1.0, 1.0, 0.45, 0.45, 1.0, 1.0])
                    p["arm_static_l"][s:e] = np.interp(t, keys_t,
                                                       [0.05, 0.05, 0.30, 0.30, 0.05, 0.05])
                    p["arm_static_r"][s:e] = p["arm_static_l"][s:e]
            elif action == "walking":
                p["theta"][s:e] = 5.0 + 1.5 * np.sin(2.0 * np.pi * 0.5 * t)
                p["speed"][s:e] = WALK_SPEED
                p["beta"][s:e] = blk.get("weight_bias", 0.0)
                p["foot_amp"][s:e] = FOOT_AMP
                p["arm_amp_l"][s:e] = ARM_AMP
                p["arm_amp_r"][s:e] = ARM_AMP / blk.get("arm_ratio", 1.0)
                p["arm_static_l"][s:e] = 0.0
                p["arm_static_r"][s:e] = 0.0
                # pin the phase so the frames flanking each freeze are at
                # swing peak: last pre-freeze frame and first post-freeze
                # frame both get phase pi/2
                region_start = s
                for a, b in blk.get("freezes", ()):
                    p["phase_off"][region_start:a] = np.pi / 2 - dphi * (a - 1)
                    p["phase_off"][a:b] = np.pi / 2 - dphi * (a - 1)
                    p["foot_amp"][a:b] = FREEZE_FOOT_AMP
                    p["arm_amp_l"][a:b] = FREEZE_ARM_AMP
                    p["arm_amp_r"][a:b] = FREEZE_ARM_AMP / blk.get("arm_ratio", 1.0)
                    p["speed"][a:b] = 0.0
                    region_start = b
                if blk.get("freezes", ()):
                    b_last = blk["freezes"][-1][1]
                    p["phase_off"][b_last:e] = np.pi / 2 - dphi * b_last
            elif action in ("sit_to_stand", "stand_to_sit"):
                rising = action == "sit_to_stand"
                env = _smoothstep(u) if rising else 1.0 - _smoothstep(u)
                p["height"][s:e] = 0.5 + 0.5 * env
                p["theta"][s:e] = 5.0 + 15.0 * _bump(u)
                p["foot_static"][s:e] = 0.10
            elif action == "reaching":
                p["theta"][s:e] = 4.0 + 14.0 * _bump(u)
                p["arm_static_r"][s:e] = 0.05 + 0.45 * _bump(u)
            elif action == "taking_medicine":
                p["theta"][s:e] = 6.0
                p["arm_static_l"][s:e] = 0.20 + 0.02 * np.sin(2.0 * np.pi * 0.3 * t)
                p["arm_static_r"][s:e] = 0.20 + 0.02 * np.sin(2.0 * np.pi * 0.3 * t + np.pi)
        return p

    def build(self, start_time: datetime) -> tuple[Capture, list[ActionLabel]]:
        n = self.cursor
        if n == 0:
            raise SpecError("segment script is empty")
        p = self._param_arrays(n)
        fps = self.fps

        fwd = np.array([np.sin(self.heading), 0.0, np.cos(self.heading)])
        right = np.array([-fwd[2], 0.0, fwd[0]])
        up = np.array([0.0, 1.0, 0.0])

        track = np.concatenate(([0.0], np.cumsum(p["speed"][:-1] / fps)))
        phase = 2.0 * np.pi * STRIDE_HZ * np.arange(n) / fps + p["phase_off"]
        theta = np.radians(p["theta"])

        def place(along, lateral, height):
            """World position from track-relative cylindrical coordinates."""
            return (np.outer(track + along, fwd)
                    + np.outer(lateral, right)
                    + np.outer(height, up))

        zeros = np.zeros(n)
        pelvis = place(zeros, -p["beta"], p["height"])
        left_hip = place(zeros, -p["beta"] - HIP_HALF_WIDTH, p["height"] - HIP_DROP)
        right_hip = place(zeros, -p["beta"] + HIP_HALF_WIDTH, p["height"] - HIP_DROP)
        neck = pelvis + TRUNK_LEN * (
            np.outer(np.sin(theta), fwd) + np.outer(np.cos(theta), up)
        )
        foot_sag_l = p["foot_amp"] * np.sin(phase) + p["foot_static"]
        foot_sag_r = p["foot_amp"] * np.sin(phase + np.pi) + p["foot_static"]
        left_foot = place(foot_sag_l, np.full(n, -FOOT_HALF_WIDTH), np.full(n, FOOT_HEIGHT))
        right_foot = place(foot_sag_r, np.full(n, FOOT_HALF_WIDTH), np.full(n, FOOT_HEIGHT))
        hand_sag_l = p["arm_amp_l"] * np.sin(phase + np.pi) + p["arm_static_l"]
        hand_sag_r = p["arm_amp_r"] * np.sin(phase) + p["arm_static_r"]
        hand_h = p["height"] - HAND_DROP
        left_hand = place(hand_sag_l, -p["beta"] - HAND_HALF_WIDTH, hand_h)
        right_hand = place(hand_sag_r, -p["beta"] + HAND_HALF_WIDTH, hand_h)

        joints = {
            "pelvis": pelvis,
            "left_hip": left_hip,
            "right_hip": right_hip,
            "neck": neck,
            "left_hand": left_hand,
            "right_hand": right_hand,
            "left_foot": left_foot,
            "right_foot": right_foot,
        }
        if self.extra_joints:
            extras = {
                "head": neck + 0.12 * (neck - pelvis) / TRUNK_LEN,
                "spine_mid": 0.5 * (pelvis + neck),
                "left_shoulder": neck - 0.15 * right - 0.02 * up,
                "right_shoulder": neck + 0.15 * right - 0.02 * up,
                "left_knee": 0.5 * (left_hip + left_foot) + 0.02 * up,
                "right_knee": 0.5 * (right_hip + right_foot) + 0.02 * up,
                "left_toe": left_foot + 0.12 * fwd,
                "right_toe": right_foot + 0.12 * fwd,
                "left_heel": left_foot - 0.08 * fwd,
                "right_heel": right_foot - 0.08 * fwd,
            }
            extras["left_elbow"] = 0.5 * (extras["left_shoulder"] + left_hand)
            extras["right_elbow"] = 0.5 * (extras["right_shoulder"] + right_hand)
            extras["left_wrist"] = 0.85 * left_hand + 0.15 * extras["left_elbow"]
            extras["right_wrist"] = 0.85 * right_hand + 0.15 * extras["right_elbow"]
            for name in EXTRA_JOINTS[: self.extra_joints]:
                joints[name] = extras[name]

        names = CANONICAL_JOINTS + EXTRA_JOINTS[: self.extra_joints]
        frames = np.stack([joints[name] for name in names], axis=1)
        frames = frames + self.rng.normal(0.0, NOISE_STD, frames.shape)

        capture = Capture(fps=fps, joints=names, frames=frames, start_time=start_time)
        return capture, merge_labels(self.labels)


def _single_segment_script(spec: ScenarioSpec, builder: _SegmentBuilder):
    fps = spec.fps
    if spec.scenario == "clean_walk":
        builder.add_walking(spec.duration_s)
    elif spec.scenario == "freeze_walk":
        dur_frames = round(spec.freeze_duration_s * fps)
        # freeze onsets sit on the stride grid so every inter-freeze stretch
        # can keep its boundary frames at swing peak
        stride_frames = round(fps / STRIDE_HZ)
        windows = []
        a = round(0.3 * spec.duration_s * fps)
        for _ in range(spec.freeze_count):
            b = a + dur_frames
            windows.append((a / fps, (b - a) / fps))
            gap = max(1, round(5.0 * fps / stride_frames)) * stride_frames + 1
            a = b + gap
        if windows and (windows[-1][0] + spec.freeze_duration_s) * fps >= spec.duration_s * fps - fps:
            raise SpecError("freezes do not fit in the requested duration")
        builder.add_walking(spec.duration_s, freezes=windows)
    elif spec.scenario == "fall_stand":
        if spec.duration_s < 8:
            raise SpecError("fall_stand needs at least 8 seconds")
        builder.add_standing(spec.duration_s, fall_at_s=round(0.4 * spec.duration_s))
    elif spec.scenario == "imbalanced_arm_walk":
        builder.add_walking(spec.duration_s, arm_ratio=spec.arm_ratio)
    elif spec.scenario == "weight_bias_walk":
        builder.add_walking(spec.duration_s, weight_bias=spec.weight_bias)
    elif spec.scenario == "slow_sit_to_stand":
        if spec.duration_s < 16:
            raise SpecError("slow_sit_to_stand needs at least 16 seconds")
        transfer = 12.0
        rest = spec.duration_s - transfer
        builder.add_sitting(round(rest / 2 * fps) / fps)
        builder.add_transfer("sit_to_stand", transfer, slow=True)
        builder.add_standing(spec.duration_s - round(rest / 2 * fps) / fps - transfer)
    else:
        raise SpecError(f"scenario {spec.scenario!r} is not a single-segment scenario")


def generate(spec: ScenarioSpec) -> tuple[Capture, list[ActionLabel], DeficitTruth]:
    """One-segment synthesis for every scenario except composite_day."""
    if spec.scenario == "composite_day":
        raise SpecError("composite_day generates multiple segments; use composite_day()")
    rng = np.random.default_rng(spec.seed)
    builder = _SegmentBuilder(spec.fps, 0, rng, extra_joints=spec.extra_joints)
    # block durations must land on whole frames
    if abs(round(spec.duration_s * spec.fps) - spec.duration_s * spec.fps) > 1e-9:
        raise SpecError("duration_s must be a whole number of frames")
    _single_segment_script(spec, builder)
    capture, labels = builder.build(BASE_START)
    truth = DeficitTruth(
        deficits=tuple(builder.deficits),
        schedule=tuple(
            ScheduleEntry(l.action, 0, l.start_frame, l.end_frame) for l in labels
        ),
    )
    return capture, labels, truth


def composite_day(
    seed: int = 0, fps: float = 30.0, extra_joints: int = 0
) -> tuple[list[tuple[Capture, list[ActionLabel], datetime]], DeficitTruth]:
    """A four-segment, ~50-minute day containing all seven actions.

    Injected deficits: three gait freezes in three separate walking
    events, one fall inside a standing event, two walking events with
    one-sided arm swing, one laterally biased standing event, and one
    slow sit-to-stand. Everything else stays well clear of the default
    filter thresholds.
    """
    rng = np.random.default_rng(seed)
    segments: list[tuple[Capture, list[ActionLabel], datetime]] = []
    deficits: list[Deficit] = []
    schedule: list[ScheduleEntry] = []

    starts_s = (0.0, 840.0, 1740.0, 2550.0)  # 720+gap, 780+gap, 750+gap, 750

    for index in range(4):
        b = _SegmentBuilder(fps, index, rng, extra_joints=extra_joints)
        if index == 0:
            b.add_sitting(180)
            b.add_transfer("sit_to_stand", 2.5)
            b.add_standing(30)
            b.add_walking(120, freezes=[(40.0, 1.5)])
            b.add_standing(20, weight_bias=0.06)
            b.add_walking(90, arm_ratio=3.0)
            b.add_reaching(15)
            b.add_standing(15)
            b.add_taking_medicine(25)
            b.add_walking(60)
            b.add_transfer("stand_to_sit", 2.5)
            b.add_sitting(160)
        elif index == 1:
            b.add_sitting(200)
            b.add_transfer("sit_to_stand", 12, slow=True)
            b.add_standing(25)
            b.add_walking(150, freezes=[(50.0, 2.0)])
            b.add_reaching(20)
            b.add_walking(100, arm_ratio=3.0)
            b.add_standing(40, fall_at_s=15.0)
            b.add_walking(70)
            b.add_transfer("stand_to_sit", 3)
            b.add_sitting(160)
        elif index == 2:
            b.add_standing(20)
            b.add_walking(180, freezes=[(60.0, 2.5)])
            b.add_standing(30)
            b.add_taking_medicine(20)
            b.add_walking(120)
            b.add_transfer("stand_to_sit", 2.5)
            b.add_sitting(300)
            b.add_transfer("sit_to_stand", 2.5)
            b.add_standing(15)
            b.add_walking(60)
        else:
            b.add_sitting(150)
            b.add_transfer("sit_to_stand", 2.5)
            b.add_walking(200)
            b.add_reaching(25)
            b.add_standing(30)
            b.add_walking(150)
            b.add_standing(25)
            b.add_transfer("stand_to_sit", 2.5)
            b.add_sitting(165)
        start_time = BASE_START + timedelta(seconds=starts_s[index])
        capture, labels = b.build(start_time)
        segments.append((capture, labels, start_time))
        deficits.extend(b.deficits)
        schedule.extend(
            ScheduleEntry(l.action, index, l.start_frame, l.end_frame) for l in labels
        )

    return segments, DeficitTruth(tuple(deficits), tuple(schedule))


def build_dataset(
    segments: list[tuple[Capture, list[ActionLabel], datetime]], dataset_id: str
) -> Dataset:
    """In-memory Dataset from generator output, bypassing file round-trips."""
    return Dataset(
        dataset_id,
        [
            Segment(index=i, capture=c, labels=list(l), wall_clock_start=t)
            for i, (c, l, t) in enumerate(segments)
        ],
    )


def write_files(
    out_dir: str | Path,
    segments: list[tuple[Capture, list[ActionLabel], datetime]],
    truth: DeficitTruth,
    dataset_id: str,
) -> dict[str, Path]:
    """Write capture/label pairs, the manifest, and truth.json."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    manifest_segments = []
    paths: dict[str, Path] = {}
    for i, (capture, labels, start_time) in enumerate(segments):
        cap_name = f"capture_{i}.json"
        lab_name = f"labels_{i}.json"
        (out / cap_name).write_bytes(serialize_capture(capture))
        (out / lab_name).write_bytes(serialize_labels(labels))
        paths[cap_name] = out / cap_name
        paths[lab_name] = out / lab_name
        manifest_segments.append(ManifestSegment(cap_name, lab_name, start_time))
    manifest = SegmentManifest(dataset_id=dataset_id,
                               segments=tuple(manifest_segments), base_dir=out)
    (out / "manifest.json").write_bytes(serialize_manifest(manifest))
    (out / "truth.json").write_bytes(serialize_truth(truth))
    paths["manifest.json"] = out / "manifest.json"
    paths["truth.json"] = out / "truth.json"
    return paths


def synthesize(spec: ScenarioSpec, out_dir: str | Path | None = None):
    """Generate a scenario; write files when out_dir is given.

    Returns (segments, truth, dataset_id) where segments is a list of
    (Capture, labels, wall_clock_start) tuples.
    """
    if spec.scenario == "composite_day":
        segments, truth = composite_day(spec.seed, spec.fps, spec.extra_joints)
        dataset_id = f"synthetic-day-{spec.seed}"
    else:
        capture, labels, truth = generate(spec)
        segments = [(capture, labels, BASE_START)]
        dataset_id = f"{spec.scenario}-{spec.seed}"
    if out_dir is not None:
        write_files(out_dir, segments, truth, dataset_id)
    return segments, truth, dataset_id
