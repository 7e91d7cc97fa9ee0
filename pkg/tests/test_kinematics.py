import math

import numpy as np
import pytest

from motion_insight.config import AnalysisConfig
from motion_insight.errors import DegenerateFrame, DegenerateTrunk, FeetCoincident
from motion_insight.kinematics import (
    EPS,
    VARIABLES,
    arm_use,
    compute_series,
    foot_position,
    pelvis_frame,
    trunk_angle,
    weight_shift,
)
from motion_insight.model import Capture
from motion_insight.synthgen import ScenarioSpec, generate

from conftest import random_pose, transform_pose
from oracles import body_variables, frame_axes


def variables_of(pose, forward_flip=False, weight_literal=False):
    frame = pelvis_frame(pose["pelvis"], pose["left_hip"], forward_flip)
    wl, wr = weight_shift(pose["pelvis"], pose["left_foot"], pose["right_foot"],
                          frame, weight_literal)
    return {
        "trunk": trunk_angle(pose["pelvis"], pose["neck"], frame),
        "arm_l": arm_use(pose["pelvis"], pose["left_hand"], frame),
        "arm_r": arm_use(pose["pelvis"], pose["right_hand"], frame),
        "foot_l": foot_position(pose["pelvis"], pose["left_foot"], frame),
        "foot_r": foot_position(pose["pelvis"], pose["right_foot"], frame),
        "weight_l": wl,
        "weight_r": wr,
    }


def assert_close(a, b, rtol, context=""):
    scale = max(abs(a), abs(b))
    assert abs(a - b) <= rtol * scale, f"{context}: {a} vs {b} (rtol {rtol})"


class TestLocalFrame:
    def test_axes_orthonormal_and_horizontal(self):
        rng = np.random.default_rng(11)
        for _ in range(200):
            pose = random_pose(rng)
            frame = pelvis_frame(pose["pelvis"], pose["left_hip"])
            assert frame.y_hat.tolist() == [0.0, 1.0, 0.0]
            assert frame.x_hat[1] == 0.0 and frame.z_hat[1] == 0.0
            assert abs(np.dot(frame.x_hat, frame.x_hat) - 1.0) < 1e-12
            assert abs(np.dot(frame.z_hat, frame.z_hat) - 1.0) < 1e-12
            # exact by construction: (xz, -xx) is a quarter-turn of (xx, xz),
            # so the two cross terms are the same product with opposite signs
            # (np.dot may use FMA and leave a one-ulp residue, so expand it)
            cross = (frame.x_hat[0] * frame.z_hat[0]
                     + frame.x_hat[2] * frame.z_hat[2])
            assert cross == 0.0

    def test_z_is_y_cross_x(self):
        rng = np.random.default_rng(12)
        for _ in range(100):
            pose = random_pose(rng)
            frame = pelvis_frame(pose["pelvis"], pose["left_hip"])
            cross = np.cross(frame.y_hat, frame.x_hat)
            assert np.allclose(cross, frame.z_hat, atol=1e-15)

    def test_matches_oracle_axes(self):
        rng = np.random.default_rng(13)
        for _ in range(100):
            pose = random_pose(rng)
            for flip in (False, True):
                frame = pelvis_frame(pose["pelvis"], pose["left_hip"], flip)
                ox, _, oz = frame_axes(pose["pelvis"], pose["left_hip"], flip)
                assert np.allclose(frame.x_hat, ox, rtol=0, atol=1e-14)
                assert np.allclose(frame.z_hat, oz, rtol=0, atol=1e-14)

    def test_forward_flip_negates_z(self):
        rng = np.random.default_rng(14)
        pose = random_pose(rng)
        plain = pelvis_frame(pose["pelvis"], pose["left_hip"], forward_flip=False)
        flipped = pelvis_frame(pose["pelvis"], pose["left_hip"], forward_flip=True)
        assert np.array_equal(flipped.z_hat, -plain.z_hat)
        assert np.array_equal(flipped.x_hat, plain.x_hat)

    def test_degenerate_when_hip_under_pelvis(self):
        pelvis = [0.0, 1.0, 0.0]
        with pytest.raises(DegenerateFrame):
            pelvis_frame(pelvis, [0.0, 0.9, 0.0])
        # horizontal offset exactly at the epsilon is still degenerate
        with pytest.raises(DegenerateFrame):
            pelvis_frame(pelvis, [EPS, 0.9, 0.0])
        pelvis_frame(pelvis, [2 * EPS, 0.9, 0.0])  # just above: fine

    def test_degenerate_when_not_finite(self):
        with pytest.raises(DegenerateFrame):
            pelvis_frame([0.0, 1.0, np.nan], [0.1, 0.9, 0.0])
        with pytest.raises(DegenerateFrame):
            pelvis_frame([0.0, 1.0, 0.0], [np.inf, 0.9, 0.0])


class TestPerFrameOps:
    def test_matches_scalar_oracle(self):
        rng = np.random.default_rng(21)
        for _ in range(300):
            pose = random_pose(rng)
            got = variables_of(pose)
            want = body_variables(pose)
            for name in VARIABLES:
                assert_close(got[name], want[name], 1e-12, name)

    def test_flag_combinations_match_oracle(self):
        rng = np.random.default_rng(22)
        for flip in (False, True):
            for literal in (False, True):
                pose = random_pose(rng)
                got = variables_of(pose, flip, literal)
                want = body_variables(pose, flip, literal)
                for name in VARIABLES:
                    assert_close(got[name], want[name], 1e-12, name)

    def test_trunk_reference_angles(self):
        pelvis = [0.0, 1.0, 0.0]
        frame = pelvis_frame(pelvis, [-0.1, 0.95, 0.0])
        assert trunk_angle(pelvis, [0.0, 1.5, 0.0], frame) == 0.0
        assert abs(trunk_angle(pelvis, [0.5, 1.0, 0.0], frame) - 90.0) < 1e-9
        assert abs(trunk_angle(pelvis, [0.3, 1.3, 0.0], frame) - 45.0) < 1e-9
        assert abs(trunk_angle(pelvis, [0.0, 0.5, 0.0], frame) - 180.0) < 1e-9

    def test_trunk_independent_of_frame(self):
        pelvis, neck = [1.0, 1.0, -2.0], [1.1, 1.45, -1.9]
        f1 = pelvis_frame(pelvis, [0.8, 0.95, -2.0])
        f2 = pelvis_frame(pelvis, [1.0, 0.95, -1.7])
        assert trunk_angle(pelvis, neck, f1) == trunk_angle(pelvis, neck, f2)

    def test_trunk_degenerate(self):
        with pytest.raises(DegenerateTrunk):
            trunk_angle([0.0, 1.0, 0.0], [0.0, 1.0, 0.0], None)
        with pytest.raises(DegenerateTrunk):
            trunk_angle([0.0, 1.0, 0.0], [np.nan, 1.5, 0.0], None)

    def test_arm_use_unsigned(self):
        pelvis = [0.0, 1.0, 0.0]
        frame = pelvis_frame(pelvis, [-0.1, 0.95, 0.0])  # z_hat = (0, 0, -1)
        ahead = arm_use(pelvis, [0.2, 0.8, -0.4], frame)
        behind = arm_use(pelvis, [0.2, 0.8, 0.4], frame)
        assert ahead == behind == 0.4

    def test_foot_position_signed(self):
        pelvis = [0.0, 1.0, 0.0]
        frame = pelvis_frame(pelvis, [-0.1, 0.95, 0.0])
        assert foot_position(pelvis, [0.1, 0.05, -0.3], frame) == 0.3
        assert foot_position(pelvis, [0.1, 0.05, 0.3], frame) == -0.3
        flipped = pelvis_frame(pelvis, [-0.1, 0.95, 0.0], forward_flip=True)
        assert foot_position(pelvis, [0.1, 0.05, -0.3], flipped) == -0.3

    def test_weight_shift_toward_nearer_foot(self):
        # pelvis displaced toward the left foot -> left side carries more
        pelvis = [-0.05, 1.0, 0.0]
        frame = pelvis_frame(pelvis, [-0.15, 0.95, 0.0])
        wl, wr = weight_shift(pelvis, [-0.1, 0.05, 0.0], [0.1, 0.05, 0.0], frame)
        assert abs(wl - 0.75) < 1e-12
        assert abs(wr - 0.25) < 1e-12

    def test_weight_literal_flag_swaps_convention(self):
        pelvis = [-0.05, 1.0, 0.0]
        frame = pelvis_frame(pelvis, [-0.15, 0.95, 0.0])
        wl, wr = weight_shift(pelvis, [-0.1, 0.05, 0.0], [0.1, 0.05, 0.0], frame,
                              weight_literal=True)
        assert abs(wl - 0.25) < 1e-12
        assert abs(wr - 0.75) < 1e-12

    def test_weight_sums_to_one(self):
        rng = np.random.default_rng(23)
        for _ in range(200):
            pose = random_pose(rng)
            got = variables_of(pose)
            assert abs(got["weight_l"] + got["weight_r"] - 1.0) <= 1e-9

    def test_feet_coincident(self):
        pelvis = [0.0, 1.0, 0.0]
        frame = pelvis_frame(pelvis, [-0.1, 0.95, 0.0])
        # both feet sagittally displaced only: zero coronal distance each
        with pytest.raises(FeetCoincident):
            weight_shift(pelvis, [0.0, 0.05, -0.2], [0.0, 0.05, 0.3], frame)


class TestInvariance:
    def test_rotation_translation(self):
        rng = np.random.default_rng(31)
        for _ in range(200):
            pose = random_pose(rng)
            moved = transform_pose(pose, rng.uniform(0, 2 * math.pi),
                                   rng.uniform(-10, 10, size=3))
            a, b = variables_of(pose), variables_of(moved)
            for name in VARIABLES:
                assert_close(a[name], b[name], 1e-6, name)

    def test_mirror_swaps_sides(self):
        rng = np.random.default_rng(32)
        swap = {"left_hip": "right_hip", "right_hip": "left_hip",
                "left_hand": "right_hand", "right_hand": "left_hand",
                "left_foot": "right_foot", "right_foot": "left_foot",
                "pelvis": "pelvis", "neck": "neck"}
        for _ in range(200):
            pose = random_pose(rng)
            x_hat, _, _ = frame_axes(pose["pelvis"], pose["left_hip"])
            x_hat = np.asarray(x_hat)
            pelvis = pose["pelvis"]

            def reflect(q):
                return q - 2.0 * np.dot(q - pelvis, x_hat) * x_hat

            mirrored = {name: reflect(pose[swap[name]]) for name in pose}
            a, b = variables_of(pose), variables_of(mirrored)
            for left, right in (("arm_l", "arm_r"), ("foot_l", "foot_r"),
                                ("weight_l", "weight_r")):
                assert abs(a[left] - b[right]) <= 1e-9
                assert abs(a[right] - b[left]) <= 1e-9
            assert abs(a["trunk"] - b["trunk"]) <= 1e-9


def build_capture(joints_arrays, fps=30.0):
    names = tuple(joints_arrays)
    stacked = np.stack([np.asarray(joints_arrays[n], dtype=np.float64) for n in names],
                       axis=1)
    return Capture(fps=fps, joints=names, frames=stacked)


def eight_joint_pose_frames(n, pose):
    return {name: np.tile(pose[name], (n, 1)) for name in pose}


class TestComputeSeries:
    def test_equals_per_frame_ops_exactly(self):
        capture, _, _ = generate(ScenarioSpec("clean_walk", duration_s=30, seed=3))
        series = compute_series(capture)
        assert series.valid.all()
        for i in range(0, capture.n_frames, 37):
            pose = {name: capture.joint(name)[i] for name in capture.joints}
            want = variables_of(pose)
            for name in VARIABLES:
                assert series.values(name)[i] == want[name], (name, i)

    def test_respects_flags(self):
        capture, _, _ = generate(ScenarioSpec("clean_walk", duration_s=10, seed=4))
        flipped = compute_series(capture, AnalysisConfig(forward_flip=True))
        literal = compute_series(capture, AnalysisConfig(weight_literal=True))
        plain = compute_series(capture)
        assert np.array_equal(flipped.foot_l, -plain.foot_l)
        assert np.array_equal(literal.weight_l, plain.weight_r)

    def test_axis_fallback_bridges_short_gaps(self):
        rng = np.random.default_rng(41)
        pose = random_pose(rng)
        frames = eight_joint_pose_frames(40, pose)
        # five frames of hip directly under the pelvis: finite but degenerate
        for i in range(10, 15):
            frames["left_hip"][i] = pose["pelvis"] + np.array([0.0, -0.05, 0.0])
        capture = build_capture(frames)
        series = compute_series(capture)
        assert series.valid.all()
        for i in range(10, 15):
            assert series.axis_xx[i] == series.axis_xx[9]
            assert series.axis_zz[i] == series.axis_zz[9]
            assert series.trunk[i] == series.trunk[9]

    def test_axis_fallback_expires_after_horizon(self):
        rng = np.random.default_rng(42)
        pose = random_pose(rng)
        frames = eight_joint_pose_frames(40, pose)
        for i in range(10, 18):  # 8-frame degenerate run, horizon is 5
            frames["left_hip"][i] = pose["pelvis"] + np.array([0.0, -0.05, 0.0])
        capture = build_capture(frames)
        series = compute_series(capture)
        assert series.valid[10:15].all()
        assert not series.valid[15:18].any()
        assert series.valid[18:].all()
        assert np.isnan(series.trunk[15:18]).all()

    def test_leading_degenerate_frames_have_no_fallback(self):
        rng = np.random.default_rng(43)
        pose = random_pose(rng)
        frames = eight_joint_pose_frames(10, pose)
        for i in range(3):
            frames["left_hip"][i] = pose["pelvis"] + np.array([0.0, -0.05, 0.0])
        capture = build_capture(frames)
        series = compute_series(capture)
        assert not series.valid[:3].any()
        assert series.valid[3:].all()

    def test_missing_joint_invalidates_frame(self):
        rng = np.random.default_rng(44)
        pose = random_pose(rng)
        frames = eight_joint_pose_frames(10, pose)
        frames["neck"][4] = np.nan
        capture = build_capture(frames)
        series = compute_series(capture)
        assert not series.valid[4]
        assert np.isnan(series.weight_l[4])  # every output channel nulled
        assert series.valid[5:].all()

    def test_suspect_flags_outsized_reach_but_keeps_value(self):
        rng = np.random.default_rng(45)
        pose = random_pose(rng)
        frames = eight_joint_pose_frames(10, pose)
        _, _, z_hat = frame_axes(pose["pelvis"], pose["left_hip"])
        frames["left_hand"][6] = pose["pelvis"] + 2.5 * np.asarray(z_hat)
        capture = build_capture(frames)
        series = compute_series(capture)
        assert series.valid[6] and series.suspect[6]
        assert not series.suspect[5]
        assert abs(series.arm_l[6] - 2.5) < 1e-9

    def test_empty_capture(self):
        rng = np.random.default_rng(46)
        pose = random_pose(rng)
        frames = eight_joint_pose_frames(0, pose)
        series = compute_series(build_capture(frames))
        assert series.n_frames == 0
        assert series.valid.shape == (0,)

    def test_rerun_is_bit_identical(self):
        capture, _, _ = generate(ScenarioSpec("freeze_walk", duration_s=20, seed=5))
        a = compute_series(capture)
        b = compute_series(capture)
        for name in VARIABLES:
            assert a.values(name).tobytes() == b.values(name).tobytes()
        assert np.array_equal(a.valid, b.valid)
