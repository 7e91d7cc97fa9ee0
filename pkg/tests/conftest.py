import math

import numpy as np
import pytest

from motion_insight.analysis import DatasetAnalysis
from motion_insight.synthgen import build_dataset, composite_day, write_files

COMPOSITE_SEED = 7

# verdict lines from the acceptance tests, echoed after the test summary
# (pytest's fd-level capture would swallow direct writes to stdout)
ACCEPTANCE_VERDICTS: list = []


def record_verdict(line: str) -> None:
    ACCEPTANCE_VERDICTS.append(line)


def pytest_terminal_summary(terminalreporter, exitstatus):
    if ACCEPTANCE_VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_VERDICTS:
            terminalreporter.write_line(line)


def yaw_matrix(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])


def random_pose(rng: np.random.Generator, lateral_hip: bool = True) -> dict:
    """One well-conditioned pose as a joint -> world position dict.

    Joints are placed by explicit coronal/vertical/sagittal coefficients
    in the pose's own pelvis frame, then the whole pose gets a random yaw
    and translation. The construction keeps every variable away from its
    degenerate zero so relative-error checks stay meaningful.
    """
    pelvis_local = np.array([0.0, rng.uniform(0.8, 1.2), 0.0])
    hip_dx = rng.uniform(0.05, 0.25)
    hip_dz = rng.uniform(-0.05, 0.05) if lateral_hip else 0.0
    left_hip_local = pelvis_local + np.array([-hip_dx, -0.05, -hip_dz])
    right_hip_local = pelvis_local + np.array([hip_dx, -0.05, hip_dz])

    # local frame implied by that hip placement
    d = pelvis_local - left_hip_local
    nrm = math.hypot(d[0], d[2])
    x_hat = np.array([d[0] / nrm, 0.0, d[2] / nrm])
    z_hat = np.array([x_hat[2], 0.0, -x_hat[0]])
    y_hat = np.array([0.0, 1.0, 0.0])

    def offset(coronal, height, sagittal):
        return coronal * x_hat + height * y_hat + sagittal * z_hat

    tilt = math.radians(rng.uniform(1.0, 80.0))
    azimuth = rng.uniform(0.0, 2.0 * math.pi)
    trunk_len = rng.uniform(0.3, 0.7)
    neck_local = pelvis_local + trunk_len * np.array(
        [math.sin(tilt) * math.cos(azimuth), math.cos(tilt),
         math.sin(tilt) * math.sin(azimuth)]
    )

    def limb(c_lo, c_hi, h_lo, h_hi, s_min):
        sagittal = rng.uniform(s_min, 0.8) * rng.choice([-1.0, 1.0])
        return pelvis_local + offset(rng.uniform(c_lo, c_hi), rng.uniform(h_lo, h_hi),
                                     sagittal)

    pose_local = {
        "pelvis": pelvis_local,
        "left_hip": left_hip_local,
        "right_hip": right_hip_local,
        "neck": neck_local,
        "left_hand": limb(-0.6, -0.02, -0.4, 0.6, 0.01),
        "right_hand": limb(0.02, 0.6, -0.4, 0.6, 0.01),
        "left_foot": limb(-0.5, -0.02, -1.2, -0.8, 0.01),
        "right_foot": limb(0.02, 0.5, -1.2, -0.8, 0.01),
    }

    rot = yaw_matrix(rng.uniform(0.0, 2.0 * math.pi))
    shift = rng.uniform(-5.0, 5.0, size=3)
    return {name: rot @ local + shift for name, local in pose_local.items()}


def transform_pose(pose: dict, angle: float, shift) -> dict:
    rot = yaw_matrix(angle)
    shift = np.asarray(shift, dtype=np.float64)
    return {name: rot @ p + shift for name, p in pose.items()}


@pytest.fixture(scope="session")
def composite():
    return composite_day(seed=COMPOSITE_SEED)


@pytest.fixture(scope="session")
def dataset(composite):
    segments, _ = composite
    return build_dataset(segments, "test-day")


@pytest.fixture(scope="session")
def analysis(dataset):
    return DatasetAnalysis(dataset)


@pytest.fixture(scope="session")
def truth(composite):
    return composite[1]


@pytest.fixture(scope="session")
def day_dir(composite, tmp_path_factory):
    """The composite day written out as capture/labels/manifest files."""
    segments, truth = composite
    out = tmp_path_factory.mktemp("day")
    write_files(out, segments, truth, "test-day")
    return out
