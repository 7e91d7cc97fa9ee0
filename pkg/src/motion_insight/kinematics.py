"""Pelvis-local coordinate frame and the four per-frame body variables.

All quantities derive from joint positions in a y-up world frame. The
local frame is anchored at the pelvis: x points to the subject's
anatomical right (horizontal projection of pelvis minus left hip),
y is global vertical, z = cross(y, x) points anatomically forward.

The same component-level arithmetic backs both the per-frame operations
and the vectorized series computation, so compute_series output matches
per-frame calls bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_CONFIG, AnalysisConfig
from .errors import DegenerateFrame, DegenerateTrunk, FeetCoincident
from .model import Capture

EPS = 1e-6

VARIABLES = ("trunk", "arm_l", "arm_r", "foot_l", "foot_r", "weight_l", "weight_r")

# sides paired for mirror symmetry and shared-range display
VARIABLE_PAIRS = (("arm_l", "arm_r"), ("foot_l", "foot_r"), ("weight_l", "weight_r"))


# -- shared scalar/vector arithmetic ------------------------------------------
# Each helper takes float64 scalars or equal-length arrays and applies the
# identical ufunc expression, which keeps both code paths numerically equal.


def _axes(px, pz, hx, hz, flip: bool):
    """Unit x (right) and z (forward) axis components from pelvis and left hip.

    Returns (xx, xz, zx, zz, horizontal_norm). Both axes lie in the ground
    plane, so the y components are identically zero and omitted.
    """
    dx = px - hx
    dz = pz - hz
    nrm = np.sqrt(dx * dx + dz * dz)
    xx = dx / nrm
    xz = dz / nrm
    # y cross x with y = (0,1,0): (x_z, 0, -x_x)
    if flip:
        return xx, xz, -xz, xx, nrm
    return xx, xz, xz, -xx, nrm


def _trunk_deg(tx, ty, tz):
    """Angle of the trunk vector from vertical, in degrees. Also returns |t|."""
    nrm = np.sqrt(tx * tx + ty * ty + tz * tz)
    cos = np.clip(ty / nrm, -1.0, 1.0)
    return np.degrees(np.arccos(cos)), nrm


def _sagittal(dx, dz, zx, zz):
    """Forward-axis component of a horizontal displacement."""
    return dx * zx + dz * zz


def _coronal_abs(dx, dz, xx, xz):
    """Magnitude of the right-axis component of a horizontal displacement."""
    return np.abs(dx * xx + dz * xz)


def _weight_pair(rho_l, rho_r, literal: bool):
    total = rho_l + rho_r
    if literal:
        return rho_l / total, rho_r / total
    # opposite-side numerator: the pelvis sits nearer the loaded foot, so a
    # small same-side distance means a large share on that side
    return rho_r / total, rho_l / total


# -- per-frame operations ------------------------------------------------------


@dataclass(frozen=True)
class LocalFrame:
    """Orthonormal pelvis-anchored axes; y_hat is exactly global vertical."""

    x_hat: np.ndarray
    y_hat: np.ndarray
    z_hat: np.ndarray
    valid: bool = True


def _vec(p) -> np.ndarray:
    arr = np.asarray(p, dtype=np.float64)
    if arr.shape != (3,):
        raise ValueError(f"expected a 3-vector, got shape {arr.shape}")
    return arr


def pelvis_frame(pelvis, left_hip, forward_flip: bool = False) -> LocalFrame:
    """Build the local frame for one pose.

    Raises DegenerateFrame when the pelvis sits (horizontally) on top of
    the left hip, which leaves the lateral direction undefined.
    """
    p = _vec(pelvis)
    h = _vec(left_hip)
    if not (np.isfinite(p).all() and np.isfinite(h).all()):
        raise DegenerateFrame("pelvis or left hip position is not finite")
    dx = p[0] - h[0]
    dz = p[2] - h[2]
    if np.sqrt(dx * dx + dz * dz) <= EPS:
        raise DegenerateFrame("pelvis and left hip coincide horizontally")
    xx, xz, zx, zz, _ = _axes(p[0], p[2], h[0], h[2], forward_flip)
    return LocalFrame(
        x_hat=np.array([xx, 0.0, xz]),
        y_hat=np.array([0.0, 1.0, 0.0]),
        z_hat=np.array([zx, 0.0, zz]),
    )


def trunk_angle(pelvis, neck, frame: LocalFrame | None = None) -> float:
    """Degrees of lean from vertical; 0 is fully upright, 90 horizontal.

    The local frame is accepted for signature uniformity but unused: the
    reference direction is global vertical.
    """
    p = _vec(pelvis)
    n = _vec(neck)
    t = n - p
    if not np.isfinite(t).all() or np.sqrt(t[0] * t[0] + t[1] * t[1] + t[2] * t[2]) <= EPS:
        raise DegenerateTrunk("neck coincides with pelvis")
    deg, _ = _trunk_deg(t[0], t[1], t[2])
    return float(deg)


def arm_use(pelvis, hand, frame: LocalFrame) -> float:
    """Unsigned sagittal reach of one hand from the pelvis, in meters."""
    p = _vec(pelvis)
    ha = _vec(hand)
    return float(np.abs(_sagittal(ha[0] - p[0], ha[2] - p[2], frame.z_hat[0], frame.z_hat[2])))


def foot_position(pelvis, foot, frame: LocalFrame) -> float:
    """Signed sagittal offset of one foot, positive when in front."""
    p = _vec(pelvis)
    f = _vec(foot)
    return float(_sagittal(f[0] - p[0], f[2] - p[2], frame.z_hat[0], frame.z_hat[2]))


def weight_shift(pelvis, left_foot, right_foot, frame: LocalFrame,
                 weight_literal: bool = False) -> tuple[float, float]:
    """Left/right load split in [0,1]; the two values sum to 1.

    Derived from coronal pelvis-to-foot distances. Raises FeetCoincident
    when both distances vanish and the ratio is undefined.
    """
    p = _vec(pelvis)
    fl = _vec(left_foot)
    fr = _vec(right_foot)
    rho_l = _coronal_abs(p[0] - fl[0], p[2] - fl[2], frame.x_hat[0], frame.x_hat[2])
    rho_r = _coronal_abs(p[0] - fr[0], p[2] - fr[2], frame.x_hat[0], frame.x_hat[2])
    if not np.isfinite(rho_l + rho_r) or rho_l + rho_r <= EPS:
        raise FeetCoincident("both feet are coronally under the pelvis")
    wl, wr = _weight_pair(rho_l, rho_r, weight_literal)
    return float(wl), float(wr)


# -- full-series computation ---------------------------------------------------


@dataclass(eq=False)
class BodyVariableSeries:
    """Per-frame body variables over one capture.

    Invalid frames (tracking gaps, degenerate geometry) hold NaN and are
    excluded from every downstream statistic via the valid mask. Suspect
    frames carry values that exceed the anatomical sanity bound; the values
    are kept but flagged. Axis component arrays are retained so the replay
    can reconstruct world-space variable directions.
    """

    fps: float
    trunk: np.ndarray
    arm_l: np.ndarray
    arm_r: np.ndarray
    foot_l: np.ndarray
    foot_r: np.ndarray
    weight_l: np.ndarray
    weight_r: np.ndarray
    valid: np.ndarray
    suspect: np.ndarray
    axis_xx: np.ndarray
    axis_xz: np.ndarray
    axis_zx: np.ndarray
    axis_zz: np.ndarray

    @property
    def n_frames(self) -> int:
        return self.trunk.shape[0]

    def values(self, variable: str) -> np.ndarray:
        if variable not in VARIABLES:
            raise KeyError(f"unknown body variable {variable!r}")
        return getattr(self, variable)


def compute_series(capture: Capture, config: AnalysisConfig = DEFAULT_CONFIG) -> BodyVariableSeries:
    """All body variables for all frames in one vectorized pass.

    Per-frame failures never raise here; they become invalid frames. A
    degenerate or missing pelvis frame borrows the axes of the last good
    frame when the gap is at most config.fallback_frames long.
    """
    n = capture.n_frames
    pelvis = capture.joint("pelvis")
    left_hip = capture.joint("left_hip")
    neck = capture.joint("neck")
    hand_l = capture.joint("left_hand")
    hand_r = capture.joint("right_hand")
    foot_l = capture.joint("left_foot")
    foot_r = capture.joint("right_foot")
    finite = capture.frame_valid

    if n == 0:
        empty = np.empty(0, dtype=np.float64)
        empty_b = np.empty(0, dtype=bool)
        return BodyVariableSeries(
            fps=capture.fps, trunk=empty, arm_l=empty.copy(), arm_r=empty.copy(),
            foot_l=empty.copy(), foot_r=empty.copy(), weight_l=empty.copy(),
            weight_r=empty.copy(), valid=empty_b, suspect=empty_b.copy(),
            axis_xx=empty.copy(), axis_xz=empty.copy(),
            axis_zx=empty.copy(), axis_zz=empty.copy(),
        )

    with np.errstate(invalid="ignore", divide="ignore"):
        px, pz = pelvis[:, 0], pelvis[:, 2]
        xx, xz, zx, zz, axis_nrm = _axes(px, pz, left_hip[:, 0], left_hip[:, 2],
                                         config.forward_flip)

        # frames whose own axes are usable; others borrow within the horizon
        axis_ok = np.isfinite(axis_nrm) & (axis_nrm > EPS)
        idx = np.arange(n)
        last_good = np.maximum.accumulate(np.where(axis_ok, idx, -1))
        usable = (last_good >= 0) & (idx - last_good <= config.fallback_frames)
        src = np.where(usable, last_good, 0)
        xx, xz, zx, zz = xx[src], xz[src], zx[src], zz[src]

        t = neck - pelvis
        trunk, trunk_nrm = _trunk_deg(t[:, 0], t[:, 1], t[:, 2])
        trunk_ok = np.isfinite(trunk_nrm) & (trunk_nrm > EPS)

        arm_l = np.abs(_sagittal(hand_l[:, 0] - px, hand_l[:, 2] - pz, zx, zz))
        arm_r = np.abs(_sagittal(hand_r[:, 0] - px, hand_r[:, 2] - pz, zx, zz))
        fpos_l = _sagittal(foot_l[:, 0] - px, foot_l[:, 2] - pz, zx, zz)
        fpos_r = _sagittal(foot_r[:, 0] - px, foot_r[:, 2] - pz, zx, zz)

        rho_l = _coronal_abs(px - foot_l[:, 0], pz - foot_l[:, 2], xx, xz)
        rho_r = _coronal_abs(px - foot_r[:, 0], pz - foot_r[:, 2], xx, xz)
        feet_ok = np.isfinite(rho_l + rho_r) & (rho_l + rho_r > EPS)
        weight_l, weight_r = _weight_pair(rho_l, rho_r, config.weight_literal)

    valid = finite & usable & trunk_ok & feet_ok
    bound = config.sanity_bound_m
    suspect = valid & (
        (arm_l > bound) | (arm_r > bound)
        | (np.abs(fpos_l) > bound) | (np.abs(fpos_r) > bound)
    )

    invalid = ~valid
    for arr in (trunk, arm_l, arm_r, fpos_l, fpos_r, weight_l, weight_r,
                xx, xz, zx, zz):
        arr[invalid] = np.nan

    return BodyVariableSeries(
        fps=capture.fps, trunk=trunk, arm_l=arm_l, arm_r=arm_r,
        foot_l=fpos_l, foot_r=fpos_r, weight_l=weight_l, weight_r=weight_r,
        valid=valid, suspect=suspect,
        axis_xx=xx, axis_xz=xz, axis_zx=zx, axis_zz=zz,
    )
