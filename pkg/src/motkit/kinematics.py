"""Skeleton kinematics: forward kinematics, derivatives, resampling,
canonical pose alignment.

Quaternions are stored ``(w, x, y, z)``. Rotations compose left to right
down the kinematic chain: a joint's global rotation is its parent's global
rotation followed by its own local rotation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import JointVelocities, MotionSequence, Skeleton
from .errors import BadQuaternion, DegenerateFacing, JointCountMismatch, TooFewFrames

UP_AXIS = np.array([0.0, 1.0, 0.0])


# ---------------------------------------------------------------------------
# quaternion helpers


def quat_multiply(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Hamilton product of (..., 4) quaternion arrays."""
    aw, ax, ay, az = a[..., 0], a[..., 1], a[..., 2], a[..., 3]
    bw, bx, by, bz = b[..., 0], b[..., 1], b[..., 2], b[..., 3]
    return np.stack(
        [
            aw * bw - ax * bx - ay * by - az * bz,
            aw * bx + ax * bw + ay * bz - az * by,
            aw * by - ax * bz + ay * bw + az * bx,
            aw * bz + ax * by - ay * bx + az * bw,
        ],
        axis=-1,
    )


def quat_rotate(q: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Rotate vectors ``v`` (..., 3) by unit quaternions ``q`` (..., 4)."""
    xyz = q[..., 1:]
    t = 2.0 * np.cross(xyz, v)
    return v + q[..., :1] * t + np.cross(xyz, t)


def quat_from_axis_angle(axis, angle: float) -> np.ndarray:
    axis = np.asarray(axis, dtype=np.float64)
    axis = axis / np.linalg.norm(axis)
    half = 0.5 * angle
    return np.concatenate([[math.cos(half)], math.sin(half) * axis])


def quat_slerp(q0: np.ndarray, q1: np.ndarray, t) -> np.ndarray:
    """Shortest-arc spherical interpolation, elementwise over leading axes."""
    q0 = np.asarray(q0, dtype=np.float64)
    q1 = np.asarray(q1, dtype=np.float64).copy()
    t = np.asarray(t, dtype=np.float64)[..., None]
    dot = np.sum(q0 * q1, axis=-1, keepdims=True)
    q1 = np.where(dot < 0.0, -q1, q1)
    dot = np.abs(dot)
    # nearly parallel: fall back to normalized lerp
    close = dot > 1.0 - 1e-9
    dot = np.clip(dot, -1.0, 1.0)
    theta = np.arccos(dot)
    sin_theta = np.sin(theta)
    with np.errstate(divide="ignore", invalid="ignore"):
        w0 = np.where(close, 1.0 - t, np.sin((1.0 - t) * theta) / sin_theta)
        w1 = np.where(close, t, np.sin(t * theta) / sin_theta)
    out = w0 * q0 + w1 * q1
    return out / np.linalg.norm(out, axis=-1, keepdims=True)


# ---------------------------------------------------------------------------
# pose sequences and forward kinematics


@dataclass(frozen=True)
class PoseSequence:
    """Root trajectory plus local joint rotations, the input side of FK.

    ``root_translation`` is (F, 3), ``joint_rotations`` is (F, J, 4) and must
    be unit-norm within 1e-6 (it is renormalized exactly at construction).
    """

    root_translation: np.ndarray
    joint_rotations: np.ndarray
    fps: float

    def __post_init__(self):
        trans = np.array(self.root_translation, dtype=np.float64)
        rots = np.array(self.joint_rotations, dtype=np.float64)
        if trans.ndim != 2 or trans.shape[1] != 3:
            raise ValueError(f"root_translation must be (F, 3), got {trans.shape}")
        if rots.ndim != 3 or rots.shape[2] != 4:
            raise ValueError(f"joint_rotations must be (F, J, 4), got {rots.shape}")
        if trans.shape[0] != rots.shape[0]:
            raise ValueError("translation and rotations disagree on frame count")
        if not (np.isfinite(trans).all() and np.isfinite(rots).all()):
            raise ValueError("pose sequence contains NaN or Inf")
        norms = np.linalg.norm(rots, axis=-1)
        err = np.abs(norms - 1.0)
        if (err > 1e-6).any():
            raise BadQuaternion(
                f"joint rotation norm off by {float(err.max()):.3g} (limit 1e-6)"
            )
        rots = rots / norms[..., None]
        if not float(self.fps) > 0:
            raise ValueError("fps must be positive")
        trans.setflags(write=False)
        rots.setflags(write=False)
        object.__setattr__(self, "root_translation", trans)
        object.__setattr__(self, "joint_rotations", rots)
        object.__setattr__(self, "fps", float(self.fps))

    @property
    def num_frames(self) -> int:
        return self.root_translation.shape[0]

    @property
    def num_joints(self) -> int:
        return self.joint_rotations.shape[1]


def forward_kinematics(pose: PoseSequence, skeleton: Skeleton) -> MotionSequence:
    """Compute global joint positions from local rotations and rest offsets.

    For the root, position is ``root_translation`` plus the root offset
    rotated by the root's own rotation. For every other joint,
    ``position[j] = position[parent] + R_global[parent] @ offset[j]`` and
    ``R_global[j] = R_global[parent]  *  R_local[j]``. With all rotations at
    identity, joint ``j`` therefore sits at the sum of rest offsets along its
    ancestor chain (plus the root translation).
    """
    if pose.num_joints != skeleton.num_joints:
        raise JointCountMismatch(
            f"pose has {pose.num_joints} joints, skeleton has {skeleton.num_joints}"
        )
    f, j = pose.num_frames, pose.num_joints
    positions = np.empty((f, j, 3), dtype=np.float64)
    globals_q = np.empty((f, j, 4), dtype=np.float64)
    offsets = skeleton.offsets
    rots = pose.joint_rotations
    globals_q[:, 0] = rots[:, 0]
    positions[:, 0] = pose.root_translation + quat_rotate(
        rots[:, 0], np.broadcast_to(offsets[0], (f, 3))
    )
    for joint in range(1, j):
        parent = skeleton.parents[joint]
        positions[:, joint] = positions[:, parent] + quat_rotate(
            globals_q[:, parent], np.broadcast_to(offsets[joint], (f, 3))
        )
        globals_q[:, joint] = quat_multiply(globals_q[:, parent], rots[:, joint])
    return MotionSequence(positions, pose.fps)


# ---------------------------------------------------------------------------
# finite differences


def finite_differences(motion: MotionSequence, order: int = 1) -> JointVelocities:
    """Forward finite differences of joint positions, orders 1 to 3.

    The result keeps the source frame count: the trailing frames that have
    no forward difference repeat the last valid entry. Units are meters per
    frame for order 1, per frame squared for order 2, and so on.
    """
    if order not in (1, 2, 3):
        raise ValueError(f"order must be 1, 2 or 3, got {order}")
    f = motion.num_frames
    if f < order + 1:
        raise TooFewFrames(
            f"order-{order} differences need at least {order + 1} frames, got {f}"
        )
    diffs = np.diff(motion.positions, n=order, axis=0)
    pad = np.repeat(diffs[-1:], order, axis=0)
    values = np.concatenate([diffs, pad], axis=0)
    return JointVelocities(values, f"forward-diff-{order}/repeat-last")


# ---------------------------------------------------------------------------
# resampling


def resample(motion: MotionSequence, target_fps: float) -> MotionSequence:
    """Linearly resample a motion to a new frame rate.

    The output covers the same time span ``(F - 1) / fps`` with
    ``F' = round((F - 1) * target_fps / fps) + 1`` frames. First and last
    frames are copied exactly. Equal rates return the input unchanged.
    """
    if not target_fps > 0:
        raise ValueError("target_fps must be positive")
    if motion.num_frames < 2:
        raise TooFewFrames("resampling needs at least 2 frames")
    if target_fps == motion.fps:
        return motion
    f = motion.num_frames
    n_out = int(round((f - 1) * target_fps / motion.fps)) + 1
    if n_out < 2:
        return MotionSequence(motion.positions[:1], target_fps)
    # sample coordinates in source-frame units; i * (f-1) is an exact integer
    # product, so the final sample lands on f-1 with no rounding error
    s = np.arange(n_out, dtype=np.float64) * float(f - 1) / float(n_out - 1)
    k = np.minimum(s.astype(np.int64), f - 2)
    a = (s - k)[:, None, None]
    pos = motion.positions
    out = (1.0 - a) * pos[k] + a * pos[k + 1]
    return MotionSequence(out, target_fps)


def resample_rotations(
    rotations: np.ndarray, fps: float, target_fps: float
) -> np.ndarray:
    """Slerp (F, J, 4) quaternions onto the grid :func:`resample` uses."""
    rot = np.asarray(rotations, dtype=np.float64)
    f = rot.shape[0]
    if f < 2:
        raise TooFewFrames("resampling needs at least 2 frames")
    if target_fps == fps:
        return rot.copy()
    n_out = int(round((f - 1) * target_fps / fps)) + 1
    if n_out < 2:
        return rot[:1].copy()
    s = np.arange(n_out, dtype=np.float64) * float(f - 1) / float(n_out - 1)
    k = np.minimum(s.astype(np.int64), f - 2)
    a = s - k
    return quat_slerp(rot[k], rot[k + 1], a[:, None])


# ---------------------------------------------------------------------------
# canonical alignment


@dataclass(frozen=True)
class CanonicalizeConfig:
    """Joint indices and targets for canonical alignment.

    Defaults match the packaged 24-joint rig (left hip 1, right hip 2).
    ``reference_height`` is the body height every clip is scaled to;
    ``ground_window`` is how many leading frames define the floor contact.
    """

    left_hip: int = 1
    right_hip: int = 2
    reference_height: float = 1.7
    ground_window: int = 10
    degenerate_tolerance: float = 1e-6


def _facing_angle(positions_frame0: np.ndarray, config: CanonicalizeConfig) -> float:
    """Signed yaw of the facing direction relative to +Z at frame 0.

    Facing is the cross product of the hip left-right axis with the body-up
    axis, which lies in the horizontal plane by construction. A hip axis
    that is vertical leaves facing undefined.
    """
    axis = positions_frame0[config.left_hip] - positions_frame0[config.right_hip]
    norm = float(np.linalg.norm(axis))
    if norm == 0.0:
        raise DegenerateFacing("hip joints coincide; facing undefined")
    axis = axis / norm
    # cross(axis, up) = (-axis_z, 0, axis_x)
    facing = np.array([-axis[2], 0.0, axis[0]])
    if math.hypot(facing[0], facing[2]) < config.degenerate_tolerance:
        raise DegenerateFacing("hip axis is vertical; facing undefined")
    return math.atan2(facing[0], facing[2])


def canonicalize(
    motion: MotionSequence,
    skeleton: Skeleton,
    config: CanonicalizeConfig = CanonicalizeConfig(),
) -> MotionSequence:
    """Place a motion in the shared canonical frame.

    Steps, in order: translate so the frame-0 root is over the XZ origin;
    rotate about Y so the frame-0 facing direction points along +Z; shift
    vertically so the lowest foot point over the first ``ground_window``
    frames touches y = 0; scale uniformly so the body height (median over
    frames of the per-frame Y extent) equals ``reference_height``.

    The operation is idempotent and, apart from the single uniform scale,
    rigid per frame. Grounding falls back to all joints when the skeleton
    declares no foot joints.
    """
    if motion.num_joints != skeleton.num_joints:
        raise JointCountMismatch(
            f"motion has {motion.num_joints} joints, skeleton has {skeleton.num_joints}"
        )
    for idx in (config.left_hip, config.right_hip):
        if not 0 <= idx < motion.num_joints:
            raise ValueError(f"hip index {idx} out of range")
    pos = motion.positions.copy()

    root = skeleton.root_index
    pos[:, :, 0] -= float(pos[0, root, 0])
    pos[:, :, 2] -= float(pos[0, root, 2])

    angle = _facing_angle(pos[0], config)
    if angle != 0.0:
        c, s = math.cos(-angle), math.sin(-angle)
        x = pos[:, :, 0].copy()
        z = pos[:, :, 2].copy()
        pos[:, :, 0] = c * x + s * z
        pos[:, :, 2] = -s * x + c * z

    feet = skeleton.foot_joints or tuple(range(motion.num_joints))
    window = min(max(config.ground_window, 1), motion.num_frames)
    floor = float(pos[:window][:, list(feet), 1].min())
    pos[:, :, 1] -= floor

    extent = pos[:, :, 1].max(axis=1) - pos[:, :, 1].min(axis=1)
    height = float(np.median(extent))
    if height > 1e-9:
        pos *= config.reference_height / height

    return MotionSequence(pos, motion.fps)
