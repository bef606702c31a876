"""Per-clip motion-quality metrics.

All metrics operate on global joint positions in meters, Y-up, ground plane
at y = 0, and are pure functions of their inputs.

Motion intensity is summarized by a dynamic score combining two terms:

* temporal: mean joint speed, ``(1 / (F * J)) * sum_t sum_j ||v[t, j]||``
  with velocities in meters per frame
* spatial: mean per-joint range of motion,
  ``(1 / J) * sum_j || max_t p[t, j] - min_t p[t, j] ||`` where max and min
  are taken per axis before the norm

and a weighted sum ``w_v * temporal + w_r * spatial`` with default weights
(0.7, 0.3).

Units: foot skating is meters per frame; ground penetration and floating are
meters; jerk is meters per second cubed (the per-frame value times fps^3);
acceleration peaks is exceedances per second of clip duration.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import JointVelocities, MotionSequence, Skeleton
from .errors import NoFootJoints, ShapeMismatch, TooFewFrames
from .kinematics import finite_differences

DEFAULT_TEMPORAL_WEIGHT = 0.7
DEFAULT_SPATIAL_WEIGHT = 0.3
DEFAULT_CONTACT_HEIGHT = 0.05  # m: foot below this counts as ground contact
DEFAULT_FLOAT_HEIGHT = 0.05  # m: lowest joint above this counts as floating
DEFAULT_ACCEL_PEAK_THRESHOLD = 2.0  # m/s^2


@dataclass(frozen=True)
class DynamicScoreConfig:
    """Weights for the dynamic score. Both must be non-negative, not both 0."""

    temporal_weight: float = DEFAULT_TEMPORAL_WEIGHT
    spatial_weight: float = DEFAULT_SPATIAL_WEIGHT

    def __post_init__(self):
        if self.temporal_weight < 0 or self.spatial_weight < 0:
            raise ValueError("weights must be non-negative")
        if self.temporal_weight == 0 and self.spatial_weight == 0:
            raise ValueError("at least one weight must be positive")


@dataclass(frozen=True)
class DynamicScoreResult:
    s_temporal: float
    s_spatial: float
    s_dynamic: float


@dataclass(frozen=True)
class PhysicalMetricConfig:
    """Thresholds (meters, m/s^2) and foot joints for the contact metrics."""

    foot_joints: tuple = ()
    contact_height: float = DEFAULT_CONTACT_HEIGHT
    float_height: float = DEFAULT_FLOAT_HEIGHT
    accel_peak_threshold: float = DEFAULT_ACCEL_PEAK_THRESHOLD

    def __post_init__(self):
        object.__setattr__(self, "foot_joints", tuple(int(j) for j in self.foot_joints))
        if self.contact_height <= 0:
            raise ValueError("contact_height must be positive")
        if self.float_height <= 0:
            raise ValueError("float_height must be positive")
        if self.accel_peak_threshold <= 0:
            raise ValueError("accel_peak_threshold must be positive")

    @classmethod
    def for_skeleton(cls, skeleton: Skeleton, **overrides) -> "PhysicalMetricConfig":
        return cls(foot_joints=skeleton.foot_joints, **overrides)


def dynamic_score(
    motion: MotionSequence,
    velocities: JointVelocities,
    config: DynamicScoreConfig = DynamicScoreConfig(),
) -> DynamicScoreResult:
    """Intensity score from mean joint speed and mean per-joint travel range.

    ``velocities`` must match the motion's (F, J, 3) shape; pass the order-1
    forward differences (meters per frame). The combined score is exactly
    ``temporal_weight * s_temporal + spatial_weight * s_spatial``.
    """
    if velocities.values.shape != motion.positions.shape:
        raise ShapeMismatch(
            f"velocities {velocities.values.shape} vs motion {motion.positions.shape}"
        )
    speeds = np.linalg.norm(velocities.values, axis=2)
    s_temporal = float(speeds.mean())
    spans = motion.positions.max(axis=0) - motion.positions.min(axis=0)
    s_spatial = float(np.linalg.norm(spans, axis=1).mean())
    s_dynamic = config.temporal_weight * s_temporal + config.spatial_weight * s_spatial
    return DynamicScoreResult(s_temporal, s_spatial, float(s_dynamic))


def foot_skating(motion: MotionSequence, config: PhysicalMetricConfig) -> float:
    """Mean horizontal slide of grounded feet, meters per frame.

    For every frame transition t-1 -> t and every foot joint whose height at
    frame t is below ``contact_height``, the XZ displacement enters the sum;
    feet in the air contribute nothing. The sum is divided by the number of
    transitions (F - 1) regardless of how many were in contact, so a clip
    with no grounded feet scores exactly 0.
    """
    if not config.foot_joints:
        raise NoFootJoints("foot_skating needs at least one foot joint")
    if motion.num_frames < 2:
        raise TooFewFrames("foot_skating needs at least 2 frames")
    feet = list(config.foot_joints)
    pos = motion.positions[:, feet]
    delta = np.diff(pos[:, :, (0, 2)], axis=0)
    slide = np.linalg.norm(delta, axis=2)
    contact = pos[1:, :, 1] < config.contact_height
    return float((slide * contact).sum() / (motion.num_frames - 1))


def ground_penetration(motion: MotionSequence) -> float:
    """Mean depth of the lowest joint below the ground plane, meters.

    Per frame: ``max(0, -min_j y)``; averaged over frames. Zero whenever no
    joint ever dips below y = 0.
    """
    lows = motion.positions[:, :, 1].min(axis=1)
    return float(np.maximum(0.0, -lows).mean())


def floating(motion: MotionSequence, config: PhysicalMetricConfig) -> float:
    """Mean height of the lowest joint above the float threshold, meters.

    Per frame: ``max(0, min_j y - float_height)``; averaged over frames.
    Zero when some joint stays near or on the ground each frame.
    """
    lows = motion.positions[:, :, 1].min(axis=1)
    return float(np.maximum(0.0, lows - config.float_height).mean())


def jerk(motion: MotionSequence) -> float:
    """Mean third-derivative magnitude, meters per second cubed.

    Order-3 forward differences (padded to F frames by repeating the last
    valid entry) give meters per frame cubed; the mean joint-wise norm is
    scaled by fps^3. Quadratic trajectories have exactly zero jerk.
    """
    if motion.num_frames < 4:
        raise TooFewFrames("jerk needs at least 4 frames")
    d3 = finite_differences(motion, order=3).values
    per_frame = float(np.linalg.norm(d3, axis=2).mean())
    return per_frame * motion.fps**3


def acceleration_peaks(motion: MotionSequence, config: PhysicalMetricConfig) -> float:
    """Rate of acceleration spikes, exceedances per second.

    A frame counts when its largest per-joint acceleration norm (order-2
    forward difference times fps^2, valid frames only) exceeds
    ``accel_peak_threshold``. The count is divided by the clip duration
    ``F / fps`` in seconds.
    """
    if motion.num_frames < 3:
        raise TooFewFrames("acceleration_peaks needs at least 3 frames")
    d2 = np.diff(motion.positions, n=2, axis=0)
    accel = np.linalg.norm(d2, axis=2) * motion.fps**2
    peaks = int((accel.max(axis=1) > config.accel_peak_threshold).sum())
    return peaks / motion.duration_seconds


def clip_metrics(
    motion: MotionSequence,
    config: PhysicalMetricConfig,
    dynamic_config: DynamicScoreConfig = DynamicScoreConfig(),
) -> dict:
    """All per-clip metrics as one flat mapping, ready for a report row.

    Includes the dynamic score and its two components, and jerk in both unit
    systems (``jerk`` in m/s^3, ``jerk_per_frame`` in m/frame^3).
    """
    velocities = finite_differences(motion, order=1)
    score = dynamic_score(motion, velocities, dynamic_config)
    jerk_per_second = jerk(motion)
    return {
        "dynamic_score": score.s_dynamic,
        "dynamic_temporal": score.s_temporal,
        "dynamic_spatial": score.s_spatial,
        "foot_skating": foot_skating(motion, config),
        "ground_penetration": ground_penetration(motion),
        "floating": floating(motion, config),
        "jerk": jerk_per_second,
        "jerk_per_frame": jerk_per_second / motion.fps**3,
        "acceleration_peaks": acceleration_peaks(motion, config),
    }
