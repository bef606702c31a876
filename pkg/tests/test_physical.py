import math

import numpy as np
import pytest

from motkit import (
    DynamicScoreConfig,
    MotionSequence,
    PhysicalMetricConfig,
    acceleration_peaks,
    clip_metrics,
    dynamic_score,
    finite_differences,
    floating,
    foot_skating,
    ground_penetration,
    jerk,
)
from motkit.errors import NoFootJoints, ShapeMismatch, TooFewFrames

from conftest import make_motion, random_motion, static_motion


# ---------------------------------------------------------------------------
# independent oracles: explicit loops, no shared code with the implementation


def oracle_dynamic_score(positions, w_v, w_r):
    f, j, _ = positions.shape
    total_speed = 0.0
    for t in range(f):
        for jj in range(j):
            src = t if t < f - 1 else f - 2
            v = positions[src + 1, jj] - positions[src, jj]
            total_speed += math.sqrt(v[0] ** 2 + v[1] ** 2 + v[2] ** 2)
    s_temporal = total_speed / (f * j)
    total_range = 0.0
    for jj in range(j):
        sq = 0.0
        for axis in range(3):
            hi = max(positions[t, jj, axis] for t in range(f))
            lo = min(positions[t, jj, axis] for t in range(f))
            sq += (hi - lo) ** 2
        total_range += math.sqrt(sq)
    s_spatial = total_range / j
    return s_temporal, s_spatial, w_v * s_temporal + w_r * s_spatial


def oracle_foot_skating(positions, feet, contact_height):
    f = positions.shape[0]
    total = 0.0
    for t in range(1, f):
        for jj in feet:
            if positions[t, jj, 1] < contact_height:
                dx = positions[t, jj, 0] - positions[t - 1, jj, 0]
                dz = positions[t, jj, 2] - positions[t - 1, jj, 2]
                total += math.hypot(dx, dz)
    return total / (f - 1)


def sliding_feet_motion(num_frames=50):
    """Foot 0 slides 0.01 m in x per frame at ground level; foot 1 stands."""
    pos = np.zeros((num_frames, 2, 3))
    pos[:, 0, 0] = 0.01 * np.arange(num_frames)
    return MotionSequence(pos, 30.0)


FEET_CFG = PhysicalMetricConfig(foot_joints=(0, 1))


class TestDynamicScore:
    def test_static_clip_zero(self):
        m = static_motion(num_frames=40, num_joints=3)
        r = dynamic_score(m, finite_differences(m, 1))
        assert r.s_temporal == 0.0
        assert r.s_spatial == 0.0
        assert r.s_dynamic == 0.0

    def test_hand_case_single_joint(self):
        # frozen by hand: speeds all 0.1, range 0.2 in x
        m = make_motion([[[0.0, 0, 0]], [[0.1, 0, 0]], [[0.2, 0, 0]]])
        r = dynamic_score(m, finite_differences(m, 1))
        assert r.s_temporal == pytest.approx(0.1, abs=1e-12)
        assert r.s_spatial == pytest.approx(0.2, abs=1e-12)
        assert r.s_dynamic == pytest.approx(0.13, abs=1e-12)

    def test_hand_case_second_static_joint_halves_means(self):
        pos = np.zeros((3, 2, 3))
        pos[:, 0, 0] = [0.0, 0.1, 0.2]
        m = make_motion(pos)
        r = dynamic_score(m, finite_differences(m, 1))
        assert r.s_temporal == pytest.approx(0.05, abs=1e-12)
        assert r.s_spatial == pytest.approx(0.1, abs=1e-12)
        assert r.s_dynamic == pytest.approx(0.065, abs=1e-12)

    def test_matches_oracle_on_random_motions(self):
        rng = np.random.default_rng(100)
        for _ in range(60):
            m = random_motion(rng, int(rng.integers(2, 20)), int(rng.integers(1, 5)))
            got = dynamic_score(m, finite_differences(m, 1))
            want = oracle_dynamic_score(m.positions, 0.7, 0.3)
            assert got.s_temporal == pytest.approx(want[0], abs=1e-9)
            assert got.s_spatial == pytest.approx(want[1], abs=1e-9)
            assert got.s_dynamic == pytest.approx(want[2], abs=1e-9)

    def test_combination_is_exact(self):
        rng = np.random.default_rng(101)
        m = random_motion(rng, 10, 4)
        cfg = DynamicScoreConfig(0.25, 1.5)
        r = dynamic_score(m, finite_differences(m, 1), cfg)
        assert r.s_dynamic == 0.25 * r.s_temporal + 1.5 * r.s_spatial

    def test_translation_invariance_exact(self):
        # dyadic grid keeps float addition exact, so equality is bitwise
        rng = np.random.default_rng(102)
        for _ in range(20):
            grid = rng.integers(-512, 512, size=(12, 3, 3)) / 1024.0
            m = make_motion(grid)
            shift = rng.integers(-8, 8, size=3).astype(np.float64)
            shifted = make_motion(grid + shift)
            a = dynamic_score(m, finite_differences(m, 1))
            b = dynamic_score(shifted, finite_differences(shifted, 1))
            assert a == b

    def test_temporal_rotation_invariance_exact_for_axis_permutation(self):
        # (x, y, z) -> (z, y, -x) is a proper rotation with exact float math
        rng = np.random.default_rng(103)
        m = random_motion(rng, 15, 4)
        p = m.positions
        rotated = np.stack([p[:, :, 2], p[:, :, 1], -p[:, :, 0]], axis=2)
        mr = make_motion(rotated)
        a = dynamic_score(m, finite_differences(m, 1))
        b = dynamic_score(mr, finite_differences(mr, 1))
        assert a.s_temporal == b.s_temporal

    def test_default_weights(self):
        cfg = DynamicScoreConfig()
        assert (cfg.temporal_weight, cfg.spatial_weight) == (0.7, 0.3)

    def test_shape_mismatch(self):
        m = static_motion(num_frames=10, num_joints=2)
        other = static_motion(num_frames=10, num_joints=3)
        with pytest.raises(ShapeMismatch):
            dynamic_score(m, finite_differences(other, 1))


class TestFootSkating:
    def test_static_feet_zero(self):
        pos = np.zeros((30, 2, 3))  # feet planted at the origin
        m = MotionSequence(pos, 30.0)
        assert foot_skating(m, FEET_CFG) == 0.0

    def test_airborne_feet_zero(self):
        pos = np.zeros((30, 2, 3))
        pos[:, :, 1] = 0.5  # well above contact height
        pos[:, 0, 0] = 0.02 * np.arange(30)  # moving, but in the air
        m = MotionSequence(pos, 30.0)
        assert foot_skating(m, FEET_CFG) == 0.0

    def test_sliding_contact_hand_value(self):
        # frozen via oracle_foot_skating before implementation: exactly 0.01
        m = sliding_feet_motion()
        want = oracle_foot_skating(m.positions, (0, 1), 0.05)
        assert want == pytest.approx(0.01, abs=1e-15)
        assert foot_skating(m, FEET_CFG) == pytest.approx(0.01, abs=1e-15)

    def test_matches_oracle_random(self):
        rng = np.random.default_rng(110)
        for _ in range(40):
            f = int(rng.integers(2, 25))
            pos = rng.normal(0.0, 0.1, size=(f, 3, 3))
            pos[:, :, 1] = rng.uniform(-0.02, 0.15, size=(f, 3))
            m = MotionSequence(pos, 30.0)
            cfg = PhysicalMetricConfig(foot_joints=(0, 2))
            want = oracle_foot_skating(m.positions, (0, 2), cfg.contact_height)
            assert foot_skating(m, cfg) == pytest.approx(want, abs=1e-12)

    def test_no_foot_joints(self):
        m = static_motion()
        with pytest.raises(NoFootJoints):
            foot_skating(m, PhysicalMetricConfig(foot_joints=()))

    def test_too_few_frames(self):
        m = static_motion(num_frames=1)
        with pytest.raises(TooFewFrames):
            foot_skating(m, FEET_CFG)


class TestGroundPenetration:
    def test_above_ground_zero(self):
        assert ground_penetration(static_motion(y=0.2)) == 0.0

    def test_constant_depth(self):
        m = static_motion(y=-0.02)
        assert ground_penetration(m) == pytest.approx(0.02, abs=1e-15)

    def test_half_frames_below(self):
        pos = np.zeros((10, 1, 3))
        pos[5:, 0, 1] = -0.02
        m = MotionSequence(pos, 30.0)
        assert ground_penetration(m) == pytest.approx(0.01, abs=1e-15)

    def test_deepest_joint_counts(self):
        pos = np.zeros((4, 3, 3))
        pos[:, 0, 1] = -0.05
        pos[:, 1, 1] = -0.01
        pos[:, 2, 1] = 0.3
        m = MotionSequence(pos, 30.0)
        assert ground_penetration(m) == pytest.approx(0.05, abs=1e-15)


class TestFloating:
    def test_grounded_zero(self):
        assert floating(static_motion(y=0.0), FEET_CFG) == 0.0
        assert floating(static_motion(y=0.05), FEET_CFG) == 0.0

    def test_constant_float(self):
        m = static_motion(y=0.15)
        assert floating(m, FEET_CFG) == pytest.approx(0.10, abs=1e-15)

    def test_alternating_frames(self):
        pos = np.zeros((10, 1, 3))
        pos[::2, 0, 1] = 0.25
        pos[1::2, 0, 1] = 0.0
        m = MotionSequence(pos, 30.0)
        assert floating(m, FEET_CFG) == pytest.approx(0.10, abs=1e-15)


class TestJerk:
    def test_constant_velocity_zero(self):
        # dyadic step keeps the ramp exact in binary floating point
        pos = np.zeros((20, 2, 3))
        pos[:, :, 0] = np.arange(20)[:, None] * 0.125
        m = MotionSequence(pos, 30.0)
        assert jerk(m) == 0.0

    def test_quadratic_zero(self):
        t = np.arange(20, dtype=np.float64)
        pos = np.zeros((20, 1, 3))
        pos[:, 0, 0] = 0.5 * t * t + t
        m = MotionSequence(pos, 30.0)
        assert jerk(m) == 0.0

    def test_cubic_hand_value(self):
        # x = t^3 has constant third difference 6; at 1 fps jerk is exactly 6
        t = np.arange(8, dtype=np.float64)
        pos = np.zeros((8, 1, 3))
        pos[:, 0, 0] = t**3
        m = MotionSequence(pos, 1.0)
        assert jerk(m) == pytest.approx(6.0, abs=1e-12)

    def test_fps_cubing(self):
        t = np.arange(8, dtype=np.float64)
        pos = np.zeros((8, 1, 3))
        pos[:, 0, 0] = t**3
        m = MotionSequence(pos, 2.0)
        assert jerk(m) == pytest.approx(48.0, rel=1e-12)

    def test_too_few_frames(self):
        with pytest.raises(TooFewFrames):
            jerk(static_motion(num_frames=3))


class TestAccelerationPeaks:
    def test_static_zero(self):
        assert acceleration_peaks(static_motion(), FEET_CFG) == 0.0

    def test_constant_velocity_zero(self):
        pos = np.zeros((60, 1, 3))
        pos[:, 0, 0] = np.arange(60) * 0.02
        m = MotionSequence(pos, 30.0)
        assert acceleration_peaks(m, FEET_CFG) == 0.0

    def test_single_spike_in_two_second_clip(self):
        # one displaced frame in the middle of a linear track produces second
        # differences (b, -2b, b); with b = 0.0015 at 30 fps only the middle
        # one (2.7 m/s^2) crosses the 2.0 threshold -> 1 peak / 2 s = 0.5
        pos = np.zeros((60, 2, 3))
        pos[:, 0, 0] = np.arange(60) * 0.01
        pos[30, 0, 0] += 0.0015
        m = MotionSequence(pos, 30.0)
        assert acceleration_peaks(m, FEET_CFG) == pytest.approx(0.5, abs=1e-15)

    def test_spike_counts_once_even_at_clip_end(self):
        pos = np.zeros((60, 1, 3))
        pos[-1, 0, 0] += 0.01  # jump on the very last frame
        m = MotionSequence(pos, 30.0)
        count = acceleration_peaks(m, FEET_CFG) * m.duration_seconds
        assert count == pytest.approx(round(count), abs=1e-9)
        assert count <= 2  # affects at most the last two valid differences

    def test_too_few_frames(self):
        with pytest.raises(TooFewFrames):
            acceleration_peaks(static_motion(num_frames=2), FEET_CFG)


class TestScaleHomogeneity:
    @pytest.mark.parametrize("s", [0.5, 2.0, 10.0])
    def test_all_metrics_scale_linearly(self, s):
        rng = np.random.default_rng(120)
        pos = rng.normal(0.0, 0.3, size=(40, 4, 3))
        pos[:, :, 1] = rng.uniform(-0.05, 0.3, size=(40, 4))
        base = MotionSequence(pos, 30.0)
        scaled = MotionSequence(pos * s, 30.0)
        cfg = PhysicalMetricConfig(foot_joints=(0, 1))
        cfg_s = PhysicalMetricConfig(
            foot_joints=(0, 1),
            contact_height=cfg.contact_height * s,
            float_height=cfg.float_height * s,
        )
        a = dynamic_score(base, finite_differences(base, 1))
        b = dynamic_score(scaled, finite_differences(scaled, 1))
        assert b.s_temporal == pytest.approx(s * a.s_temporal, rel=1e-12)
        assert b.s_spatial == pytest.approx(s * a.s_spatial, rel=1e-12)
        assert b.s_dynamic == pytest.approx(s * a.s_dynamic, rel=1e-12)
        assert foot_skating(scaled, cfg_s) == pytest.approx(
            s * foot_skating(base, cfg), rel=1e-12
        )
        assert ground_penetration(scaled) == pytest.approx(
            s * ground_penetration(base), rel=1e-12
        )
        assert floating(scaled, cfg_s) == pytest.approx(
            s * floating(base, cfg), rel=1e-12
        )


class TestClipMetrics:
    def test_all_fields_present(self):
        rng = np.random.default_rng(130)
        m = random_motion(rng, 30, 4)
        out = clip_metrics(m, PhysicalMetricConfig(foot_joints=(0,)))
        assert set(out) == {
            "dynamic_score",
            "dynamic_temporal",
            "dynamic_spatial",
            "foot_skating",
            "ground_penetration",
            "floating",
            "jerk",
            "jerk_per_frame",
            "acceleration_peaks",
        }
        assert out["jerk"] == pytest.approx(
            out["jerk_per_frame"] * m.fps**3, rel=1e-12
        )

    def test_static_clip_all_zero(self):
        out = clip_metrics(static_motion(y=0.0), PhysicalMetricConfig(foot_joints=(0,)))
        for name in (
            "dynamic_score",
            "foot_skating",
            "jerk",
            "acceleration_peaks",
            "ground_penetration",
        ):
            assert out[name] == 0.0, name
