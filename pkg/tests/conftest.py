import numpy as np
import pytest

from motkit import ClipRecord, MotionSequence, Skeleton, Taxonomy, default_skeleton


@pytest.fixture(scope="session")
def skeleton24() -> Skeleton:
    return default_skeleton()


@pytest.fixture
def chain_skeleton() -> Skeleton:
    """Root plus one child offset 1 m along +Z; joint 1 doubles as the foot."""
    return Skeleton(
        parents=(-1, 0),
        offsets=[[0.0, 0.0, 0.0], [0.0, 0.0, 1.0]],
        names=("root", "tip"),
        foot_joints=(1,),
    )


@pytest.fixture
def small_taxonomy() -> Taxonomy:
    return Taxonomy(
        {
            "Sports": {
                "Table Tennis": ["Swing racket", "Serve ball"],
                "Skateboarding": ["Push off", "Ollie"],
            },
            "Daily Life": {
                "Walking": ["Walk forward", "Turn around"],
            },
        }
    )


def make_motion(positions, fps=30.0) -> MotionSequence:
    return MotionSequence(np.asarray(positions, dtype=np.float64), fps)


def static_motion(num_frames=30, num_joints=2, fps=30.0, y=1.0) -> MotionSequence:
    pos = np.zeros((num_frames, num_joints, 3))
    pos[:, :, 1] = y
    return MotionSequence(pos, fps)


def make_record(clip_id, **overrides) -> ClipRecord:
    defaults = dict(
        clip_id=clip_id,
        motion_file=f"{clip_id}.mot",
        fps=30.0,
        num_frames=60,
        captions=(f"clip {clip_id}",),
        category="Sports",
        subcategory="Table Tennis",
        atomic_action="Swing racket",
        source="unit-test",
    )
    defaults.update(overrides)
    return ClipRecord(**defaults)


def random_motion(rng, num_frames, num_joints, fps=30.0, scale=1.0) -> MotionSequence:
    pos = rng.normal(0.0, scale, size=(num_frames, num_joints, 3))
    return MotionSequence(pos, fps)
