"""Taxonomy-aware aggregation, dataset statistics, and viewer scene export.

Aggregation is pure bookkeeping over per-clip metric rows; nothing here
recomputes a metric. Scene export produces a self-contained JSON document a
browser can render without touching any other file.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

import numpy as np

from .core import ClipRecord, MotionSequence, Skeleton, Taxonomy
from .errors import JointCountMismatch, SceneSchemaError, TooManyTracks

AGGREGATION_LEVELS = ("category", "subcategory", "atomic_action")
OVERALL_NODE = "overall"
UNLABELED_NODE = "unlabeled"
SCENE_VERSION = 1
MAX_SCENE_TRACKS = 16

# metrics where smaller is better; used when shaping chart values so that
# "taller bar = better" holds for every series
DEFAULT_DOWN_METRICS = frozenset(
    {"foot_skating", "ground_penetration", "jerk", "jerk_per_frame"}
)


@dataclass(frozen=True)
class MetricStats:
    mean: float
    median: float
    p95: float


@dataclass(frozen=True)
class CategoryAggregate:
    """Metric summary for one taxonomy node (or the overall row)."""

    node: str
    clip_count: int
    duration_hours: float
    metrics: Mapping[str, MetricStats]

    def __post_init__(self):
        object.__setattr__(self, "metrics", dict(self.metrics))


@dataclass(frozen=True)
class StatsReport:
    total_clips: int
    total_hours: float
    mean_frames: float
    median_frames: float
    category_counts: Mapping[str, int]
    subcategory_counts: Mapping[str, int]
    distinct_subcategories: int

    def __post_init__(self):
        object.__setattr__(self, "category_counts", dict(self.category_counts))
        object.__setattr__(self, "subcategory_counts", dict(self.subcategory_counts))


def _node_for(record: ClipRecord, level: str) -> str:
    parts = [record.category]
    if level in ("subcategory", "atomic_action"):
        parts.append(record.subcategory)
    if level == "atomic_action":
        parts.append(record.atomic_action)
    if any(p is None or not str(p).strip() for p in parts):
        return UNLABELED_NODE
    return "/".join(str(p) for p in parts)


def _stats_for(values: Sequence[float]) -> MetricStats:
    arr = np.asarray(values, dtype=np.float64)
    return MetricStats(
        mean=float(arr.mean()),
        median=float(np.median(arr)),
        p95=float(np.percentile(arr, 95)),
    )


def aggregate_by_taxonomy(
    per_clip_metrics: Mapping[str, Mapping[str, float]],
    records: Sequence[ClipRecord],
    level: str = "category",
) -> list:
    """Summarize per-clip metrics per taxonomy node at the given level.

    Every record lands in exactly one node ("unlabeled" when its labels do
    not reach the requested level), so node clip counts add up to the input
    size. An "overall" row over all clips comes first; the rest are ordered
    by descending clip count, then node name. Metric statistics are computed
    over the clips that actually have the metric.
    """
    if level not in AGGREGATION_LEVELS:
        raise ValueError(f"level must be one of {AGGREGATION_LEVELS}, got {level!r}")
    buckets: dict[str, list] = {}
    for rec in records:
        buckets.setdefault(_node_for(rec, level), []).append(rec)

    out = [_aggregate_bucket(OVERALL_NODE, list(records), per_clip_metrics)]
    ordered = sorted(buckets.items(), key=lambda kv: (-len(kv[1]), kv[0]))
    for node, members in ordered:
        out.append(_aggregate_bucket(node, members, per_clip_metrics))
    return out


def _aggregate_bucket(node, members, per_clip_metrics) -> CategoryAggregate:
    duration = sum(rec.duration_seconds for rec in members) / 3600.0
    values: dict[str, list] = {}
    for rec in members:
        for name, value in per_clip_metrics.get(rec.clip_id, {}).items():
            values.setdefault(name, []).append(float(value))
    metrics = {name: _stats_for(vals) for name, vals in sorted(values.items())}
    return CategoryAggregate(node, len(members), duration, metrics)


def dataset_stats(
    records: Sequence[ClipRecord], taxonomy: Optional[Taxonomy] = None
) -> StatsReport:
    """Corpus-level counts: volume, frame statistics, label coverage."""
    if not records:
        return StatsReport(0, 0.0, 0.0, 0.0, {}, {}, 0)
    frames = np.array([rec.num_frames for rec in records], dtype=np.float64)
    total_hours = sum(rec.duration_seconds for rec in records) / 3600.0
    cat_counts: dict[str, int] = {}
    sub_counts: dict[str, int] = {}
    for rec in records:
        cat = _node_for(rec, "category")
        cat_counts[cat] = cat_counts.get(cat, 0) + 1
        sub = _node_for(rec, "subcategory")
        sub_counts[sub] = sub_counts.get(sub, 0) + 1
    distinct_subs = len([k for k in sub_counts if k != UNLABELED_NODE])
    return StatsReport(
        total_clips=len(records),
        total_hours=total_hours,
        mean_frames=float(frames.mean()),
        median_frames=float(np.median(frames)),
        category_counts=cat_counts,
        subcategory_counts=sub_counts,
        distinct_subcategories=distinct_subs,
    )


def chart_data(
    aggregates: Sequence[CategoryAggregate],
    down_metrics: frozenset = DEFAULT_DOWN_METRICS,
) -> dict:
    """Chart-ready per-node metric means.

    Metrics where smaller is better are mapped through ``1 / (1 + value)``
    so every plotted series reads "higher is better"; which metrics were
    inverted is listed in the output.
    """
    metric_names = sorted({m for agg in aggregates for m in agg.metrics})
    series: dict[str, dict] = {}
    for name in metric_names:
        inverted = name in down_metrics
        per_node = {}
        for agg in aggregates:
            if name not in agg.metrics:
                continue
            value = agg.metrics[name].mean
            per_node[agg.node] = 1.0 / (1.0 + value) if inverted else value
        series[name] = per_node
    return {
        "metrics": series,
        "inverted_metrics": sorted(n for n in metric_names if n in down_metrics),
    }


# ---------------------------------------------------------------------------
# viewer scene export


@dataclass(frozen=True)
class VizExportOptions:
    """Frame decimation stride and the track budget for scene export."""

    stride: int = 1
    max_tracks: int = MAX_SCENE_TRACKS

    def __post_init__(self):
        if self.stride < 1:
            raise ValueError("stride must be at least 1")
        if not 1 <= self.max_tracks <= MAX_SCENE_TRACKS:
            raise ValueError(f"max_tracks must be in [1, {MAX_SCENE_TRACKS}]")


def decimate_indices(num_frames: int, stride: int) -> list:
    """Every stride-th frame index, with the last frame always included."""
    idx = list(range(0, num_frames, stride))
    if idx[-1] != num_frames - 1:
        idx.append(num_frames - 1)
    return idx


def export_viz_scene(
    records: Sequence[ClipRecord],
    motions: Mapping[str, MotionSequence],
    skeleton: Skeleton,
    per_clip_metrics: Optional[Mapping[str, Mapping[str, float]]] = None,
    options: VizExportOptions = VizExportOptions(),
) -> dict:
    """Bundle up to 16 motions into a self-contained scene document.

    Each track carries its decimated frames inline plus the clip's first
    caption and its metric badges, so the viewer needs nothing but this one
    file. All motions must match the skeleton's joint count.
    """
    if len(records) > options.max_tracks:
        raise TooManyTracks(
            f"{len(records)} clips exceed the {options.max_tracks}-track budget"
        )
    tracks = []
    for rec in records:
        motion = motions[rec.clip_id]
        if motion.num_joints != skeleton.num_joints:
            raise JointCountMismatch(
                f"clip {rec.clip_id!r} has {motion.num_joints} joints, "
                f"skeleton has {skeleton.num_joints}"
            )
        idx = decimate_indices(motion.num_frames, options.stride)
        frames = motion.positions[idx]
        badges = {}
        if per_clip_metrics and rec.clip_id in per_clip_metrics:
            badges = {k: float(v) for k, v in sorted(per_clip_metrics[rec.clip_id].items())}
        tracks.append(
            {
                "clip_id": rec.clip_id,
                "fps": motion.fps / options.stride,
                "caption": rec.captions[0] if rec.captions else "",
                "badges": badges,
                "frames": [[list(map(float, joint)) for joint in frame] for frame in frames],
            }
        )
    return {
        "version": SCENE_VERSION,
        "skeleton": {
            "parents": list(skeleton.parents),
            "names": list(skeleton.names),
        },
        "tracks": tracks,
    }


def write_viz_scene(scene: dict, path) -> None:
    validate_viz_scene(scene)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(scene, fh, ensure_ascii=False)
        fh.write("\n")


def validate_viz_scene(scene) -> None:
    """Schema check for scene documents; error messages name the bad path."""
    if not isinstance(scene, dict):
        raise SceneSchemaError("scene: expected an object")
    if scene.get("version") != SCENE_VERSION:
        raise SceneSchemaError(
            f"scene.version: expected {SCENE_VERSION}, got {scene.get('version')!r}"
        )
    skeleton = scene.get("skeleton")
    if not isinstance(skeleton, dict):
        raise SceneSchemaError("scene.skeleton: expected an object")
    parents = skeleton.get("parents")
    names = skeleton.get("names")
    if not isinstance(parents, list) or not parents:
        raise SceneSchemaError("scene.skeleton.parents: expected a non-empty array")
    if not isinstance(names, list) or len(names) != len(parents):
        raise SceneSchemaError("scene.skeleton.names: must match parents length")
    num_joints = len(parents)
    tracks = scene.get("tracks")
    if not isinstance(tracks, list):
        raise SceneSchemaError("scene.tracks: expected an array")
    if len(tracks) > MAX_SCENE_TRACKS:
        raise SceneSchemaError(
            f"scene.tracks: {len(tracks)} tracks exceed the {MAX_SCENE_TRACKS} limit"
        )
    for t, track in enumerate(tracks):
        where = f"scene.tracks[{t}]"
        if not isinstance(track, dict):
            raise SceneSchemaError(f"{where}: expected an object")
        if not isinstance(track.get("clip_id"), str):
            raise SceneSchemaError(f"{where}.clip_id: expected a string")
        fps = track.get("fps")
        if not isinstance(fps, (int, float)) or not fps > 0:
            raise SceneSchemaError(f"{where}.fps: expected a positive number")
        frames = track.get("frames")
        if not isinstance(frames, list) or not frames:
            raise SceneSchemaError(f"{where}.frames: expected a non-empty array")
        for f, frame in enumerate(frames):
            if not isinstance(frame, list) or len(frame) != num_joints:
                raise SceneSchemaError(
                    f"{where}.frames[{f}]: expected {num_joints} joints, "
                    f"got {len(frame) if isinstance(frame, list) else type(frame).__name__}"
                )
            for j, joint in enumerate(frame):
                if not isinstance(joint, list) or len(joint) != 3:
                    raise SceneSchemaError(
                        f"{where}.frames[{f}][{j}]: expected [x, y, z]"
                    )
