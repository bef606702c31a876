"""Command-line interface for batch dataset work.

Subcommands::

    validate     check clips against the admission policy
    convert      resample / canonicalize clips into a new tree
    metrics      per-clip physical metrics (JSONL) plus an aggregate JSON
    score        per-clip dynamic scores (JSONL)
    filter       percentile filter over a score report
    partition    tiered manifests from score thresholds
    eval         distribution metrics over embedding files
    report       taxonomy-aware aggregation of a metric report
    export-viz   bundle clips into a browser scene file

Exit codes: 0 on success, 1 when some clips failed but the run completed,
2 on fatal configuration or I/O errors. Every run writes a machine-readable
run manifest (inputs, configuration, tool version, seed) next to its primary
output. Outputs are sorted by clip_id, so results do not depend on the
worker pool size (``--jobs``, default from ``MOTKIT_JOBS`` or the CPU count).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .core import MotionSequence, ValidityPolicy, validate_clip
from .distribution import (
    RetrievalProtocol,
    diversity,
    fid,
    matching_score,
    r_precision,
)
from .errors import MissingScore, MotkitError
from .filters import (
    FilterPolicy,
    PartitionSpec,
    adaptive_filter,
    partition,
)
from .io import (
    default_skeleton,
    load_skeleton,
    load_taxonomy,
    read_embeddings,
    read_manifest,
    read_metric_report,
    read_motion,
    read_motion_parts,
    record_to_json,
    write_manifest,
    write_metric_report,
    write_motion,
)
from .kinematics import canonicalize, finite_differences, resample, resample_rotations
from .physical import (
    DynamicScoreConfig,
    PhysicalMetricConfig,
    clip_metrics,
    dynamic_score,
)
from .report import (
    VizExportOptions,
    aggregate_by_taxonomy,
    chart_data,
    dataset_stats,
    export_viz_scene,
    write_viz_scene,
)


def _default_jobs() -> int:
    env = os.environ.get("MOTKIT_JOBS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def _parallel_map(fn, items, jobs: int) -> list:
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def _write_json(path, obj) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, sort_keys=True, ensure_ascii=False, indent=2)
        fh.write("\n")


def _write_run_manifest(args, primary_out, inputs, outputs, extra=None) -> None:
    path = getattr(args, "run_manifest", None) or str(primary_out) + ".run.json"
    doc = {
        "command": args.command,
        "tool": {"name": "motkit", "version": __version__},
        "inputs": {k: str(v) for k, v in inputs.items() if v is not None},
        "outputs": {k: str(v) for k, v in outputs.items() if v is not None},
        "config": extra or {},
        "seed": getattr(args, "seed", None),
        "jobs": getattr(args, "jobs", None),
    }
    _write_json(path, doc)


def _failures_path(out_path) -> str:
    return str(out_path) + ".failures.jsonl"


def _write_failures(path, failures: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for clip_id in sorted(failures):
            row = {"clip_id": clip_id, "error": failures[clip_id]}
            fh.write(json.dumps(row, sort_keys=True, ensure_ascii=False) + "\n")


def _report_failures(failures: dict, total: int) -> None:
    if failures:
        print(
            f"warning: {len(failures)} of {total} clips failed",
            file=sys.stderr,
        )


# ---------------------------------------------------------------------------
# subcommands


def cmd_validate(args) -> int:
    records = read_manifest(args.manifest)
    root = Path(args.motion_root)
    policy = ValidityPolicy(
        min_frames=args.min_frames,
        max_frames=args.max_frames,
        required_fps=args.fps,
    )

    def work(rec):
        try:
            motion = read_motion(root / rec.motion_file)
        except Exception as exc:
            return rec.clip_id, None, f"{type(exc).__name__}: {exc}"
        return rec.clip_id, validate_clip(rec, motion, policy), None

    results = _parallel_map(work, records, args.jobs)
    failures = {cid: err for cid, _, err in results if err is not None}
    reports = sorted(
        (rep for _, rep, err in results if err is None), key=lambda r: r.clip_id
    )
    with open(args.out, "w", encoding="utf-8") as fh:
        for rep in reports:
            row = {
                "clip_id": rep.clip_id,
                "valid": rep.valid,
                "violations": list(rep.violations),
            }
            fh.write(json.dumps(row, sort_keys=True, ensure_ascii=False) + "\n")
    _write_failures(_failures_path(args.out), failures)
    invalid = sum(1 for rep in reports if not rep.valid)
    print(f"{len(reports)} clips checked, {invalid} invalid, {len(failures)} failed")
    _write_run_manifest(
        args,
        args.out,
        {"manifest": args.manifest, "motion_root": args.motion_root},
        {"report": args.out, "failures": _failures_path(args.out)},
        {
            "min_frames": args.min_frames,
            "max_frames": args.max_frames,
            "fps": args.fps,
        },
    )
    _report_failures(failures, len(records))
    return 1 if failures else 0


def cmd_convert(args) -> int:
    records = read_manifest(args.manifest)
    in_root = Path(args.motion_root)
    out_root = Path(args.out_root)
    skeleton = None
    if args.canonicalize:
        skeleton = load_skeleton(args.skeleton) if args.skeleton else default_skeleton()

    def work(rec):
        try:
            header, positions, rotations = read_motion_parts(in_root / rec.motion_file)
            motion = MotionSequence(positions.astype(np.float64), header.fps)
            if args.target_fps and args.target_fps != motion.fps:
                if rotations is not None:
                    rotations = resample_rotations(
                        rotations, motion.fps, args.target_fps
                    )
                motion = resample(motion, args.target_fps)
            if skeleton is not None:
                motion = canonicalize(motion, skeleton)
                rotations = None  # yaw alignment invalidates stored rotations
            dest = out_root / rec.motion_file
            dest.parent.mkdir(parents=True, exist_ok=True)
            write_motion(motion, dest, rotations=rotations)
            new_rec = type(rec)(
                clip_id=rec.clip_id,
                motion_file=rec.motion_file,
                fps=motion.fps,
                num_frames=motion.num_frames,
                captions=rec.captions,
                category=rec.category,
                subcategory=rec.subcategory,
                atomic_action=rec.atomic_action,
                source=rec.source,
            )
            return rec.clip_id, new_rec, None
        except Exception as exc:
            return rec.clip_id, None, f"{type(exc).__name__}: {exc}"

    out_root.mkdir(parents=True, exist_ok=True)
    results = _parallel_map(work, records, args.jobs)
    failures = {cid: err for cid, _, err in results if err is not None}
    converted = sorted(
        (rec for _, rec, err in results if err is None), key=lambda r: r.clip_id
    )
    write_manifest(converted, args.out_manifest)
    _write_failures(_failures_path(args.out_manifest), failures)
    print(f"{len(converted)} clips converted, {len(failures)} failed")
    _write_run_manifest(
        args,
        args.out_manifest,
        {"manifest": args.manifest, "motion_root": args.motion_root},
        {"manifest": args.out_manifest, "motion_root": args.out_root},
        {"target_fps": args.target_fps, "canonicalize": args.canonicalize},
    )
    _report_failures(failures, len(records))
    return 1 if failures else 0


def _metric_config(args) -> PhysicalMetricConfig:
    skeleton = load_skeleton(args.skeleton) if args.skeleton else default_skeleton()
    return PhysicalMetricConfig(
        foot_joints=skeleton.foot_joints,
        contact_height=args.contact_height,
        float_height=args.float_height,
        accel_peak_threshold=args.accel_threshold,
    )


def cmd_metrics(args) -> int:
    records = read_manifest(args.manifest)
    root = Path(args.motion_root)
    config = _metric_config(args)
    dyn_config = DynamicScoreConfig(args.temporal_weight, args.spatial_weight)

    def work(rec):
        try:
            motion = read_motion(root / rec.motion_file)
            return rec.clip_id, clip_metrics(motion, config, dyn_config), None
        except Exception as exc:
            return rec.clip_id, None, f"{type(exc).__name__}: {exc}"

    results = _parallel_map(work, records, args.jobs)
    failures = {cid: err for cid, _, err in results if err is not None}
    per_clip = {cid: m for cid, m, err in results if err is None}
    write_metric_report(per_clip, args.out)
    _write_failures(_failures_path(args.out), failures)
    if args.aggregate_out:
        names = sorted({m for metrics in per_clip.values() for m in metrics})
        agg = {}
        for name in names:
            values = [metrics[name] for metrics in per_clip.values() if name in metrics]
            arr = np.asarray(values, dtype=float)
            agg[name] = {
                "mean": float(arr.mean()),
                "median": float(np.median(arr)),
                "p95": float(np.percentile(arr, 95)),
            }
        _write_json(args.aggregate_out, {"clip_count": len(per_clip), "metrics": agg})
    print(f"{len(per_clip)} clips measured, {len(failures)} failed")
    _write_run_manifest(
        args,
        args.out,
        {"manifest": args.manifest, "motion_root": args.motion_root},
        {"report": args.out, "aggregate": args.aggregate_out},
        {
            "contact_height": args.contact_height,
            "float_height": args.float_height,
            "accel_threshold": args.accel_threshold,
        },
    )
    _report_failures(failures, len(records))
    return 1 if failures else 0


def cmd_score(args) -> int:
    records = read_manifest(args.manifest)
    root = Path(args.motion_root)
    config = DynamicScoreConfig(args.temporal_weight, args.spatial_weight)

    def work(rec):
        try:
            motion = read_motion(root / rec.motion_file)
            velocities = finite_differences(motion, order=1)
            result = dynamic_score(motion, velocities, config)
            metrics = {
                "dynamic_score": result.s_dynamic,
                "dynamic_temporal": result.s_temporal,
                "dynamic_spatial": result.s_spatial,
            }
            return rec.clip_id, metrics, None
        except Exception as exc:
            return rec.clip_id, None, f"{type(exc).__name__}: {exc}"

    results = _parallel_map(work, records, args.jobs)
    failures = {cid: err for cid, _, err in results if err is not None}
    per_clip = {cid: m for cid, m, err in results if err is None}
    write_metric_report(per_clip, args.out)
    _write_failures(_failures_path(args.out), failures)
    print(f"{len(per_clip)} clips scored, {len(failures)} failed")
    _write_run_manifest(
        args,
        args.out,
        {"manifest": args.manifest, "motion_root": args.motion_root},
        {"report": args.out, "failures": _failures_path(args.out)},
        {
            "temporal_weight": args.temporal_weight,
            "spatial_weight": args.spatial_weight,
        },
    )
    _report_failures(failures, len(records))
    return 1 if failures else 0


def _scores_from_report(path, metric: str) -> dict:
    per_clip = read_metric_report(path)
    scores = {}
    for clip_id, metrics in per_clip.items():
        if metric not in metrics:
            raise MissingScore(f"clip {clip_id!r} has no metric {metric!r}")
        scores[clip_id] = float(metrics[metric])
    return scores


def cmd_filter(args) -> int:
    records = read_manifest(args.manifest)
    scores = _scores_from_report(args.scores, args.metric)
    policy = FilterPolicy(
        metric=args.metric,
        mode=args.mode,
        percentile=args.percentile,
        group_by=args.group_by,
        exempt_groups=frozenset(args.exempt or ()),
    )
    taxonomy = load_taxonomy(args.taxonomy) if args.taxonomy else None
    outcome = adaptive_filter(scores, records, policy, taxonomy)
    by_id = {rec.clip_id: rec for rec in records}
    write_manifest((by_id[c] for c in sorted(outcome.kept_ids)), args.kept_out)
    write_manifest((by_id[c] for c in sorted(outcome.removed_ids)), args.removed_out)
    report = {
        "policy": {
            "metric": policy.metric,
            "mode": policy.mode,
            "percentile": policy.percentile,
            "group_by": policy.group_by,
            "exempt_groups": sorted(policy.exempt_groups),
        },
        "kept": len(outcome.kept_ids),
        "removed": len(outcome.removed_ids),
        "groups": {
            name: {
                "total": g.total,
                "kept": g.kept,
                "fraction": g.fraction,
                "exempt": g.exempt,
            }
            for name, g in sorted(outcome.groups.items())
        },
    }
    _write_json(args.report_out, report)
    print(f"kept {len(outcome.kept_ids)}, removed {len(outcome.removed_ids)}")
    _write_run_manifest(
        args,
        args.report_out,
        {"manifest": args.manifest, "scores": args.scores, "taxonomy": args.taxonomy},
        {
            "kept": args.kept_out,
            "removed": args.removed_out,
            "report": args.report_out,
        },
        report["policy"],
    )
    return 0


def _parse_tiers(pairs) -> PartitionSpec:
    if not pairs:
        return PartitionSpec()
    tiers = []
    for pair in pairs:
        name, _, value = pair.partition("=")
        if not name or not value:
            raise ValueError(f"--tier expects NAME=THRESHOLD, got {pair!r}")
        tiers.append((name, float(value)))
    return PartitionSpec(tuple(tiers))


def cmd_partition(args) -> int:
    records = read_manifest(args.manifest)
    scores = _scores_from_report(args.scores, args.metric)
    for rec in records:
        if rec.clip_id not in scores:
            raise MissingScore(f"no score for clip {rec.clip_id!r}")
    spec = _parse_tiers(args.tier)
    tiers = partition({rec.clip_id: scores[rec.clip_id] for rec in records}, spec)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    by_id = {rec.clip_id: rec for rec in records}
    summary = {}
    for (name, threshold), ids in zip(spec.tiers, tiers.values()):
        path = out_dir / f"{name}.jsonl"
        write_manifest((by_id[c] for c in sorted(ids)), path)
        summary[name] = {"threshold": threshold, "count": len(ids)}
    summary_path = out_dir / "partition_summary.json"
    _write_json(summary_path, {"metric": args.metric, "tiers": summary})
    print(", ".join(f"{name}: {info['count']}" for name, info in summary.items()))
    _write_run_manifest(
        args,
        summary_path,
        {"manifest": args.manifest, "scores": args.scores},
        {"out_dir": args.out_dir},
        {"metric": args.metric, "tiers": {n: i["threshold"] for n, i in summary.items()}},
    )
    return 0


def cmd_eval(args) -> int:
    protocol = RetrievalProtocol(
        batch_size=args.batch_size,
        top_ks=tuple(args.top_k) if args.top_k else (1, 2, 3),
        seed=args.seed,
        num_diversity_pairs=args.diversity_pairs,
    )
    results = {}
    if args.real and args.generated:
        results["fid"] = fid(read_embeddings(args.real), read_embeddings(args.generated))
    diversity_source = args.generated or args.motion
    if diversity_source:
        results["diversity"] = diversity(read_embeddings(diversity_source), protocol)
    if args.text and args.motion:
        text = read_embeddings(args.text)
        motion = read_embeddings(args.motion)
        results["matching_score"] = matching_score(text, motion, args.matching_mode)
        results["r_precision"] = {
            f"top_{k}": v for k, v in r_precision(text, motion, protocol).items()
        }
    if not results:
        print(
            "error: nothing to evaluate; pass --real/--generated and/or --text/--motion",
            file=sys.stderr,
        )
        return 2
    doc = {
        "results": results,
        "protocol": {
            "batch_size": protocol.batch_size,
            "top_ks": list(protocol.top_ks),
            "seed": protocol.seed,
            "num_diversity_pairs": protocol.num_diversity_pairs,
            "matching_mode": args.matching_mode,
        },
    }
    _write_json(args.out, doc)
    print(json.dumps(results, sort_keys=True))
    _write_run_manifest(
        args,
        args.out,
        {
            "real": args.real,
            "generated": args.generated,
            "text": args.text,
            "motion": args.motion,
        },
        {"results": args.out},
        doc["protocol"],
    )
    return 0


def cmd_report(args) -> int:
    records = read_manifest(args.manifest)
    per_clip = read_metric_report(args.metrics)
    taxonomy = load_taxonomy(args.taxonomy) if args.taxonomy else None
    aggregates = aggregate_by_taxonomy(per_clip, records, args.level)
    stats = dataset_stats(records, taxonomy)
    doc = {
        "level": args.level,
        "stats": {
            "total_clips": stats.total_clips,
            "total_hours": stats.total_hours,
            "mean_frames": stats.mean_frames,
            "median_frames": stats.median_frames,
            "category_counts": stats.category_counts,
            "subcategory_counts": stats.subcategory_counts,
            "distinct_subcategories": stats.distinct_subcategories,
        },
        "aggregates": [
            {
                "node": agg.node,
                "clip_count": agg.clip_count,
                "duration_hours": agg.duration_hours,
                "metrics": {
                    name: {"mean": s.mean, "median": s.median, "p95": s.p95}
                    for name, s in agg.metrics.items()
                },
            }
            for agg in aggregates
        ],
        "chart": chart_data(aggregates),
    }
    _write_json(args.out, doc)
    print(f"{stats.total_clips} clips across {len(aggregates) - 1} nodes")
    _write_run_manifest(
        args,
        args.out,
        {"manifest": args.manifest, "metrics": args.metrics, "taxonomy": args.taxonomy},
        {"report": args.out},
        {"level": args.level},
    )
    return 0


def cmd_export_viz(args) -> int:
    records = read_manifest(args.manifest)
    if args.clip:
        wanted = set(args.clip)
        records = [rec for rec in records if rec.clip_id in wanted]
        missing = wanted - {rec.clip_id for rec in records}
        if missing:
            raise MotkitError(f"clips not in manifest: {sorted(missing)}")
    else:
        records = records[: args.max_tracks]
    skeleton = load_skeleton(args.skeleton) if args.skeleton else default_skeleton()
    root = Path(args.motion_root)
    motions = {rec.clip_id: read_motion(root / rec.motion_file) for rec in records}
    per_clip = read_metric_report(args.metrics) if args.metrics else None
    options = VizExportOptions(stride=args.stride, max_tracks=args.max_tracks)
    scene = export_viz_scene(records, motions, skeleton, per_clip, options)
    write_viz_scene(scene, args.out)
    print(f"{len(records)} tracks written to {args.out}")
    _write_run_manifest(
        args,
        args.out,
        {"manifest": args.manifest, "motion_root": args.motion_root},
        {"scene": args.out},
        {"stride": args.stride, "clips": sorted(motions.keys())},
    )
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="motkit", description="motion dataset quality and curation tools"
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--jobs", type=int, default=_default_jobs(),
                       help="worker threads (default: MOTKIT_JOBS or CPU count)")
        p.add_argument("--run-manifest", default=None,
                       help="where to write the run manifest (default: <out>.run.json)")

    p = sub.add_parser("validate", help="check clips against the admission policy")
    p.add_argument("--manifest", required=True)
    p.add_argument("--motion-root", required=True)
    p.add_argument("--out", required=True, help="validity report JSONL")
    p.add_argument("--min-frames", type=int, default=30)
    p.add_argument("--max-frames", type=int, default=600)
    p.add_argument("--fps", type=float, default=30.0)
    add_common(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("convert", help="resample and/or canonicalize clips")
    p.add_argument("--manifest", required=True)
    p.add_argument("--motion-root", required=True)
    p.add_argument("--out-root", required=True)
    p.add_argument("--out-manifest", required=True)
    p.add_argument("--target-fps", type=float, default=None)
    p.add_argument("--canonicalize", action="store_true")
    p.add_argument("--skeleton", default=None, help="skeleton JSON (default: built-in)")
    add_common(p)
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("metrics", help="per-clip physical metrics")
    p.add_argument("--manifest", required=True)
    p.add_argument("--motion-root", required=True)
    p.add_argument("--out", required=True, help="metric report JSONL")
    p.add_argument("--aggregate-out", default=None, help="aggregate statistics JSON")
    p.add_argument("--skeleton", default=None)
    p.add_argument("--contact-height", type=float, default=0.05)
    p.add_argument("--float-height", type=float, default=0.05)
    p.add_argument("--accel-threshold", type=float, default=2.0)
    p.add_argument("--temporal-weight", type=float, default=0.7)
    p.add_argument("--spatial-weight", type=float, default=0.3)
    add_common(p)
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("score", help="per-clip dynamic scores")
    p.add_argument("--manifest", required=True)
    p.add_argument("--motion-root", required=True)
    p.add_argument("--out", required=True, help="score report JSONL")
    p.add_argument("--temporal-weight", type=float, default=0.7)
    p.add_argument("--spatial-weight", type=float, default=0.3)
    add_common(p)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("filter", help="percentile filter over a score report")
    p.add_argument("--manifest", required=True)
    p.add_argument("--scores", required=True, help="metric report JSONL")
    p.add_argument("--metric", default="dynamic_score")
    p.add_argument("--mode", choices=["keep-top", "drop-top"], default="keep-top")
    p.add_argument("--percentile", type=float, default=15.0)
    p.add_argument("--group-by", choices=["global", "category", "subcategory"],
                   default="category")
    p.add_argument("--exempt", action="append", default=[],
                   help="taxonomy node kept at 100%% (repeatable)")
    p.add_argument("--taxonomy", default=None, help="taxonomy JSON for validation")
    p.add_argument("--kept-out", required=True)
    p.add_argument("--removed-out", required=True)
    p.add_argument("--report-out", required=True)
    add_common(p)
    p.set_defaults(func=cmd_filter)

    p = sub.add_parser("partition", help="tiered manifests from score thresholds")
    p.add_argument("--manifest", required=True)
    p.add_argument("--scores", required=True)
    p.add_argument("--metric", default="dynamic_score")
    p.add_argument("--tier", action="append", default=[],
                   help="NAME=THRESHOLD (repeatable; default ladder "
                        "tier_a=0.05 tier_b=0.10 tier_c=0.15 tier_d=0.50)")
    p.add_argument("--out-dir", required=True)
    add_common(p)
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("eval", help="distribution metrics over embeddings")
    p.add_argument("--real", default=None)
    p.add_argument("--generated", default=None)
    p.add_argument("--text", default=None)
    p.add_argument("--motion", default=None)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--batch-size", type=int, default=32)
    p.add_argument("--diversity-pairs", type=int, default=300)
    p.add_argument("--top-k", type=int, action="append", default=None)
    p.add_argument("--matching-mode", choices=["distance", "similarity"],
                   default="distance")
    add_common(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("report", help="taxonomy-aware metric aggregation")
    p.add_argument("--manifest", required=True)
    p.add_argument("--metrics", required=True, help="metric report JSONL")
    p.add_argument("--out", required=True)
    p.add_argument("--level", choices=["category", "subcategory", "atomic_action"],
                   default="category")
    p.add_argument("--taxonomy", default=None)
    add_common(p)
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("export-viz", help="bundle clips into a viewer scene")
    p.add_argument("--manifest", required=True)
    p.add_argument("--motion-root", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--skeleton", default=None)
    p.add_argument("--clip", action="append", default=[],
                   help="clip id to include (repeatable; default: first clips)")
    p.add_argument("--stride", type=int, default=1)
    p.add_argument("--max-tracks", type=int, default=16)
    p.add_argument("--metrics", default=None, help="metric report for badges")
    add_common(p)
    p.set_defaults(func=cmd_export_viz)

    return parser


def run(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    try:
        return args.func(args)
    except (MotkitError, OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run(sys.argv[1:]))
