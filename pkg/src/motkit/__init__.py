"""Motion-quality analysis and dataset-curation toolkit for 3D human motion.

The package turns a manifest of motion clips into per-clip quality metrics,
rank-based dataset filters, taxonomy-aware reports, distribution-level
evaluation numbers, and self-contained scene files a browser viewer can
render. See the ``motkit`` command-line entry point for batch workflows.
"""

__version__ = "0.1.0"

from .core import (
    ClipRecord,
    JointVelocities,
    MotionSequence,
    Skeleton,
    Taxonomy,
    TaxonomyNodeRef,
    ValidityPolicy,
    ValidityReport,
    normalize_label,
    resolve_taxonomy_label,
    validate_clip,
)
from .distribution import (
    GaussianSummary,
    RetrievalProtocol,
    diversity,
    fid,
    frechet_distance,
    matching_score,
    r_precision,
)
from .filters import (
    FilterDiff,
    FilterOutcome,
    FilterPolicy,
    PartitionSpec,
    ScoreSweep,
    adaptive_filter,
    compare_filters,
    partition,
    retained_count,
    score_dataset,
)
from .io import (
    EmbeddingSet,
    MotionFileHeader,
    default_skeleton,
    load_skeleton,
    load_taxonomy,
    read_embeddings,
    read_manifest,
    read_metric_report,
    read_motion,
    read_motion_header,
    save_skeleton,
    save_taxonomy,
    write_embeddings,
    write_manifest,
    write_metric_report,
    write_motion,
)
from .kinematics import (
    CanonicalizeConfig,
    PoseSequence,
    canonicalize,
    finite_differences,
    forward_kinematics,
    resample,
    resample_rotations,
)
from .physical import (
    DynamicScoreConfig,
    DynamicScoreResult,
    PhysicalMetricConfig,
    acceleration_peaks,
    clip_metrics,
    dynamic_score,
    floating,
    foot_skating,
    ground_penetration,
    jerk,
)
from .report import (
    CategoryAggregate,
    MetricStats,
    StatsReport,
    VizExportOptions,
    aggregate_by_taxonomy,
    chart_data,
    dataset_stats,
    decimate_indices,
    export_viz_scene,
    validate_viz_scene,
    write_viz_scene,
)
