"""Dataset curation: score sweeps, percentile filtering, score partitions.

Filtering is rank-based within groups: keep-top retains exactly
``ceil(percentile / 100 * n)`` clips of each group, drop-top removes that
many. Groups named in the exemption set are passed through untouched, which
lets a filter remove artifacts globally while preserving whole action
families where the flagged behavior is natural.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Optional, Sequence

from .core import ClipRecord, MotionSequence, Taxonomy, normalize_label
from .errors import (
    MissingScore,
    UnknownLabel,
    UniverseMismatch,
    UnresolvableGroup,
)
from .kinematics import finite_differences
from .physical import DynamicScoreConfig, DynamicScoreResult, dynamic_score

GROUP_LEVELS = ("global", "category", "subcategory")
FILTER_MODES = ("keep-top", "drop-top")
GLOBAL_GROUP = "all"


@dataclass(frozen=True)
class FilterPolicy:
    """What to filter on, how hard, and at which taxonomy granularity."""

    metric: str
    mode: str = "keep-top"
    percentile: float = 15.0
    group_by: str = "category"
    exempt_groups: frozenset = frozenset()

    def __post_init__(self):
        if self.mode not in FILTER_MODES:
            raise ValueError(f"mode must be one of {FILTER_MODES}, got {self.mode!r}")
        if self.group_by not in GROUP_LEVELS:
            raise ValueError(
                f"group_by must be one of {GROUP_LEVELS}, got {self.group_by!r}"
            )
        if not 0 < self.percentile <= 100:
            raise ValueError(f"percentile must be in (0, 100], got {self.percentile}")
        object.__setattr__(
            self, "exempt_groups", frozenset(str(g) for g in self.exempt_groups)
        )


@dataclass(frozen=True)
class GroupRetention:
    group: str
    total: int
    kept: int
    exempt: bool

    @property
    def fraction(self) -> float:
        return self.kept / self.total if self.total else 1.0


@dataclass(frozen=True)
class FilterOutcome:
    """Partition of the input clips into kept and removed, with bookkeeping."""

    kept_ids: frozenset
    removed_ids: frozenset
    groups: Mapping[str, GroupRetention]

    def __post_init__(self):
        object.__setattr__(self, "kept_ids", frozenset(self.kept_ids))
        object.__setattr__(self, "removed_ids", frozenset(self.removed_ids))
        object.__setattr__(self, "groups", dict(self.groups))
        if self.kept_ids & self.removed_ids:
            raise ValueError("kept and removed sets overlap")

    @property
    def universe(self) -> frozenset:
        return self.kept_ids | self.removed_ids


@dataclass(frozen=True)
class FilterDiff:
    """Set differences between two filter outcomes over the same clips."""

    rescued_ids: frozenset
    extra_removed_ids: frozenset

    @property
    def rescued_count(self) -> int:
        return len(self.rescued_ids)

    @property
    def extra_removed_count(self) -> int:
        return len(self.extra_removed_ids)


@dataclass(frozen=True)
class ScoreSweep:
    """Per-clip dynamic scores plus per-clip failures that did not abort."""

    scores: Mapping[str, DynamicScoreResult]
    failures: Mapping[str, str]

    def __post_init__(self):
        object.__setattr__(self, "scores", dict(self.scores))
        object.__setattr__(self, "failures", dict(self.failures))


def retained_count(group_size: int, percentile: float) -> int:
    """Exact ``ceil(percentile / 100 * n)`` without float rounding surprises."""
    if group_size < 0:
        raise ValueError("group size cannot be negative")
    frac = Fraction(str(percentile)) * group_size / 100
    return math.ceil(frac)


def score_dataset(
    records: Sequence[ClipRecord],
    motions,
    config: DynamicScoreConfig = DynamicScoreConfig(),
) -> ScoreSweep:
    """Dynamic-score every clip; record per-clip failures instead of raising.

    ``motions`` is either a mapping from clip_id to loaded
    :class:`MotionSequence` or a callable taking the record and returning
    one (typically a file loader).
    """
    scores: dict[str, DynamicScoreResult] = {}
    failures: dict[str, str] = {}
    for rec in records:
        try:
            if callable(motions):
                motion = motions(rec)
            else:
                motion = motions[rec.clip_id]
            if not isinstance(motion, MotionSequence):
                raise TypeError(f"loader returned {type(motion).__name__}")
            velocities = finite_differences(motion, order=1)
            scores[rec.clip_id] = dynamic_score(motion, velocities, config)
        except Exception as exc:  # per-clip isolation is the whole point
            failures[rec.clip_id] = f"{type(exc).__name__}: {exc}"
    return ScoreSweep(scores, failures)


def _group_key(record: ClipRecord, group_by: str) -> str:
    if group_by == "global":
        return GLOBAL_GROUP
    if not record.category or not record.category.strip():
        raise UnresolvableGroup(
            f"clip {record.clip_id!r} has no category label"
        )
    if group_by == "category":
        return record.category
    if not record.subcategory or not record.subcategory.strip():
        raise UnresolvableGroup(
            f"clip {record.clip_id!r} has no subcategory label"
        )
    return f"{record.category}/{record.subcategory}"


def _group_is_exempt(record: ClipRecord, group_by: str, exempt_norms: set) -> bool:
    if not exempt_norms or group_by == "global":
        return False
    labels = [record.category]
    if group_by == "subcategory":
        labels.append(record.subcategory)
    return any(
        label is not None and normalize_label(label) in exempt_norms
        for label in labels
    )


def _validate_exemptions(policy: FilterPolicy, taxonomy: Taxonomy) -> None:
    for name in sorted(policy.exempt_groups):
        if not (
            taxonomy.has_node(name, "category")
            or taxonomy.has_node(name, "subcategory")
        ):
            raise UnknownLabel("exempt group", name)


def adaptive_filter(
    scores: Mapping[str, float],
    records: Sequence[ClipRecord],
    policy: FilterPolicy,
    taxonomy: Optional[Taxonomy] = None,
) -> FilterOutcome:
    """Apply a percentile filter per group, honoring exemptions.

    ``scores`` maps every clip_id in ``records`` to the metric value the
    policy filters on. Groups come from the records' labels at
    ``policy.group_by`` granularity (clips lacking the needed label raise
    :class:`UnresolvableGroup`). Within each non-exempt group the clips are
    ranked by score, descending, ties broken by clip_id ascending; keep-top
    keeps the first ``ceil(percentile/100 * n)``, drop-top removes them.

    When a taxonomy is supplied, exemption names must resolve to a category
    or subcategory node.
    """
    if taxonomy is not None and policy.exempt_groups:
        _validate_exemptions(policy, taxonomy)
    exempt_norms = {normalize_label(g) for g in policy.exempt_groups}

    groups: dict[str, list] = {}
    group_exempt: dict[str, bool] = {}
    for rec in records:
        if rec.clip_id not in scores:
            raise MissingScore(f"no score for clip {rec.clip_id!r}")
        key = _group_key(rec, policy.group_by)
        groups.setdefault(key, []).append(rec)
        group_exempt[key] = _group_is_exempt(rec, policy.group_by, exempt_norms)

    kept: set = set()
    removed: set = set()
    retention: dict[str, GroupRetention] = {}
    for key in sorted(groups):
        members = groups[key]
        ids = [rec.clip_id for rec in members]
        if group_exempt[key]:
            kept.update(ids)
            retention[key] = GroupRetention(key, len(ids), len(ids), exempt=True)
            continue
        ranked = sorted(ids, key=lambda cid: (-scores[cid], cid))
        count = retained_count(len(ranked), policy.percentile)
        top = set(ranked[:count])
        if policy.mode == "keep-top":
            group_kept = top
        else:
            group_kept = set(ranked[count:])
        kept.update(group_kept)
        removed.update(set(ids) - group_kept)
        retention[key] = GroupRetention(key, len(ids), len(group_kept), exempt=False)
    return FilterOutcome(frozenset(kept), frozenset(removed), retention)


@dataclass(frozen=True)
class PartitionSpec:
    """Named lower-bound thresholds, strictly increasing."""

    tiers: tuple = (
        ("tier_a", 0.05),
        ("tier_b", 0.10),
        ("tier_c", 0.15),
        ("tier_d", 0.50),
    )

    def __post_init__(self):
        tiers = tuple((str(name), float(t)) for name, t in self.tiers)
        if not tiers:
            raise ValueError("partition needs at least one tier")
        names = [name for name, _ in tiers]
        if len(set(names)) != len(names):
            raise ValueError("tier names must be unique")
        thresholds = [t for _, t in tiers]
        if any(b <= a for a, b in zip(thresholds, thresholds[1:])):
            raise ValueError("tier thresholds must be strictly increasing")
        object.__setattr__(self, "tiers", tiers)


DEFAULT_PARTITION_SPEC = PartitionSpec()


def partition(
    scores: Mapping[str, float], spec: PartitionSpec = DEFAULT_PARTITION_SPEC
) -> dict:
    """Split clips into nested tiers: tier i holds ids with score >= threshold i.

    Because thresholds increase, each tier is a superset of the next. The
    returned dict preserves the spec's tier order.
    """
    out = {}
    for name, threshold in spec.tiers:
        out[name] = frozenset(
            cid for cid, value in scores.items() if value >= threshold
        )
    return out


def compare_filters(first: FilterOutcome, second: FilterOutcome) -> FilterDiff:
    """Differences of the second outcome relative to the first.

    ``rescued_ids`` were kept by the second but removed by the first;
    ``extra_removed_ids`` the reverse. Outcomes must cover the same clips.
    """
    if first.universe != second.universe:
        raise UniverseMismatch(
            f"outcomes cover different clips "
            f"({len(first.universe)} vs {len(second.universe)})"
        )
    return FilterDiff(
        rescued_ids=frozenset(second.kept_ids & first.removed_ids),
        extra_removed_ids=frozenset(second.removed_ids & first.kept_ids),
    )
