"""Core domain types: motion sequences, skeletons, clip metadata, taxonomy.

Conventions used throughout the toolkit:

* coordinates are meters in a Y-up right-handed frame, ground plane at y = 0
* motions are dense ``(num_frames, num_joints, 3)`` float arrays
* all types are immutable after construction (arrays are marked read-only),
  so values can be shared freely across worker threads
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

import numpy as np

from .errors import AmbiguousLabel, TaxonomyError, UnknownLabel


def _frozen_array(values, dtype=np.float64) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class MotionSequence:
    """Joint positions over time, shape ``(num_frames, num_joints, 3)``.

    Coordinates must be finite. The array is copied and marked read-only at
    construction; derived quantities always allocate fresh arrays.
    """

    positions: np.ndarray
    fps: float

    def __post_init__(self):
        pos = np.array(self.positions, dtype=np.float64)
        if pos.ndim != 3 or pos.shape[2] != 3:
            raise ValueError(f"positions must have shape (F, J, 3), got {pos.shape}")
        if pos.shape[0] < 1 or pos.shape[1] < 1:
            raise ValueError("motion needs at least one frame and one joint")
        if not np.isfinite(pos).all():
            raise ValueError("positions contain NaN or Inf")
        fps = float(self.fps)
        if not fps > 0:
            raise ValueError(f"fps must be positive, got {fps}")
        pos.setflags(write=False)
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "fps", fps)

    @property
    def num_frames(self) -> int:
        return self.positions.shape[0]

    @property
    def num_joints(self) -> int:
        return self.positions.shape[1]

    @property
    def duration_seconds(self) -> float:
        return self.num_frames / self.fps


@dataclass(frozen=True)
class JointVelocities:
    """Finite-difference derivative of joint positions, same (F, J, 3) shape.

    Values are in meters per frame (or per frame^k for higher orders).
    ``derivation`` records the difference scheme and padding applied, so a
    report can state exactly how a number was produced.
    """

    values: np.ndarray
    derivation: str

    def __post_init__(self):
        vals = np.array(self.values, dtype=np.float64)
        if vals.ndim != 3 or vals.shape[2] != 3:
            raise ValueError(f"values must have shape (F, J, 3), got {vals.shape}")
        if not np.isfinite(vals).all():
            raise ValueError("velocity values contain NaN or Inf")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)


@dataclass(frozen=True)
class Skeleton:
    """Kinematic tree in topological order.

    ``parents[0]`` is ``-1`` (the root); every other joint has a parent with
    a smaller index, so a single forward pass visits parents before children.
    ``offsets`` holds each joint's rest position relative to its parent.
    """

    parents: tuple
    offsets: np.ndarray
    names: tuple
    foot_joints: tuple = ()

    def __post_init__(self):
        parents = tuple(int(p) for p in self.parents)
        if not parents:
            raise ValueError("skeleton needs at least one joint")
        if parents[0] != -1:
            raise ValueError("joint 0 must be the root (parent -1)")
        for j, p in enumerate(parents[1:], start=1):
            if not 0 <= p < j:
                raise ValueError(
                    f"joint {j} has parent {p}; parents must precede children"
                )
        if parents.count(-1) != 1:
            raise ValueError("exactly one joint may have parent -1")
        offsets = np.array(self.offsets, dtype=np.float64)
        if offsets.shape != (len(parents), 3):
            raise ValueError(
                f"offsets must have shape ({len(parents)}, 3), got {offsets.shape}"
            )
        if not np.isfinite(offsets).all():
            raise ValueError("offsets contain NaN or Inf")
        names = tuple(str(n) for n in self.names)
        if len(names) != len(parents):
            raise ValueError("need one name per joint")
        feet = tuple(int(j) for j in self.foot_joints)
        for j in feet:
            if not 0 <= j < len(parents):
                raise ValueError(f"foot joint {j} out of range")
        offsets.setflags(write=False)
        object.__setattr__(self, "parents", parents)
        object.__setattr__(self, "offsets", offsets)
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "foot_joints", feet)

    @property
    def num_joints(self) -> int:
        return len(self.parents)

    @property
    def root_index(self) -> int:
        return 0


@dataclass(frozen=True)
class ClipRecord:
    """One dataset entry: where the motion lives plus its annotations.

    Label fields are optional; clips may be unlabeled at any level.
    ``captions`` conventionally holds five descriptions per clip but any
    count is accepted.
    """

    clip_id: str
    motion_file: str
    fps: float
    num_frames: int
    captions: tuple = ()
    category: Optional[str] = None
    subcategory: Optional[str] = None
    atomic_action: Optional[str] = None
    source: str = ""

    def __post_init__(self):
        object.__setattr__(self, "captions", tuple(self.captions))

    @property
    def duration_seconds(self) -> float:
        return self.num_frames / self.fps


def normalize_label(label: str) -> str:
    """Canonical matching form: casefolded, runs of whitespace collapsed."""
    return " ".join(label.split()).casefold()


@dataclass(frozen=True)
class TaxonomyNodeRef:
    """Canonical reference to a taxonomy node at any of the three levels."""

    category: str
    subcategory: Optional[str] = None
    atomic_action: Optional[str] = None

    @property
    def level(self) -> str:
        if self.atomic_action is not None:
            return "atomic_action"
        if self.subcategory is not None:
            return "subcategory"
        return "category"


class Taxonomy:
    """Three-level action hierarchy: category -> subcategory -> atomic action.

    Construction validates sibling uniqueness of raw names. Lookup is
    case-insensitive with whitespace collapse; if normalization makes two
    sibling names collide, resolving either raises :class:`AmbiguousLabel`.
    """

    def __init__(self, tree: Mapping[str, Mapping[str, Sequence[str]]]):
        cats: dict[str, dict[str, tuple]] = {}
        for cat, subs in tree.items():
            if cat in cats:
                raise TaxonomyError(f"duplicate category {cat!r}")
            sub_map: dict[str, tuple] = {}
            for sub, atoms in subs.items():
                if sub in sub_map:
                    raise TaxonomyError(f"duplicate subcategory {sub!r} in {cat!r}")
                atoms = tuple(str(a) for a in atoms)
                if len(set(atoms)) != len(atoms):
                    raise TaxonomyError(
                        f"duplicate atomic action under {cat!r}/{sub!r}"
                    )
                sub_map[str(sub)] = atoms
            cats[str(cat)] = sub_map
        self._tree = cats
        self._cat_index = _normalized_index(cats.keys())
        self._sub_index = {
            cat: _normalized_index(subs.keys()) for cat, subs in cats.items()
        }
        self._atom_index = {
            (cat, sub): _normalized_index(atoms)
            for cat, subs in cats.items()
            for sub, atoms in subs.items()
        }

    def categories(self) -> tuple:
        return tuple(self._tree.keys())

    def subcategories(self, category: str) -> tuple:
        return tuple(self._tree[category].keys())

    def atomic_actions(self, category: str, subcategory: str) -> tuple:
        return self._tree[category][subcategory]

    def node_counts(self) -> tuple:
        """(num categories, num subcategories, num atomic actions)."""
        n_sub = sum(len(subs) for subs in self._tree.values())
        n_atom = sum(
            len(atoms) for subs in self._tree.values() for atoms in subs.values()
        )
        return (len(self._tree), n_sub, n_atom)

    def to_tree(self) -> dict:
        """Plain nested dict suitable for JSON serialization."""
        return {
            cat: {sub: list(atoms) for sub, atoms in subs.items()}
            for cat, subs in self._tree.items()
        }

    def has_node(self, name: str, level: str) -> bool:
        """True if any node at ``level`` normalizes to the same key as ``name``."""
        key = normalize_label(name)
        if level == "category":
            return key in self._cat_index
        if level == "subcategory":
            return any(key in idx for idx in self._sub_index.values())
        if level == "atomic_action":
            return any(key in idx for idx in self._atom_index.values())
        raise ValueError(f"unknown taxonomy level {level!r}")

    def resolve(
        self,
        category: str,
        subcategory: Optional[str] = None,
        atomic_action: Optional[str] = None,
    ) -> TaxonomyNodeRef:
        """Resolve labels to canonical node names, top-down.

        Raises :class:`UnknownLabel` naming the first level that fails, and
        :class:`AmbiguousLabel` when normalization collides.
        """
        cat = _resolve_one(self._cat_index, category, "category")
        if subcategory is None:
            if atomic_action is not None:
                raise ValueError("atomic_action given without subcategory")
            return TaxonomyNodeRef(cat)
        sub = _resolve_one(self._sub_index[cat], subcategory, "subcategory")
        if atomic_action is None:
            return TaxonomyNodeRef(cat, sub)
        atom = _resolve_one(self._atom_index[(cat, sub)], atomic_action, "atomic_action")
        return TaxonomyNodeRef(cat, sub, atom)


def _normalized_index(names) -> dict:
    index: dict[str, list] = {}
    for name in names:
        index.setdefault(normalize_label(name), []).append(name)
    return index


def _resolve_one(index: Mapping[str, list], label: str, level: str) -> str:
    matches = index.get(normalize_label(label), [])
    if not matches:
        raise UnknownLabel(level, label)
    if len(matches) > 1:
        raise AmbiguousLabel(level, label, matches)
    return matches[0]


def resolve_taxonomy_label(
    taxonomy: Taxonomy,
    category: str,
    subcategory: Optional[str] = None,
    atomic_action: Optional[str] = None,
) -> TaxonomyNodeRef:
    """Module-level convenience wrapper around :meth:`Taxonomy.resolve`."""
    return taxonomy.resolve(category, subcategory, atomic_action)


@dataclass(frozen=True)
class ValidityPolicy:
    """Dataset admission rules. Violations are data to report, not errors."""

    min_frames: int = 30
    max_frames: int = 600
    required_fps: float = 30.0
    fps_tolerance: float = 1e-6


@dataclass(frozen=True)
class ValidityReport:
    clip_id: str
    violations: tuple

    def __post_init__(self):
        object.__setattr__(self, "violations", tuple(self.violations))

    @property
    def valid(self) -> bool:
        return not self.violations


def validate_clip(
    record: ClipRecord,
    motion: MotionSequence,
    policy: ValidityPolicy = ValidityPolicy(),
) -> ValidityReport:
    """Check a loaded clip against the admission policy.

    Frame bounds are inclusive on both ends. The report lists one entry per
    violated rule; an empty list means the clip is valid.
    """
    violations = []
    if motion.num_frames < policy.min_frames:
        violations.append(
            f"too_short: {motion.num_frames} frames < {policy.min_frames}"
        )
    if motion.num_frames > policy.max_frames:
        violations.append(
            f"too_long: {motion.num_frames} frames > {policy.max_frames}"
        )
    if abs(motion.fps - policy.required_fps) > policy.fps_tolerance:
        violations.append(
            f"fps_mismatch: {motion.fps:g} != required {policy.required_fps:g}"
        )
    return ValidityReport(record.clip_id, tuple(violations))
