"""File formats: binary motion clips, binary embeddings, JSON/JSONL sidecars.

Motion clip format (``.mot``)
-----------------------------

Little-endian throughout. 24-byte header::

    offset  size  field
    0       4     magic, b"MOT1"
    4       4     u32 format version (currently 1)
    8       4     u32 num_frames
    12      4     u32 num_joints
    16      4     f32 fps
    20      4     u32 section bitmask (bit 0: positions, bit 1: rotations)

Payload sections follow the header in bitmask order:

* positions: ``num_frames * num_joints * 3`` f32, row-major, frame index
  varying slowest, then joint, then xyz
* rotations (optional): ``num_frames * num_joints * 4`` f32 unit quaternions
  stored (w, x, y, z)

The positions section is mandatory. Readers verify declared sizes against
the bytes actually present before allocating anything, so a hostile header
cannot trigger a huge allocation. Quaternions are checked to be within 1e-3
of unit norm (tolerating upstream estimator noise); anything off by more
than 1e-6 is renormalized, while already-unit values pass through bitwise so
round-trips stay byte-identical.

Embedding format
----------------

Header ``b"EMB1"``, u32 count, u32 dim, then ``count * dim`` f32 rows.
Clip ids live in a sibling JSONL file (one JSON string per line) at
``<path>.ids.jsonl``; readers reject count mismatches.

Everything text-based (manifests, reports, taxonomy, skeleton) is UTF-8.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Optional

import numpy as np

from .core import ClipRecord, MotionSequence, Skeleton, Taxonomy
from .errors import (
    BadMagic,
    BadQuaternion,
    DuplicateClipId,
    IdCountMismatch,
    TruncatedPayload,
    UnsupportedVersion,
)

MOTION_MAGIC = b"MOT1"
MOTION_VERSION = 1
SECTION_POSITIONS = 1
SECTION_ROTATIONS = 2
_MOTION_HEADER = struct.Struct("<4sIIIfI")

EMBEDDING_MAGIC = b"EMB1"
_EMBEDDING_HEADER = struct.Struct("<4sII")

QUAT_NORM_TOLERANCE = 1e-3
QUAT_PASSTHROUGH_TOLERANCE = 1e-6


@dataclass(frozen=True)
class MotionFileHeader:
    version: int
    num_frames: int
    num_joints: int
    fps: float
    sections: int

    @property
    def has_rotations(self) -> bool:
        return bool(self.sections & SECTION_ROTATIONS)


def _parse_motion_header(data: bytes, path) -> MotionFileHeader:
    if len(data) < _MOTION_HEADER.size:
        if data[: len(MOTION_MAGIC)] != MOTION_MAGIC[: len(data)] or len(data) < 4:
            raise BadMagic(f"{path}: not a motion clip file")
        raise TruncatedPayload(f"{path}: header cut short at {len(data)} bytes")
    magic, version, num_frames, num_joints, fps, sections = _MOTION_HEADER.unpack_from(
        data
    )
    if magic != MOTION_MAGIC:
        raise BadMagic(f"{path}: expected magic {MOTION_MAGIC!r}, found {magic!r}")
    if version != MOTION_VERSION:
        raise UnsupportedVersion(f"{path}: format version {version} not supported")
    if not sections & SECTION_POSITIONS:
        raise UnsupportedVersion(f"{path}: positions section missing from bitmask")
    if sections & ~(SECTION_POSITIONS | SECTION_ROTATIONS):
        raise UnsupportedVersion(f"{path}: unknown section bits 0x{sections:x}")
    return MotionFileHeader(version, num_frames, num_joints, fps, sections)


def read_motion_header(path) -> MotionFileHeader:
    """Read and validate only the fixed-size header."""
    with open(path, "rb") as fh:
        data = fh.read(_MOTION_HEADER.size)
    return _parse_motion_header(data, path)


def read_motion_parts(path):
    """Read a clip file fully: (header, positions f32, rotations f32 or None).

    Sizes declared in the header are checked against the file length before
    any array is built; a short or overlong payload raises
    :class:`TruncatedPayload`.
    """
    data = Path(path).read_bytes()
    header = _parse_motion_header(data, path)
    f, j = header.num_frames, header.num_joints
    pos_count = f * j * 3
    rot_count = f * j * 4 if header.has_rotations else 0
    expected = _MOTION_HEADER.size + 4 * (pos_count + rot_count)
    if len(data) != expected:
        raise TruncatedPayload(
            f"{path}: header declares {expected} bytes, file has {len(data)}"
        )
    offset = _MOTION_HEADER.size
    positions = np.frombuffer(data, dtype="<f4", count=pos_count, offset=offset)
    positions = positions.reshape(f, j, 3)
    rotations = None
    if header.has_rotations:
        offset += 4 * pos_count
        rotations = np.frombuffer(data, dtype="<f4", count=rot_count, offset=offset)
        rotations = rotations.reshape(f, j, 4)
        rotations = rotations.astype(np.float64)
        norms = np.linalg.norm(rotations, axis=-1)
        err = np.abs(norms - 1.0)
        if (err > QUAT_NORM_TOLERANCE).any():
            worst = float(err.max())
            raise BadQuaternion(
                f"{path}: quaternion norm off by {worst:.3g} (limit {QUAT_NORM_TOLERANCE})"
            )
        # values already unit at storage precision pass through untouched so
        # that read->write reproduces the file byte for byte; only sloppier
        # payloads are renormalized
        if (err > QUAT_PASSTHROUGH_TOLERANCE).any():
            rotations = rotations / norms[..., None]
    return header, positions, rotations


def read_motion(path) -> MotionSequence:
    """Load the positions section of a clip as a :class:`MotionSequence`."""
    header, positions, _ = read_motion_parts(path)
    return MotionSequence(positions.astype(np.float64), header.fps)


def read_rotations(path) -> Optional[np.ndarray]:
    """Load the rotations section if present, as (F, J, 4) float64."""
    _, _, rotations = read_motion_parts(path)
    return rotations


def write_motion(motion: MotionSequence, path, rotations=None) -> None:
    """Write a clip file. Positions (and rotations, if given) are cast to f32."""
    sections = SECTION_POSITIONS
    blobs = [np.ascontiguousarray(motion.positions, dtype="<f4").tobytes()]
    if rotations is not None:
        rot = np.asarray(rotations, dtype=np.float64)
        if rot.shape != (motion.num_frames, motion.num_joints, 4):
            raise ValueError(
                f"rotations must have shape (F, J, 4), got {rot.shape}"
            )
        sections |= SECTION_ROTATIONS
        blobs.append(np.ascontiguousarray(rot, dtype="<f4").tobytes())
    header = _MOTION_HEADER.pack(
        MOTION_MAGIC,
        MOTION_VERSION,
        motion.num_frames,
        motion.num_joints,
        motion.fps,
        sections,
    )
    with open(path, "wb") as fh:
        fh.write(header)
        for blob in blobs:
            fh.write(blob)


# ---------------------------------------------------------------------------
# embeddings


@dataclass(frozen=True)
class EmbeddingSet:
    """N x D float32 feature rows with one clip id per row.

    Ids must be unique and rows finite; both are checked at construction.
    """

    rows: np.ndarray
    ids: tuple

    def __post_init__(self):
        rows = np.array(self.rows, dtype=np.float32)
        if rows.ndim != 2:
            raise ValueError(f"rows must be 2-D, got shape {rows.shape}")
        if rows.shape[0] < 1 or rows.shape[1] < 1:
            raise ValueError("embedding set needs at least one row and one column")
        if not np.isfinite(rows).all():
            raise ValueError("embedding rows contain NaN or Inf")
        ids = tuple(str(i) for i in self.ids)
        if len(ids) != rows.shape[0]:
            raise IdCountMismatch(
                f"{len(ids)} ids for {rows.shape[0]} embedding rows"
            )
        if len(set(ids)) != len(ids):
            raise ValueError("embedding ids must be unique")
        rows.setflags(write=False)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "ids", ids)

    @property
    def count(self) -> int:
        return self.rows.shape[0]

    @property
    def dim(self) -> int:
        return self.rows.shape[1]


def embedding_ids_path(path) -> Path:
    return Path(str(path) + ".ids.jsonl")


def write_embeddings(embeddings: EmbeddingSet, path) -> None:
    header = _EMBEDDING_HEADER.pack(
        EMBEDDING_MAGIC, embeddings.count, embeddings.dim
    )
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(np.ascontiguousarray(embeddings.rows, dtype="<f4").tobytes())
    with open(embedding_ids_path(path), "w", encoding="utf-8") as fh:
        for clip_id in embeddings.ids:
            fh.write(json.dumps(clip_id, ensure_ascii=False) + "\n")


def read_embeddings(path) -> EmbeddingSet:
    data = Path(path).read_bytes()
    if len(data) < _EMBEDDING_HEADER.size:
        raise BadMagic(f"{path}: not an embedding file")
    magic, count, dim = _EMBEDDING_HEADER.unpack_from(data)
    if magic != EMBEDDING_MAGIC:
        raise BadMagic(f"{path}: expected magic {EMBEDDING_MAGIC!r}, found {magic!r}")
    expected = _EMBEDDING_HEADER.size + 4 * count * dim
    if len(data) != expected:
        raise TruncatedPayload(
            f"{path}: header declares {expected} bytes, file has {len(data)}"
        )
    rows = np.frombuffer(
        data, dtype="<f4", count=count * dim, offset=_EMBEDDING_HEADER.size
    ).reshape(count, dim)
    ids_file = embedding_ids_path(path)
    ids = []
    with open(ids_file, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                ids.append(json.loads(line))
    if len(ids) != count:
        raise IdCountMismatch(
            f"{ids_file}: {len(ids)} ids for {count} embedding rows"
        )
    return EmbeddingSet(rows, tuple(ids))


# ---------------------------------------------------------------------------
# skeleton JSON


def load_skeleton(path) -> Skeleton:
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    skeleton = Skeleton(
        parents=doc["parents"],
        offsets=doc["offsets"],
        names=doc["names"],
        foot_joints=doc.get("foot_joints", ()),
    )
    declared = doc.get("num_joints")
    if declared is not None and declared != skeleton.num_joints:
        raise ValueError(
            f"{path}: declares {declared} joints but lists {skeleton.num_joints}"
        )
    return skeleton


def save_skeleton(skeleton: Skeleton, path) -> None:
    doc = {
        "num_joints": skeleton.num_joints,
        "parents": list(skeleton.parents),
        "offsets": [list(map(float, row)) for row in skeleton.offsets],
        "names": list(skeleton.names),
        "foot_joints": list(skeleton.foot_joints),
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, ensure_ascii=False)
        fh.write("\n")


def default_skeleton() -> Skeleton:
    """The 24-joint humanoid rig shipped with the package."""
    ref = resources.files("motkit").joinpath("data/skeleton24.json")
    with resources.as_file(ref) as path:
        return load_skeleton(path)


# ---------------------------------------------------------------------------
# manifests (JSONL of clip records)

_RECORD_FIELDS = (
    "clip_id",
    "motion_file",
    "fps",
    "num_frames",
    "captions",
    "category",
    "subcategory",
    "atomic_action",
    "source",
)


def record_to_json(record: ClipRecord) -> dict:
    return {
        "clip_id": record.clip_id,
        "motion_file": record.motion_file,
        "fps": record.fps,
        "num_frames": record.num_frames,
        "captions": list(record.captions),
        "category": record.category,
        "subcategory": record.subcategory,
        "atomic_action": record.atomic_action,
        "source": record.source,
    }


def record_from_json(doc: Mapping) -> ClipRecord:
    return ClipRecord(
        clip_id=str(doc["clip_id"]),
        motion_file=str(doc["motion_file"]),
        fps=float(doc["fps"]),
        num_frames=int(doc["num_frames"]),
        captions=tuple(doc.get("captions") or ()),
        category=doc.get("category"),
        subcategory=doc.get("subcategory"),
        atomic_action=doc.get("atomic_action"),
        source=doc.get("source") or "",
    )


def iter_manifest(path) -> Iterator[ClipRecord]:
    """Stream records one line at a time; blank lines are skipped."""
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                doc = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValueError(f"{path}:{line_no}: invalid JSON: {exc}") from exc
            yield record_from_json(doc)


def read_manifest(path) -> list:
    """Load a whole manifest, enforcing clip_id uniqueness."""
    records = list(iter_manifest(path))
    seen = set()
    for rec in records:
        if rec.clip_id in seen:
            raise DuplicateClipId(f"{path}: clip_id {rec.clip_id!r} appears twice")
        seen.add(rec.clip_id)
    return records


def write_manifest(records: Iterable[ClipRecord], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(record_to_json(rec), sort_keys=True, ensure_ascii=False))
            fh.write("\n")


# ---------------------------------------------------------------------------
# per-clip metric reports (JSONL)


def write_metric_report(per_clip: Mapping[str, Mapping[str, float]], path) -> None:
    """Write ``{"clip_id": ..., "metrics": {...}}`` rows sorted by clip_id."""
    with open(path, "w", encoding="utf-8") as fh:
        for clip_id in sorted(per_clip):
            row = {"clip_id": clip_id, "metrics": dict(per_clip[clip_id])}
            fh.write(json.dumps(row, sort_keys=True, ensure_ascii=False))
            fh.write("\n")


def read_metric_report(path) -> dict:
    per_clip: dict[str, dict] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            row = json.loads(line)
            per_clip[str(row["clip_id"])] = dict(row["metrics"])
    return per_clip


# ---------------------------------------------------------------------------
# taxonomy JSON


def load_taxonomy(path) -> Taxonomy:
    with open(path, "r", encoding="utf-8") as fh:
        tree = json.load(fh)
    if not isinstance(tree, dict):
        raise ValueError(f"{path}: taxonomy must be a JSON object")
    return Taxonomy(tree)


def save_taxonomy(taxonomy: Taxonomy, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(taxonomy.to_tree(), fh, indent=2, ensure_ascii=False)
        fh.write("\n")
