import json
import struct

import numpy as np
import pytest

from motkit import (
    EmbeddingSet,
    MotionSequence,
    read_embeddings,
    read_manifest,
    read_metric_report,
    read_motion,
    read_motion_header,
    write_embeddings,
    write_manifest,
    write_metric_report,
    write_motion,
)
from motkit.io import (
    MOTION_MAGIC,
    embedding_ids_path,
    load_skeleton,
    read_motion_parts,
    read_rotations,
    save_skeleton,
)
from motkit.errors import (
    BadMagic,
    BadQuaternion,
    DuplicateClipId,
    IdCountMismatch,
    TruncatedPayload,
    UnsupportedVersion,
)

from conftest import make_motion, make_record


def first_diff(a: bytes, b: bytes):
    for i, (x, y) in enumerate(zip(a, b)):
        if x != y:
            return i
    return None if len(a) == len(b) else min(len(a), len(b))


class TestMotionFormat:
    def test_round_trip_small(self, tmp_path):
        m = make_motion([[[0.0, 0.0, 0.0]], [[1.0, 0.0, 0.0]]], fps=30.0)
        path = tmp_path / "clip.mot"
        write_motion(m, path)
        loaded = read_motion(path)
        np.testing.assert_array_equal(loaded.positions, m.positions)
        assert loaded.fps == 30.0

    def test_header_fields(self, tmp_path):
        m = make_motion(np.zeros((7, 4, 3)), fps=25.0)
        path = tmp_path / "clip.mot"
        write_motion(m, path)
        header = read_motion_header(path)
        assert header.num_frames == 7
        assert header.num_joints == 4
        assert header.fps == 25.0
        assert not header.has_rotations

    def test_bad_magic(self, tmp_path):
        path = tmp_path / "clip.mot"
        m = make_motion(np.zeros((2, 1, 3)))
        write_motion(m, path)
        data = bytearray(path.read_bytes())
        data[:4] = b"MOT2"
        path.write_bytes(bytes(data))
        with pytest.raises(BadMagic):
            read_motion(path)

    def test_unsupported_version(self, tmp_path):
        path = tmp_path / "clip.mot"
        m = make_motion(np.zeros((2, 1, 3)))
        write_motion(m, path)
        data = bytearray(path.read_bytes())
        struct.pack_into("<I", data, 4, 9)
        path.write_bytes(bytes(data))
        with pytest.raises(UnsupportedVersion):
            read_motion(path)

    def test_truncated_payload(self, tmp_path):
        path = tmp_path / "clip.mot"
        m = make_motion(np.zeros((100, 2, 3)))
        write_motion(m, path)
        data = path.read_bytes()
        path.write_bytes(data[:-4])  # drop one float
        with pytest.raises(TruncatedPayload):
            read_motion(path)

    def test_declared_count_bounds_checked_before_allocation(self, tmp_path):
        # header claims 2^31 frames but provides no payload
        path = tmp_path / "clip.mot"
        header = struct.pack("<4sIIIfI", MOTION_MAGIC, 1, 2**31, 24, 30.0, 1)
        path.write_bytes(header)
        with pytest.raises(TruncatedPayload):
            read_motion(path)

    def test_trailing_garbage_rejected(self, tmp_path):
        path = tmp_path / "clip.mot"
        m = make_motion(np.zeros((2, 1, 3)))
        write_motion(m, path)
        path.write_bytes(path.read_bytes() + b"\x00\x00\x00\x00")
        with pytest.raises(TruncatedPayload):
            read_motion(path)

    def test_empty_file(self, tmp_path):
        path = tmp_path / "clip.mot"
        path.write_bytes(b"")
        with pytest.raises(BadMagic):
            read_motion(path)

    def test_rotations_section_round_trip(self, tmp_path):
        rng = np.random.default_rng(3)
        m = make_motion(rng.normal(size=(4, 2, 3)).astype(np.float32))
        quats = rng.normal(size=(4, 2, 4))
        quats /= np.linalg.norm(quats, axis=-1, keepdims=True)
        path = tmp_path / "clip.mot"
        write_motion(m, path, rotations=quats)
        header = read_motion_header(path)
        assert header.has_rotations
        rot = read_rotations(path)
        np.testing.assert_allclose(rot, quats, atol=1e-7)
        np.testing.assert_allclose(np.linalg.norm(rot, axis=-1), 1.0, atol=2e-6)

    def test_non_unit_quaternion_rejected(self, tmp_path):
        m = make_motion(np.zeros((2, 1, 3)))
        quats = np.zeros((2, 1, 4))
        quats[..., 0] = 1.5  # 50% off unit norm
        path = tmp_path / "clip.mot"
        write_motion(m, path, rotations=quats)
        with pytest.raises(BadQuaternion):
            read_motion_parts(path)

    def test_slightly_off_quaternion_renormalized(self, tmp_path):
        m = make_motion(np.zeros((2, 1, 3)))
        quats = np.zeros((2, 1, 4))
        quats[..., 0] = 1.0005  # within the 1e-3 tolerance
        path = tmp_path / "clip.mot"
        write_motion(m, path, rotations=quats)
        rot = read_rotations(path)
        np.testing.assert_allclose(np.linalg.norm(rot, axis=-1), 1.0, atol=1e-12)

    def test_round_trip_bytes_random_payloads(self, tmp_path):
        # write -> read -> write must reproduce the file byte for byte
        rng = np.random.default_rng(42)
        for trial in range(100):
            f = int(rng.integers(1, 12))
            j = int(rng.integers(1, 8))
            fps = float(rng.choice([24.0, 30.0, 60.0, 120.0]))
            pos = rng.normal(0, 10, size=(f, j, 3)).astype(np.float32)
            with_rot = trial % 3 == 0
            rot = None
            if with_rot:
                rot = rng.normal(size=(f, j, 4))
                rot /= np.linalg.norm(rot, axis=-1, keepdims=True)
                rot = rot.astype(np.float32)
            a = tmp_path / f"a_{trial}.mot"
            b = tmp_path / f"b_{trial}.mot"
            write_motion(MotionSequence(pos.astype(np.float64), fps), a, rotations=rot)
            header, pos2, rot2 = read_motion_parts(a)
            write_motion(
                MotionSequence(pos2.astype(np.float64), header.fps), b, rotations=rot2
            )
            ba, bb = a.read_bytes(), b.read_bytes()
            assert ba == bb, f"trial {trial}: first differing byte {first_diff(ba, bb)}"


class TestEmbeddingFormat:
    def test_round_trip(self, tmp_path):
        rows = np.arange(6, dtype=np.float32).reshape(3, 2)
        es = EmbeddingSet(rows, ("a", "b", "c"))
        path = tmp_path / "feats.emb"
        write_embeddings(es, path)
        loaded = read_embeddings(path)
        np.testing.assert_array_equal(loaded.rows, rows)
        assert loaded.ids == ("a", "b", "c")

    def test_round_trip_bytes_random(self, tmp_path):
        rng = np.random.default_rng(7)
        for trial in range(100):
            n = int(rng.integers(1, 20))
            d = int(rng.integers(1, 16))
            rows = rng.normal(size=(n, d)).astype(np.float32)
            ids = tuple(f"clip_{trial}_{i}" for i in range(n))
            a = tmp_path / f"a_{trial}.emb"
            b = tmp_path / f"b_{trial}.emb"
            write_embeddings(EmbeddingSet(rows, ids), a)
            write_embeddings(read_embeddings(a), b)
            assert a.read_bytes() == b.read_bytes()
            assert embedding_ids_path(a).read_bytes() == embedding_ids_path(b).read_bytes()

    def test_id_count_mismatch(self, tmp_path):
        es = EmbeddingSet(np.zeros((3, 2), dtype=np.float32), ("a", "b", "c"))
        path = tmp_path / "feats.emb"
        write_embeddings(es, path)
        ids_file = embedding_ids_path(path)
        lines = ids_file.read_text().splitlines()
        ids_file.write_text("\n".join(lines[:2]) + "\n")
        with pytest.raises(IdCountMismatch):
            read_embeddings(path)

    def test_empty_file_is_bad_magic(self, tmp_path):
        path = tmp_path / "feats.emb"
        path.write_bytes(b"")
        with pytest.raises(BadMagic):
            read_embeddings(path)

    def test_truncated_rows(self, tmp_path):
        es = EmbeddingSet(np.zeros((3, 2), dtype=np.float32), ("a", "b", "c"))
        path = tmp_path / "feats.emb"
        write_embeddings(es, path)
        path.write_bytes(path.read_bytes()[:-2])
        with pytest.raises(TruncatedPayload):
            read_embeddings(path)

    def test_duplicate_ids_rejected(self):
        with pytest.raises(ValueError):
            EmbeddingSet(np.zeros((2, 2), dtype=np.float32), ("a", "a"))


class TestSkeletonJson:
    def test_round_trip(self, tmp_path, skeleton24):
        path = tmp_path / "skel.json"
        save_skeleton(skeleton24, path)
        loaded = load_skeleton(path)
        assert loaded.parents == skeleton24.parents
        assert loaded.names == skeleton24.names
        assert loaded.foot_joints == skeleton24.foot_joints
        np.testing.assert_array_equal(loaded.offsets, skeleton24.offsets)

    def test_joint_count_cross_checked(self, tmp_path):
        doc = {
            "num_joints": 3,
            "parents": [-1, 0],
            "offsets": [[0, 0, 0], [0, 1, 0]],
            "names": ["a", "b"],
            "foot_joints": [],
        }
        path = tmp_path / "skel.json"
        path.write_text(json.dumps(doc))
        with pytest.raises(ValueError):
            load_skeleton(path)


class TestManifest:
    def test_round_trip(self, tmp_path):
        records = [make_record("b"), make_record("a", category=None, captions=())]
        path = tmp_path / "manifest.jsonl"
        write_manifest(records, path)
        loaded = read_manifest(path)
        assert loaded == records

    def test_duplicate_clip_id(self, tmp_path):
        path = tmp_path / "manifest.jsonl"
        write_manifest([make_record("a"), make_record("a")], path)
        with pytest.raises(DuplicateClipId):
            read_manifest(path)

    def test_blank_lines_skipped(self, tmp_path):
        path = tmp_path / "manifest.jsonl"
        write_manifest([make_record("a")], path)
        path.write_text(path.read_text() + "\n\n")
        assert len(read_manifest(path)) == 1


class TestMetricReport:
    def test_round_trip_sorted(self, tmp_path):
        per_clip = {"b": {"jerk": 1.5}, "a": {"jerk": 0.25, "floating": 0.0}}
        path = tmp_path / "metrics.jsonl"
        write_metric_report(per_clip, path)
        lines = path.read_text().splitlines()
        assert json.loads(lines[0])["clip_id"] == "a"
        assert read_metric_report(path) == per_clip
