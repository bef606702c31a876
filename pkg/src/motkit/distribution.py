"""Distribution-level evaluation metrics over precomputed embeddings.

These operate purely on :class:`~motkit.io.EmbeddingSet` values; producing
the embeddings is someone else's job. All randomized protocols are driven by
an explicit seed and are bitwise reproducible for a given seed.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateCovarianceWarning,
    DimensionMismatch,
    IdMisalignment,
    TooFewSamples,
)
from .io import EmbeddingSet

DEFAULT_BATCH_SIZE = 32
DEFAULT_TOP_KS = (1, 2, 3)
DEFAULT_DIVERSITY_PAIRS = 300
_CLAMP_WARN_TOLERANCE = 1e-8


@dataclass(frozen=True)
class RetrievalProtocol:
    """Protocol constants for the seeded evaluation procedures."""

    batch_size: int = DEFAULT_BATCH_SIZE
    top_ks: tuple = DEFAULT_TOP_KS
    seed: int = 0
    num_diversity_pairs: int = DEFAULT_DIVERSITY_PAIRS

    def __post_init__(self):
        object.__setattr__(self, "top_ks", tuple(int(k) for k in self.top_ks))
        if not self.top_ks or min(self.top_ks) < 1:
            raise ValueError("top_ks must be positive integers")
        if self.batch_size < max(self.top_ks) + 1:
            raise ValueError(
                f"batch_size {self.batch_size} too small for top-{max(self.top_ks)}"
            )
        if self.num_diversity_pairs < 1:
            raise ValueError("num_diversity_pairs must be positive")


@dataclass(frozen=True)
class GaussianSummary:
    """Mean and unbiased covariance of an embedding set, in float64."""

    mean: np.ndarray
    covariance: np.ndarray

    def __post_init__(self):
        mean = np.array(self.mean, dtype=np.float64)
        cov = np.array(self.covariance, dtype=np.float64)
        if mean.ndim != 1 or cov.shape != (mean.size, mean.size):
            raise ValueError("mean must be (D,) and covariance (D, D)")
        if np.abs(cov - cov.T).max() > 1e-8:
            raise ValueError("covariance must be symmetric")
        cov = 0.5 * (cov + cov.T)
        mean.setflags(write=False)
        cov.setflags(write=False)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "covariance", cov)

    @classmethod
    def fit(cls, embeddings: EmbeddingSet) -> "GaussianSummary":
        if embeddings.count < 2:
            raise TooFewSamples("covariance needs at least 2 samples")
        rows = embeddings.rows.astype(np.float64)
        mean = rows.mean(axis=0)
        cov = np.cov(rows, rowvar=False)
        cov = np.atleast_2d(cov)
        return cls(mean, cov)


def _psd_sqrt_trace(mat: np.ndarray) -> float:
    """Trace of the PSD square root via symmetric eigendecomposition.

    Negative eigenvalues (numerical artifacts of near-singular covariances)
    are clamped to zero; material clamping raises a
    :class:`DegenerateCovarianceWarning` but the value is still returned.
    """
    eigvals = np.linalg.eigvalsh(mat)
    floor = -_CLAMP_WARN_TOLERANCE * max(1.0, float(np.abs(eigvals).max()))
    if float(eigvals.min()) < floor:
        warnings.warn(
            f"covariance product has eigenvalue {float(eigvals.min()):.3g}; "
            "clamping to 0",
            DegenerateCovarianceWarning,
            stacklevel=3,
        )
    return float(np.sqrt(np.clip(eigvals, 0.0, None)).sum())


def _psd_sqrt(mat: np.ndarray) -> np.ndarray:
    eigvals, eigvecs = np.linalg.eigh(mat)
    clipped = np.clip(eigvals, 0.0, None)
    return (eigvecs * np.sqrt(clipped)) @ eigvecs.T


def frechet_distance(a: GaussianSummary, b: GaussianSummary) -> float:
    """Frechet distance between two Gaussians.

    ``||mu_a - mu_b||^2 + tr(C_a) + tr(C_b) - 2 tr((C_a C_b)^(1/2))``, with
    the matrix square root computed on the symmetrized product
    ``sqrt(C_b) C_a sqrt(C_b)`` so eigendecomposition stays in the symmetric
    regime.
    """
    if a.mean.size != b.mean.size:
        raise DimensionMismatch(
            f"summaries have dims {a.mean.size} and {b.mean.size}"
        )
    diff = a.mean - b.mean
    sqrt_b = _psd_sqrt(b.covariance)
    inner = sqrt_b @ a.covariance @ sqrt_b
    inner = 0.5 * (inner + inner.T)
    trace_sqrt = _psd_sqrt_trace(inner)
    return float(
        diff @ diff
        + np.trace(a.covariance)
        + np.trace(b.covariance)
        - 2.0 * trace_sqrt
    )


def fid(real: EmbeddingSet, generated: EmbeddingSet) -> float:
    """Frechet distance between Gaussian fits of two embedding sets."""
    if real.dim != generated.dim:
        raise DimensionMismatch(
            f"embedding dims differ: {real.dim} vs {generated.dim}"
        )
    return frechet_distance(GaussianSummary.fit(real), GaussianSummary.fit(generated))


def diversity(
    embeddings: EmbeddingSet, protocol: RetrievalProtocol = RetrievalProtocol()
) -> float:
    """Mean distance between two disjoint sampled subsets of the set.

    A seeded permutation picks ``2 * num_diversity_pairs`` distinct rows; the
    first half is paired with the second half and the Euclidean distances are
    averaged.
    """
    pairs = protocol.num_diversity_pairs
    if embeddings.count < 2 * pairs:
        raise TooFewSamples(
            f"diversity with {pairs} pairs needs {2 * pairs} samples, "
            f"got {embeddings.count}"
        )
    rng = np.random.default_rng(protocol.seed)
    perm = rng.permutation(embeddings.count)
    rows = embeddings.rows.astype(np.float64)
    first = rows[perm[:pairs]]
    second = rows[perm[pairs : 2 * pairs]]
    return float(np.linalg.norm(first - second, axis=1).mean())


def _check_aligned(text: EmbeddingSet, motion: EmbeddingSet) -> None:
    if text.ids != motion.ids:
        raise IdMisalignment("text and motion sets must share the same id order")
    if text.dim != motion.dim:
        raise DimensionMismatch(
            f"embedding dims differ: {text.dim} vs {motion.dim}"
        )


def matching_score(
    text: EmbeddingSet, motion: EmbeddingSet, mode: str = "distance"
) -> float:
    """Mean per-pair alignment between matched text and motion embeddings.

    ``mode="distance"`` (default) averages Euclidean distances, lower being
    better. ``mode="similarity"`` averages dot products, higher being better.
    """
    _check_aligned(text, motion)
    t = text.rows.astype(np.float64)
    m = motion.rows.astype(np.float64)
    if mode == "distance":
        return float(np.linalg.norm(t - m, axis=1).mean())
    if mode == "similarity":
        return float((t * m).sum(axis=1).mean())
    raise ValueError(f"mode must be 'distance' or 'similarity', got {mode!r}")


def r_precision(
    text: EmbeddingSet,
    motion: EmbeddingSet,
    protocol: RetrievalProtocol = RetrievalProtocol(),
) -> dict:
    """Batched retrieval accuracy of matched pairs, per top-k.

    Ids are shuffled with the protocol seed and split into consecutive
    batches of ``batch_size``; a trailing partial batch is dropped. Within a
    batch, each text row queries all motion rows of the batch by Euclidean
    distance; ties rank the lower batch position first (stable sort). The
    result maps each k to the fraction of queries whose own motion ranked in
    the top k.
    """
    _check_aligned(text, motion)
    n = text.count
    if n < protocol.batch_size:
        raise TooFewSamples(
            f"r_precision needs at least {protocol.batch_size} pairs, got {n}"
        )
    rng = np.random.default_rng(protocol.seed)
    perm = rng.permutation(n)
    batch = protocol.batch_size
    num_batches = n // batch
    hits = {k: 0 for k in protocol.top_ks}
    t = text.rows.astype(np.float64)
    m = motion.rows.astype(np.float64)
    for b in range(num_batches):
        idx = perm[b * batch : (b + 1) * batch]
        tb = t[idx]
        mb = m[idx]
        deltas = tb[:, None, :] - mb[None, :, :]
        dists = np.einsum("qkd,qkd->qk", deltas, deltas)
        order = np.argsort(dists, axis=1, kind="stable")
        ranks = np.argmax(order == np.arange(batch)[:, None], axis=1)
        for k in protocol.top_ks:
            hits[k] += int((ranks < k).sum())
    total = num_batches * batch
    return {k: hits[k] / total for k in sorted(hits)}
