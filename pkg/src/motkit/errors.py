"""Exception types shared across the toolkit.

Everything raised on purpose derives from :class:`MotkitError`, so callers
(and the command-line layer) can distinguish domain failures from bugs.
"""


class MotkitError(Exception):
    """Base class for all toolkit errors."""


# ---------------------------------------------------------------------------
# taxonomy and labels


class TaxonomyError(MotkitError):
    """Structurally invalid taxonomy (duplicate sibling names, bad shape)."""


class UnknownLabel(MotkitError):
    """A label does not resolve to any taxonomy node.

    ``level`` names the level at which resolution failed
    ("category", "subcategory" or "atomic_action").
    """

    def __init__(self, level: str, label: str):
        super().__init__(f"unknown {level}: {label!r}")
        self.level = level
        self.label = label


class AmbiguousLabel(MotkitError):
    """Normalization maps one label onto more than one sibling node."""

    def __init__(self, level: str, label: str, candidates):
        names = ", ".join(repr(c) for c in candidates)
        super().__init__(f"ambiguous {level}: {label!r} matches {names}")
        self.level = level
        self.label = label
        self.candidates = tuple(candidates)


class DuplicateClipId(MotkitError):
    """A manifest contains the same clip_id more than once."""


# ---------------------------------------------------------------------------
# binary file formats


class BadMagic(MotkitError):
    """File does not start with the expected magic bytes."""


class UnsupportedVersion(MotkitError):
    """File declares a format version or layout this reader cannot handle."""


class TruncatedPayload(MotkitError):
    """Declared payload size does not match the bytes actually present."""


class IdCountMismatch(MotkitError):
    """Embedding id list length differs from the declared row count."""


class BadQuaternion(MotkitError):
    """A stored rotation is too far from unit norm to be trusted."""


# ---------------------------------------------------------------------------
# kinematics


class JointCountMismatch(MotkitError):
    """Pose or motion joint count does not match the skeleton."""


class TooFewFrames(MotkitError):
    """Operation needs more frames than the motion provides."""


class DegenerateFacing(MotkitError):
    """Facing direction is undefined because the hip axis is vertical."""


# ---------------------------------------------------------------------------
# per-clip metrics


class ShapeMismatch(MotkitError):
    """Velocity array shape does not match the motion it belongs to."""


class NoFootJoints(MotkitError):
    """A foot-contact metric was requested without any foot joints."""


# ---------------------------------------------------------------------------
# distribution-level metrics


class DimensionMismatch(MotkitError):
    """Embedding sets disagree on feature dimension."""


class TooFewSamples(MotkitError):
    """Not enough samples for the requested protocol."""


class IdMisalignment(MotkitError):
    """Paired embedding sets do not share an aligned id sequence."""


class DegenerateCovarianceWarning(UserWarning):
    """Covariance needed eigenvalue clamping; result is still reported."""


# ---------------------------------------------------------------------------
# dataset curation


class UnresolvableGroup(MotkitError):
    """A clip cannot be assigned to a filter group at the requested level."""


class UniverseMismatch(MotkitError):
    """Two filter outcomes do not cover the same set of clips."""


class MissingScore(MotkitError):
    """A clip in the manifest has no score in the score map."""


# ---------------------------------------------------------------------------
# reporting and export


class TooManyTracks(MotkitError):
    """Scene export was asked for more tracks than the format allows."""


class SceneSchemaError(MotkitError):
    """A scene document violates the viewer schema; message names the path."""
