"""Distance-based robustness metrics over a classifier's feature space.

The inputs are penultimate-layer feature vectors grouped by the model's own
predicted labels. RDI compares the mean within-class spread (IntraD) against
the mean distance of class centers from their common center (InterD) and
reports (InterD - IntraD) / max(InterD, IntraD), a value in [-1, 1]. The
ROBY baseline combines min-max normalized intra-class and pairwise
inter-class terms instead; it is reproduced here for comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

__all__ = [
    "FeatureSet",
    "ClassStats",
    "RdiReport",
    "RobyReport",
    "euclidean_distance",
    "compute_class_statistics",
    "compute_global_center",
    "compute_interd",
    "compute_rdi",
    "min_max_normalize",
    "compute_roby",
]


@dataclass(frozen=True)
class FeatureSet:
    """N feature vectors with the model's predicted class labels.

    vectors: (N, D) matrix, one embedding per sample; stored as float64.
    labels: length-N predicted class indices in [0, num_classes).
    num_classes: total number of classes; classes may be empty.
    """

    vectors: np.ndarray
    labels: np.ndarray
    num_classes: int

    def __post_init__(self) -> None:
        vectors = np.ascontiguousarray(np.asarray(self.vectors, dtype=np.float64))
        labels = np.asarray(self.labels)
        if vectors.ndim != 2:
            raise ValidationError(f"vectors must be a 2-D matrix, got ndim={vectors.ndim}")
        if vectors.shape[0] < 1:
            raise ValidationError("feature set must contain at least one sample")
        if vectors.shape[1] < 1:
            raise ValidationError("feature vectors must have at least one dimension")
        if labels.ndim != 1 or not np.issubdtype(labels.dtype, np.integer):
            raise ValidationError("labels must be a 1-D integer array")
        labels = np.ascontiguousarray(labels.astype(np.int64))
        if labels.shape[0] != vectors.shape[0]:
            raise ValidationError(
                f"row count mismatch: {vectors.shape[0]} vectors vs {labels.shape[0]} labels"
            )
        if self.num_classes < 1:
            raise ValidationError(f"num_classes must be >= 1, got {self.num_classes}")
        if labels.min() < 0:
            raise ValidationError(f"negative label {labels.min()}")
        if labels.max() >= self.num_classes:
            raise ValidationError(
                f"label {labels.max()} out of range for {self.num_classes} classes"
            )
        finite_rows = np.isfinite(vectors).all(axis=1)
        if not finite_rows.all():
            row = int(np.flatnonzero(~finite_rows)[0])
            raise ValidationError(f"non-finite value in row {row}")
        object.__setattr__(self, "vectors", vectors)
        object.__setattr__(self, "labels", labels)

    @property
    def num_samples(self) -> int:
        return self.vectors.shape[0]

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]


@dataclass(frozen=True)
class ClassStats:
    """Center and spread of one class; empty classes carry no center."""

    class_index: int
    count: int
    center: np.ndarray | None
    intra_distance: float

    @property
    def is_empty(self) -> bool:
        return self.count == 0


@dataclass(frozen=True)
class RdiReport:
    intra_d: float
    inter_d: float
    global_center: np.ndarray
    rdi: float
    effective_classes: int
    per_class: tuple[ClassStats, ...]
    warnings: tuple[str, ...] = ()


@dataclass(frozen=True)
class RobyReport:
    """ROBY baseline values; pairwise_roby holds the pre-normalization terms."""

    class_indices: tuple[int, ...]
    fsa: tuple[float, ...]
    pairs: tuple[tuple[int, int], ...]
    fsd: tuple[float, ...]
    pairwise_roby: tuple[float, ...]
    roby: float


def euclidean_distance(a, b) -> float:
    """l2 distance between two equal-length vectors of finite coordinates."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.ndim != 1 or b.ndim != 1 or a.shape != b.shape:
        raise ValidationError(f"dimension mismatch: {a.shape} vs {b.shape}")
    if not (np.isfinite(a).all() and np.isfinite(b).all()):
        raise ValidationError("non-finite coordinate")
    d = a - b
    return math.sqrt(float(np.dot(d, d)))


def _class_aggregates(fs: FeatureSet) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-class counts, centers, and summed distances to the own-class center.

    bincount accumulates in ascending sample order, which pins the reduction
    order and keeps repeated runs bit-identical.
    """
    k = fs.num_classes
    counts = np.bincount(fs.labels, minlength=k)
    sums = np.empty((k, fs.dim))
    for d in range(fs.dim):
        sums[:, d] = np.bincount(fs.labels, weights=fs.vectors[:, d], minlength=k)
    centers = np.zeros_like(sums)
    occupied = counts > 0
    centers[occupied] = sums[occupied] / counts[occupied, None]
    diffs = fs.vectors - centers[fs.labels]
    dists = np.sqrt(np.einsum("ij,ij->i", diffs, diffs))
    dist_sums = np.bincount(fs.labels, weights=dists, minlength=k)
    return counts, centers, dist_sums


def compute_class_statistics(fs: FeatureSet) -> list[ClassStats]:
    """Center and mean center-distance for every class of the feature set."""
    counts, centers, dist_sums = _class_aggregates(fs)
    stats = []
    for k in range(fs.num_classes):
        count = int(counts[k])
        if count == 0:
            stats.append(ClassStats(k, 0, None, 0.0))
        else:
            stats.append(ClassStats(k, count, centers[k].copy(), float(dist_sums[k]) / count))
    return stats


def compute_global_center(stats: list[ClassStats]) -> np.ndarray:
    """Unweighted mean of the non-empty class centers (not the sample mean)."""
    occupied = [s for s in stats if not s.is_empty]
    if not occupied:
        raise ValidationError("all classes are empty")
    dim = occupied[0].center.shape[0]
    n = len(occupied)
    # fsum is order-independent, so relabeling classes cannot perturb the center
    return np.array([math.fsum(s.center[d] for s in occupied) / n for d in range(dim)])


def compute_interd(stats: list[ClassStats], global_center: np.ndarray) -> float:
    """Mean distance of the non-empty class centers from the global center."""
    occupied = [s for s in stats if not s.is_empty]
    if not occupied:
        raise ValidationError("all classes are empty")
    dists = [euclidean_distance(s.center, global_center) for s in occupied]
    return math.fsum(dists) / len(occupied)


def compute_rdi(fs: FeatureSet) -> RdiReport:
    """Full RDI evaluation of a feature set.

    IntraD averages each class's mean distance to its own center, InterD
    averages the class-center distances to their common center, and

        rdi = (InterD - IntraD) / max(InterD, IntraD)

    with rdi = 0 when both distances vanish (all vectors identical). Empty
    classes are excluded from every average; a single non-empty class is
    legal but flagged, since separation is zero by construction.
    """
    stats = compute_class_statistics(fs)
    occupied = [s for s in stats if not s.is_empty]
    intra_d = math.fsum(s.intra_distance for s in occupied) / len(occupied)
    global_center = compute_global_center(stats)
    inter_d = compute_interd(stats, global_center)
    denom = max(inter_d, intra_d)
    rdi = 0.0 if denom == 0.0 else (inter_d - intra_d) / denom
    warnings = ()
    if len(occupied) < 2:
        warnings = (
            "only one non-empty class: inter-class separation is zero by "
            "construction and the value is not comparable across models",
        )
    return RdiReport(
        intra_d=intra_d,
        inter_d=inter_d,
        global_center=global_center,
        rdi=rdi,
        effective_classes=len(occupied),
        per_class=tuple(stats),
        warnings=warnings,
    )


def min_max_normalize(values) -> np.ndarray:
    """Map values to [0, 1] via (v - min) / (max - min); all zeros when max = min."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise ValidationError("min_max_normalize needs a non-empty 1-D list")
    if not np.isfinite(arr).all():
        raise ValidationError("non-finite value")
    lo = float(arr.min())
    hi = float(arr.max())
    if hi == lo:
        return np.zeros_like(arr)
    return (arr - lo) / (hi - lo)


def _normalized_term(value: float, values: np.ndarray) -> float:
    """One min-max normalized term, rescanning its set as the formula is written."""
    lo = float(values.min())
    hi = float(values.max())
    if hi == lo:
        return 0.0
    return (value - lo) / (hi - lo)


def compute_roby(fs: FeatureSet) -> RobyReport:
    """ROBY baseline over the non-empty classes of a feature set.

    Per class, FSA is the min-max normalized sum of distances to the class
    center divided by the class size; per pair, FSD is the normalized center
    distance; the pairwise score is FSA_i + FSA_j - FSD_ij and the aggregate
    is the mean of the normalized pairwise scores. All normalizations are
    scoped to this one evaluation.

    The baseline is defined term by term, a normalization per class, per
    pair, and per aggregate summand, and is evaluated here the same way; the
    quadratic pair count times the per-term normalization is what makes its
    cost blow up with the number of classes.
    """
    counts, centers, dist_sums = _class_aggregates(fs)
    occupied = np.flatnonzero(counts > 0)
    if occupied.size < 2:
        raise ValidationError("ROBY needs at least two non-empty classes")

    fsa_raw = dist_sums[occupied]
    fsa = [
        _normalized_term(float(fsa_raw[p]), fsa_raw) / int(counts[k])
        for p, k in enumerate(occupied)
    ]

    pairs = [
        (int(occupied[a]), int(occupied[b]))
        for a in range(occupied.size)
        for b in range(a + 1, occupied.size)
    ]
    fsd_raw = np.array([euclidean_distance(centers[i], centers[j]) for i, j in pairs])
    fsd = [_normalized_term(float(v), fsd_raw) for v in fsd_raw]

    position = {int(k): p for p, k in enumerate(occupied)}
    pairwise = np.array(
        [fsa[position[i]] + fsa[position[j]] - fsd[p] for p, (i, j) in enumerate(pairs)]
    )
    roby = math.fsum(_normalized_term(float(v), pairwise) for v in pairwise) / len(pairs)

    return RobyReport(
        class_indices=tuple(int(k) for k in occupied),
        fsa=tuple(fsa),
        pairs=tuple(pairs),
        fsd=tuple(fsd),
        pairwise_roby=tuple(float(v) for v in pairwise),
        roby=roby,
    )
