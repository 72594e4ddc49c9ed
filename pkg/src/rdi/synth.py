"""Seeded synthetic feature sets with controllable cluster geometry.

Randomness is a counter-based SplitMix64 stream: draw i of substream t is
mix64(stream_seed(seed, t) + i * GOLDEN), so any draw is addressable without
sequencing state. Normals come from the Box-Muller transform applied to
consecutive uniform pairs. No platform RNG is involved, which keeps output
bit-identical for a given spec across runs, platforms, and library versions.

Substream layout: substream 0 drives the class-center directions, substream
k + 1 drives the samples of class k, so classes could be generated in
parallel without changing the output.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .metrics import FeatureSet, _class_aggregates

__all__ = ["MixtureSpec", "generate_mixture", "contract_toward_centers"]

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX_1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX_2 = np.uint64(0x94D049BB133111EB)
_STREAM_SALT = np.uint64(0xD1B54A32D192ED03)
_U53 = 2.0**-53


@dataclass(frozen=True)
class MixtureSpec:
    """Geometry of a synthetic mixture: K classes of n points around centers
    placed at a fixed radius from the origin."""

    num_classes: int
    dim: int
    per_class: int
    separation: float
    spread: float
    seed: int

    def __post_init__(self) -> None:
        if self.num_classes < 2:
            raise ValidationError("num_classes must be >= 2")
        if self.dim < 2:
            raise ValidationError("dim must be >= 2")
        if self.per_class < 1:
            raise ValidationError("per_class must be >= 1")
        if not (self.separation > 0):
            raise ValidationError("separation must be > 0")
        if not (self.spread > 0):
            raise ValidationError("spread must be > 0")
        if not (0 <= self.seed < 2**64):
            raise ValidationError("seed must be an unsigned 64-bit integer")


def _mix64(x: np.ndarray) -> np.ndarray:
    x = (x ^ (x >> np.uint64(30))) * _MIX_1
    x = (x ^ (x >> np.uint64(27))) * _MIX_2
    return x ^ (x >> np.uint64(31))


def _stream_seed(seed: int, stream: int) -> np.uint64:
    # scalar path in plain ints: numpy scalars warn on wraparound, arrays do not
    mask = (1 << 64) - 1
    z = (seed ^ ((stream + 1) * int(_STREAM_SALT))) & mask
    z = ((z ^ (z >> 30)) * int(_MIX_1)) & mask
    z = ((z ^ (z >> 27)) * int(_MIX_2)) & mask
    return np.uint64(z ^ (z >> 31))


def _uniform_bits(seed: int, stream: int, count: int) -> np.ndarray:
    counters = _stream_seed(seed, stream) + np.arange(1, count + 1, dtype=np.uint64) * _GOLDEN
    return _mix64(counters)


def _normals(seed: int, stream: int, count: int) -> np.ndarray:
    pairs = (count + 1) // 2
    bits = _uniform_bits(seed, stream, 2 * pairs)
    # u1 in (0, 1] so log is finite; u2 in [0, 1)
    u1 = ((bits[0::2] >> np.uint64(11)) + np.uint64(1)) * _U53
    u2 = (bits[1::2] >> np.uint64(11)) * _U53
    radius = np.sqrt(-2.0 * np.log(u1))
    angle = 2.0 * np.pi * u2
    out = np.empty(2 * pairs)
    out[0::2] = radius * np.cos(angle)
    out[1::2] = radius * np.sin(angle)
    return out[:count]


def _center_directions(spec: MixtureSpec) -> np.ndarray:
    raw = _normals(spec.seed, 0, spec.num_classes * spec.dim).reshape(spec.num_classes, spec.dim)
    if spec.num_classes <= spec.dim:
        basis: list[np.ndarray] = []
        for row in raw:
            v = row.copy()
            for b in basis:
                v -= (v @ b) * b
            norm = np.linalg.norm(v)
            if norm < 1e-12:
                raise ValidationError("degenerate center directions for this seed")
            basis.append(v / norm)
        return np.array(basis)
    norms = np.linalg.norm(raw, axis=1)
    if (norms < 1e-12).any():
        raise ValidationError("degenerate center directions for this seed")
    return raw / norms[:, None]


def generate_mixture(spec: MixtureSpec) -> FeatureSet:
    """Deterministic isotropic Gaussian mixture labeled by generating class.

    Centers sit at radius `separation` from the origin along seed-derived
    directions (orthonormalized while K <= D, so center spacing is uniform);
    each class contributes `per_class` rows at standard deviation `spread`.
    """
    centers = spec.separation * _center_directions(spec)
    n, d = spec.per_class, spec.dim
    vectors = np.empty((spec.num_classes * n, d))
    for k in range(spec.num_classes):
        noise = _normals(spec.seed, k + 1, n * d).reshape(n, d)
        vectors[k * n : (k + 1) * n] = centers[k] + spec.spread * noise
    labels = np.repeat(np.arange(spec.num_classes, dtype=np.int64), n)
    return FeatureSet(vectors, labels, spec.num_classes)


def contract_toward_centers(fs: FeatureSet, alpha: float) -> FeatureSet:
    """Pull every row toward its own class center by factor alpha in (0, 1].

    Replaces each row x of class k by center_k + alpha * (x - center_k);
    class centers are unchanged, within-class spread scales by alpha.
    """
    if not (0 < alpha <= 1):
        raise ValidationError(f"alpha must be in (0, 1], got {alpha}")
    if alpha == 1:
        return fs
    _, centers, _ = _class_aggregates(fs)
    anchored = centers[fs.labels]
    contracted = anchored + alpha * (fs.vectors - anchored)
    return FeatureSet(contracted, fs.labels.copy(), fs.num_classes)
