"""Wall-clock scaling harness: metric cost as the class count grows.

The total sample count is held equal across the ladder (per_class applies at
the largest class count), so timing differences isolate the effect of K
rather than dataset size.
"""

from __future__ import annotations

import statistics
import time
from dataclasses import dataclass

from .errors import ValidationError
from .metrics import compute_rdi, compute_roby
from .synth import MixtureSpec, generate_mixture

__all__ = ["BenchRow", "run_scaling_benchmark"]


@dataclass(frozen=True)
class BenchRow:
    num_classes: int
    per_class: int
    total_samples: int
    rdi_ms: float
    roby_ms: float
    roby_over_rdi: float


def _median_ms(fn, repeats: int) -> float:
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        times.append((time.perf_counter() - start) * 1e3)
    return statistics.median(times)


def run_scaling_benchmark(
    class_counts: list[int],
    dim: int,
    per_class: int,
    seed: int,
    repeats: int,
    separation: float = 4.0,
    spread: float = 1.0,
) -> list[BenchRow]:
    """Time compute_rdi and compute_roby on equal-sized mixtures per K."""
    if not class_counts:
        raise ValidationError("need at least one class count")
    if any(k < 2 for k in class_counts):
        raise ValidationError("class counts must be >= 2")
    if per_class < 1:
        raise ValidationError("per_class must be >= 1")
    if repeats < 1:
        raise ValidationError("repeats must be >= 1")
    total = per_class * max(class_counts)
    rows = []
    for k in class_counts:
        n_k = max(total // k, 1)
        fs = generate_mixture(
            MixtureSpec(
                num_classes=k,
                dim=dim,
                per_class=n_k,
                separation=separation,
                spread=spread,
                seed=seed,
            )
        )
        rdi_ms = _median_ms(lambda: compute_rdi(fs), repeats)
        roby_ms = _median_ms(lambda: compute_roby(fs), repeats)
        rows.append(
            BenchRow(
                num_classes=k,
                per_class=n_k,
                total_samples=k * n_k,
                rdi_ms=rdi_ms,
                roby_ms=roby_ms,
                roby_over_rdi=roby_ms / rdi_ms,
            )
        )
    return rows
