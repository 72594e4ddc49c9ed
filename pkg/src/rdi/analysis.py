"""Correlation of robustness metrics against attack-outcome fixtures.

Fixture rows pair each model's metric values (RDI, ROBY) with its measured
attack success rates; correlation of metric vs average adversarial accuracy
is what validates a metric's ranking power. Spearman is the primary
coefficient since the evidence is ordinal; Pearson is reported alongside.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .errors import ValidationError

__all__ = [
    "RobustnessRecord",
    "CorrelationReport",
    "spearman",
    "pearson",
    "evaluate_fixture",
    "rank_models",
    "parse_fixture_csv",
    "load_fixture_csv",
    "load_bundled_fixture",
    "BUNDLED_FIXTURES",
]

BUNDLED_FIXTURES = ("image_classification", "speech_recognition")

METRIC_FIELDS = ("rdi", "roby")
TARGET_FIELDS = ("adv_accuracy_avg", "asr_avg")

_CONSISTENCY_TOL = 1e-4


@dataclass(frozen=True)
class RobustnessRecord:
    """One model's fixture row: accuracy, attack outcomes, and metric values."""

    dataset: str
    model: str
    accuracy: float
    asr_per_attack: dict[str, float] = field(compare=False)
    asr_avg: float
    adv_accuracy_avg: float
    roby: float
    rdi: float

    def __post_init__(self) -> None:
        for name, value in (
            ("accuracy", self.accuracy),
            ("asr_avg", self.asr_avg),
            ("adv_accuracy_avg", self.adv_accuracy_avg),
            *self.asr_per_attack.items(),
        ):
            if not 0.0 <= value <= 1.0:
                raise ValidationError(f"{self.dataset}/{self.model}: {name}={value} outside [0, 1]")
        if not -1.0 <= self.rdi <= 1.0:
            raise ValidationError(f"{self.dataset}/{self.model}: rdi={self.rdi} outside [-1, 1]")
        if abs(self.adv_accuracy_avg - (1.0 - self.asr_avg)) > _CONSISTENCY_TOL:
            raise ValidationError(
                f"{self.dataset}/{self.model}: adv_accuracy_avg={self.adv_accuracy_avg} "
                f"inconsistent with 1 - asr_avg={1.0 - self.asr_avg}"
            )


@dataclass(frozen=True)
class CorrelationReport:
    dataset: str
    metric_name: str
    target_name: str
    spearman: float
    pearson: float
    n: int


def _validated_pair(xs, ys, min_n: int) -> tuple[list[float], list[float]]:
    xs = [float(x) for x in xs]
    ys = [float(y) for y in ys]
    if len(xs) != len(ys):
        raise ValidationError(f"length mismatch: {len(xs)} vs {len(ys)}")
    if len(xs) < min_n:
        raise ValidationError(f"need at least {min_n} points, got {len(xs)}")
    if not all(math.isfinite(v) for v in xs + ys):
        raise ValidationError("non-finite value")
    return xs, ys


def _average_ranks(values: list[float]) -> list[float]:
    """1-based ranks; tied values share the mean of their rank positions."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        rank = (i + j) / 2 + 1
        for t in range(i, j + 1):
            ranks[order[t]] = rank
        i = j + 1
    return ranks


def pearson(xs, ys) -> float:
    """Product-moment correlation; both inputs need nonzero variance."""
    xs, ys = _validated_pair(xs, ys, min_n=3)
    n = len(xs)
    mean_x = math.fsum(xs) / n
    mean_y = math.fsum(ys) / n
    dx = [x - mean_x for x in xs]
    dy = [y - mean_y for y in ys]
    var_x = math.fsum(a * a for a in dx)
    var_y = math.fsum(b * b for b in dy)
    if var_x == 0.0 or var_y == 0.0:
        raise ValidationError("zero variance input")
    r = math.fsum(a * b for a, b in zip(dx, dy)) / math.sqrt(var_x * var_y)
    return min(1.0, max(-1.0, r))


def spearman(xs, ys) -> float:
    """Rank correlation with average ranks for ties."""
    xs, ys = _validated_pair(xs, ys, min_n=3)
    return pearson(_average_ranks(xs), _average_ranks(ys))


def evaluate_fixture(
    records: list[RobustnessRecord], metric: str, target: str
) -> tuple[list[CorrelationReport], list[str]]:
    """Per-dataset correlation of a metric column against a target column.

    Groups records by dataset in first-appearance order. Groups with fewer
    than 3 records cannot support a coefficient and are skipped; the second
    return value lists one warning per skipped group.
    """
    if metric not in METRIC_FIELDS:
        raise ValidationError(f"metric must be one of {METRIC_FIELDS}, got {metric!r}")
    if target not in TARGET_FIELDS:
        raise ValidationError(f"target must be one of {TARGET_FIELDS}, got {target!r}")
    groups: dict[str, list[RobustnessRecord]] = {}
    for record in records:
        groups.setdefault(record.dataset, []).append(record)
    reports: list[CorrelationReport] = []
    skipped: list[str] = []
    for dataset, group in groups.items():
        if len(group) < 3:
            skipped.append(f"dataset {dataset!r}: only {len(group)} records (need 3), skipped")
            continue
        xs = [getattr(r, metric) for r in group]
        ys = [getattr(r, target) for r in group]
        reports.append(
            CorrelationReport(
                dataset=dataset,
                metric_name=metric,
                target_name=target,
                spearman=spearman(xs, ys),
                pearson=pearson(xs, ys),
                n=len(group),
            )
        )
    return reports, skipped


def rank_models(records: list[RobustnessRecord], by: str) -> list[str]:
    """Model names sorted ascending by a column, ties broken by name."""
    if by not in METRIC_FIELDS + TARGET_FIELDS + ("accuracy",):
        raise ValidationError(f"cannot rank by {by!r}")
    return [r.model for r in sorted(records, key=lambda r: (getattr(r, by), r.model))]


def parse_fixture_csv(text: str, source: str = "<fixture>") -> list[RobustnessRecord]:
    """Parse fixture CSV; '#' lines are comments, extra asr_* columns become
    per-attack entries, and absent attack columns are fine."""
    lines = [
        (lineno, line)
        for lineno, line in enumerate(text.splitlines(), start=1)
        if line.strip() and not line.lstrip().startswith("#")
    ]
    if not lines:
        raise ValidationError(f"{source}: no content")
    header = [c.strip() for c in lines[0][1].split(",")]
    required = ["dataset", "model", "accuracy", "asr_avg", "adv_acc_avg", "roby", "rdi"]
    missing = [c for c in required if c not in header]
    if missing:
        raise ValidationError(f"{source}: line {lines[0][0]}: missing columns {missing}")
    attack_cols = [c for c in header if c.startswith("asr_") and c != "asr_avg"]
    records = []
    for lineno, line in lines[1:]:
        cells = [c.strip() for c in line.split(",")]
        if len(cells) != len(header):
            raise ValidationError(
                f"{source}: line {lineno}: expected {len(header)} fields, got {len(cells)}"
            )
        row = dict(zip(header, cells))

        def number(column: str) -> float:
            try:
                return float(row[column])
            except ValueError:
                raise ValidationError(
                    f"{source}: line {lineno}: cannot parse {column}={row[column]!r}"
                ) from None

        attacks = {
            c.removeprefix("asr_"): number(c) for c in attack_cols if row[c] != ""
        }
        records.append(
            RobustnessRecord(
                dataset=row["dataset"],
                model=row["model"],
                accuracy=number("accuracy"),
                asr_per_attack=attacks,
                asr_avg=number("asr_avg"),
                adv_accuracy_avg=number("adv_acc_avg"),
                roby=number("roby"),
                rdi=number("rdi"),
            )
        )
    return records


def load_fixture_csv(path) -> list[RobustnessRecord]:
    return parse_fixture_csv(Path(path).read_text(encoding="utf-8"), source=str(path))


def load_bundled_fixture(name: str) -> list[RobustnessRecord]:
    """Load one of the fixtures shipped with the package (see BUNDLED_FIXTURES)."""
    if name not in BUNDLED_FIXTURES:
        raise ValidationError(f"unknown fixture {name!r}, expected one of {BUNDLED_FIXTURES}")
    text = resources.files("rdi").joinpath(f"data/{name}.csv").read_text(encoding="utf-8")
    return parse_fixture_csv(text, source=f"bundled:{name}")
