"""Feature-space robustness metrics: RDI and the ROBY baseline."""

from .analysis import (
    CorrelationReport,
    RobustnessRecord,
    evaluate_fixture,
    load_bundled_fixture,
    load_fixture_csv,
    pearson,
    rank_models,
    spearman,
)
from .bench import BenchRow, run_scaling_benchmark
from .errors import FormatError, ValidationError
from .io import (
    load_csv,
    load_feature_set,
    load_npy_labels,
    load_npy_matrix,
    write_npy_labels,
    write_npy_matrix,
    write_report_json,
)
from .metrics import (
    ClassStats,
    FeatureSet,
    RdiReport,
    RobyReport,
    compute_class_statistics,
    compute_global_center,
    compute_interd,
    compute_rdi,
    compute_roby,
    euclidean_distance,
    min_max_normalize,
)
from .synth import MixtureSpec, contract_toward_centers, generate_mixture

__version__ = "0.1.0"

__all__ = [
    "BenchRow",
    "ClassStats",
    "CorrelationReport",
    "FeatureSet",
    "FormatError",
    "MixtureSpec",
    "RdiReport",
    "RobustnessRecord",
    "RobyReport",
    "ValidationError",
    "compute_class_statistics",
    "compute_global_center",
    "compute_interd",
    "compute_rdi",
    "compute_roby",
    "contract_toward_centers",
    "euclidean_distance",
    "evaluate_fixture",
    "generate_mixture",
    "load_bundled_fixture",
    "load_csv",
    "load_feature_set",
    "load_fixture_csv",
    "load_npy_labels",
    "load_npy_matrix",
    "min_max_normalize",
    "pearson",
    "rank_models",
    "run_scaling_benchmark",
    "spearman",
    "write_npy_labels",
    "write_npy_matrix",
    "write_report_json",
]
