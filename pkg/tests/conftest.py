import numpy as np

from rdi import FeatureSet


def random_feature_set(
    rng: np.random.Generator,
    max_n: int = 500,
    max_d: int = 64,
    max_k: int = 20,
    ensure_multiclass: bool = False,
    degenerate_share: float = 0.0,
) -> FeatureSet:
    """Random clustered feature set; geometry varies widely across draws.

    With probability degenerate_share the set collapses to identical rows,
    exercising the zero-distance conventions.
    """
    k = int(rng.integers(2, max_k + 1))
    d = int(rng.integers(1, max_d + 1))
    n = int(rng.integers(max(2, k) if ensure_multiclass else 1, max_n + 1))
    labels = rng.integers(0, k, size=n)
    if ensure_multiclass:
        labels[0] = 0
        labels[1 % n] = 1
    if degenerate_share and rng.random() < degenerate_share:
        row = rng.normal(size=d)
        vectors = np.tile(row, (n, 1))
    else:
        separation = rng.uniform(0.5, 6.0)
        spread = rng.uniform(0.01, 2.0)
        centers = rng.normal(scale=separation, size=(k, d))
        vectors = centers[labels] + rng.normal(scale=spread, size=(n, d))
    return FeatureSet(vectors, labels, k)
