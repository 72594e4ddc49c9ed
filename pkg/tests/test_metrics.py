import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from rdi import (
    ClassStats,
    FeatureSet,
    ValidationError,
    compute_class_statistics,
    compute_global_center,
    compute_interd,
    compute_rdi,
    compute_roby,
    euclidean_distance,
    min_max_normalize,
)
from conftest import random_feature_set
from reference_impls import ref_distance, ref_rdi, ref_roby

HAND_VECTORS = [[0.0, 0.0], [2.0, 0.0], [4.0, 0.0], [6.0, 0.0]]
HAND_LABELS = [0, 0, 1, 1]


def hand_case() -> FeatureSet:
    return FeatureSet(HAND_VECTORS, HAND_LABELS, 2)


# ---------------------------------------------------------------- FeatureSet


def test_feature_set_validation():
    with pytest.raises(ValidationError):
        FeatureSet([[1.0, 2.0]], [0, 1], 2)  # row count mismatch
    with pytest.raises(ValidationError):
        FeatureSet([[1.0], [2.0]], [0, 2], 2)  # label out of range
    with pytest.raises(ValidationError):
        FeatureSet([[1.0], [2.0]], [0, -1], 2)
    with pytest.raises(ValidationError):
        FeatureSet(np.empty((0, 3)), np.empty(0, dtype=np.int64), 2)
    with pytest.raises(ValidationError):
        FeatureSet([[1.0, np.nan]], [0], 1)
    with pytest.raises(ValidationError):
        FeatureSet([[1.0]], [0.5], 1)  # non-integer labels


def test_feature_set_widens_to_float64():
    fs = FeatureSet(np.array([[1, 2], [3, 4]], dtype=np.float32), [0, 1], 2)
    assert fs.vectors.dtype == np.float64
    assert fs.labels.dtype == np.int64
    assert fs.num_samples == 2 and fs.dim == 2


# ---------------------------------------------------------- euclidean_distance


def test_distance_3_4_5():
    assert euclidean_distance([0.0, 0.0], [3.0, 4.0]) == 5.0


def test_distance_identity():
    v = [1.5, -2.0, 7.25]
    assert euclidean_distance(v, v) == 0.0


def test_distance_matches_scalar_loop():
    rng = np.random.default_rng(11)
    for _ in range(20):
        a = rng.normal(size=8)
        b = rng.normal(size=8)
        expected = ref_distance(a.tolist(), b.tolist())
        assert math.isclose(euclidean_distance(a, b), expected, rel_tol=1e-12)


def test_distance_dimension_mismatch():
    with pytest.raises(ValidationError):
        euclidean_distance([1.0, 2.0], [1.0, 2.0, 3.0])


def test_distance_rejects_non_finite():
    with pytest.raises(ValidationError):
        euclidean_distance([np.inf, 0.0], [0.0, 0.0])


# ---------------------------------------------------- compute_class_statistics


def test_class_stats_hand_pair():
    stats = compute_class_statistics(FeatureSet([[0.0, 0.0], [2.0, 0.0]], [0, 0], 1))
    assert np.array_equal(stats[0].center, [1.0, 0.0])
    assert stats[0].intra_distance == 1.0
    assert stats[0].count == 2


def test_class_stats_singleton():
    v = [3.0, -1.0, 2.0]
    stats = compute_class_statistics(FeatureSet([v], [0], 1))
    assert np.array_equal(stats[0].center, v)
    assert stats[0].intra_distance == 0.0


def test_class_stats_empty_class_has_no_center():
    stats = compute_class_statistics(FeatureSet([[1.0, 1.0]], [1], 3))
    assert stats[0].is_empty and stats[0].center is None and stats[0].intra_distance == 0.0
    assert not stats[1].is_empty
    assert stats[2].is_empty


def test_class_stats_match_scalar_loop():
    rng = np.random.default_rng(23)
    centers = rng.normal(scale=3.0, size=(5, 6))
    labels = np.repeat(np.arange(5), 20)
    vectors = centers[labels] + rng.normal(size=(100, 6))
    fs = FeatureSet(vectors, labels, 5)
    from reference_impls import ref_class_statistics

    expected = ref_class_statistics(vectors.tolist(), labels.tolist(), 5)
    for stat in compute_class_statistics(fs):
        center, count, intra, _ = expected[stat.class_index]
        assert count == stat.count
        assert math.isclose(stat.intra_distance, intra, rel_tol=1e-10)
        np.testing.assert_allclose(stat.center, center, rtol=1e-10)


# ------------------------------------------- compute_global_center / interd


def _stats_from_centers(centers) -> list[ClassStats]:
    return [
        ClassStats(i, 1, np.asarray(c, dtype=np.float64), 0.0) for i, c in enumerate(centers)
    ]


def test_global_center_hand_case():
    center = compute_global_center(_stats_from_centers([[1.0, 0.0], [5.0, 0.0]]))
    assert np.array_equal(center, [3.0, 0.0])


def test_global_center_single_class():
    center = compute_global_center(_stats_from_centers([[2.0, 7.0]]))
    assert np.array_equal(center, [2.0, 7.0])


def test_global_center_matches_naive_mean():
    rng = np.random.default_rng(5)
    centers = rng.normal(size=(10, 4))
    expected = [sum(centers[:, d].tolist()) / 10 for d in range(4)]
    np.testing.assert_allclose(compute_global_center(_stats_from_centers(centers)), expected, rtol=1e-12)


def test_global_center_all_empty():
    with pytest.raises(ValidationError):
        compute_global_center([ClassStats(0, 0, None, 0.0)])


def test_interd_hand_case():
    stats = _stats_from_centers([[1.0, 0.0], [5.0, 0.0]])
    assert compute_interd(stats, np.array([3.0, 0.0])) == 2.0


def test_interd_single_class_is_zero():
    stats = _stats_from_centers([[4.0, 4.0]])
    assert compute_interd(stats, compute_global_center(stats)) == 0.0


def test_interd_matches_scalar_loop():
    rng = np.random.default_rng(17)
    centers = rng.normal(size=(10, 6))
    stats = _stats_from_centers(centers)
    center0 = compute_global_center(stats)
    expected = sum(ref_distance(c.tolist(), center0.tolist()) for c in centers) / 10
    assert math.isclose(compute_interd(stats, center0), expected, rel_tol=1e-12)


# ------------------------------------------------------------------ compute_rdi


def test_rdi_hand_case():
    report = compute_rdi(hand_case())
    assert report.intra_d == 1.0
    assert report.inter_d == 2.0
    assert report.rdi == 0.5
    assert report.effective_classes == 2
    assert report.warnings == ()


def test_rdi_singletons_give_one():
    fs = FeatureSet([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]], [0, 1, 2], 3)
    report = compute_rdi(fs)
    assert report.intra_d == 0.0
    assert report.inter_d > 0.0
    assert report.rdi == 1.0


def test_rdi_all_identical_is_zero():
    fs = FeatureSet([[2.0, 2.0]] * 6, [0, 0, 1, 1, 2, 2], 3)
    report = compute_rdi(fs)
    assert report.intra_d == 0.0 and report.inter_d == 0.0 and report.rdi == 0.0


def test_rdi_matches_scalar_loop():
    rng = np.random.default_rng(31)
    centers = rng.normal(scale=4.0, size=(10, 32))
    labels = rng.integers(0, 10, size=300)
    vectors = centers[labels] + rng.normal(size=(300, 32))
    fs = FeatureSet(vectors, labels, 10)
    intra, inter, rdi_value = ref_rdi(vectors.tolist(), labels.tolist(), 10)
    report = compute_rdi(fs)
    assert math.isclose(report.intra_d, intra, rel_tol=1e-10)
    assert math.isclose(report.inter_d, inter, rel_tol=1e-10)
    assert math.isclose(report.rdi, rdi_value, rel_tol=1e-10)


def test_rdi_single_populated_class_flagged():
    fs = FeatureSet([[0.0, 0.0], [2.0, 0.0]], [1, 1], 3)
    report = compute_rdi(fs)
    assert report.rdi == -1.0
    assert report.effective_classes == 1
    assert report.warnings


# ------------------------------------------------------------ min_max_normalize


def test_minmax_affine():
    np.testing.assert_array_equal(min_max_normalize([2.0, 4.0, 6.0]), [0.0, 0.5, 1.0])


def test_minmax_degenerate():
    np.testing.assert_array_equal(min_max_normalize([5.0, 5.0, 5.0]), [0.0, 0.0, 0.0])


def test_minmax_idempotent():
    rng = np.random.default_rng(3)
    values = rng.normal(size=40)
    once = min_max_normalize(values)
    np.testing.assert_array_equal(min_max_normalize(once), once)


def test_minmax_empty_rejected():
    with pytest.raises(ValidationError):
        min_max_normalize([])


# ----------------------------------------------------------------- compute_roby


def test_roby_symmetric_hand_case():
    report = compute_roby(hand_case())
    assert report.fsa == (0.0, 0.0)
    assert report.fsd == (0.0,)
    assert report.pairwise_roby == (0.0,)
    assert report.roby == 0.0


def test_roby_matches_scalar_loop():
    for seed in range(5):
        fs = random_feature_set(np.random.default_rng(seed), max_n=120, max_d=16, max_k=6, ensure_multiclass=True)
        expected = ref_roby(fs.vectors.tolist(), fs.labels.tolist(), fs.num_classes)
        assert math.isclose(compute_roby(fs).roby, expected, rel_tol=1e-10, abs_tol=1e-12)


def test_roby_aggregate_recomputable_from_report():
    fs = random_feature_set(np.random.default_rng(99), max_n=200, max_d=12, max_k=8, ensure_multiclass=True)
    report = compute_roby(fs)
    renormalized = min_max_normalize(np.array(report.pairwise_roby))
    assert math.isclose(report.roby, float(np.sum(renormalized)) / len(report.pairs), rel_tol=1e-12, abs_tol=1e-15)


def test_roby_fsa_in_unit_interval():
    for seed in (1, 2, 3):
        fs = random_feature_set(np.random.default_rng(seed), max_n=150, max_d=10, max_k=9, ensure_multiclass=True)
        report = compute_roby(fs)
        assert all(0.0 <= v <= 1.0 for v in report.fsa)
        assert all(0.0 <= v <= 1.0 for v in report.fsd)


def test_roby_needs_two_classes():
    with pytest.raises(ValidationError):
        compute_roby(FeatureSet([[1.0, 0.0], [2.0, 0.0]], [0, 0], 1))
    with pytest.raises(ValidationError):
        compute_roby(FeatureSet([[1.0, 0.0], [2.0, 0.0]], [1, 1], 3))


# ------------------------------------------------------------------- properties


finite_matrices = hnp.arrays(
    np.float64,
    st.tuples(st.integers(2, 40), st.integers(1, 8)),
    elements=st.floats(-1e6, 1e6, allow_nan=False),
)


@st.composite
def feature_sets(draw, max_classes=6):
    vectors = draw(finite_matrices)
    k = draw(st.integers(2, max_classes))
    labels = draw(
        hnp.arrays(np.int64, vectors.shape[0], elements=st.integers(0, k - 1))
    )
    return FeatureSet(vectors, labels, k)


@given(feature_sets())
@settings(max_examples=80, deadline=None)
def test_rdi_range_and_sign(fs):
    report = compute_rdi(fs)
    assert -1.0 <= report.rdi <= 1.0
    assert report.intra_d >= 0.0 and report.inter_d >= 0.0
    if report.rdi > 0:
        assert report.inter_d > report.intra_d
    elif report.rdi < 0:
        assert report.inter_d < report.intra_d


# The 1e-9 invariance tolerances assume non-degenerate geometry: at the exact
# IntraD = InterD = 0 point the metric's zero convention makes rdi jump under
# any infinitesimal perturbation, so these run on clustered random sets rather
# than adversarial hypothesis values.


def test_translation_invariance():
    for seed in range(60):
        rng = np.random.default_rng(seed + 40_000)
        fs = random_feature_set(rng, max_n=300, max_d=32, max_k=10)
        shift = rng.uniform(-5.0, 5.0, size=fs.dim)
        base = compute_rdi(fs)
        after = compute_rdi(FeatureSet(fs.vectors + shift, fs.labels, fs.num_classes))
        assert math.isclose(after.intra_d, base.intra_d, abs_tol=1e-9)
        assert math.isclose(after.inter_d, base.inter_d, abs_tol=1e-9)
        assert math.isclose(after.rdi, base.rdi, abs_tol=1e-9)


def test_positive_scale_invariance():
    for seed in range(60):
        rng = np.random.default_rng(seed + 50_000)
        fs = random_feature_set(rng, max_n=300, max_d=32, max_k=10)
        scale = float(rng.uniform(0.1, 10.0))
        base = compute_rdi(fs)
        after = compute_rdi(FeatureSet(fs.vectors * scale, fs.labels, fs.num_classes))
        assert math.isclose(after.intra_d, base.intra_d * scale, rel_tol=1e-9, abs_tol=1e-9)
        assert math.isclose(after.inter_d, base.inter_d * scale, rel_tol=1e-9, abs_tol=1e-9)
        assert math.isclose(after.rdi, base.rdi, abs_tol=1e-9)


@given(feature_sets())
@settings(max_examples=50, deadline=None)
def test_label_permutation_exact(fs):
    k = fs.num_classes
    for permutation in (np.arange(k)[::-1], np.roll(np.arange(k), 1)):
        relabeled = FeatureSet(fs.vectors, permutation[fs.labels], k)
        assert compute_rdi(relabeled).rdi == compute_rdi(fs).rdi


def test_sample_order_permutation_within_noise():
    rng = np.random.default_rng(77)
    for seed in range(20):
        fs = random_feature_set(np.random.default_rng(seed), max_n=300, max_d=24, max_k=8)
        order = rng.permutation(fs.num_samples)
        shuffled = FeatureSet(fs.vectors[order], fs.labels[order], fs.num_classes)
        assert math.isclose(compute_rdi(shuffled).rdi, compute_rdi(fs).rdi, abs_tol=1e-9)


def test_expanding_centers_increases_rdi():
    beta = 2.5
    for seed in range(50):
        fs = random_feature_set(np.random.default_rng(seed), max_n=200, max_d=16, max_k=8, ensure_multiclass=True)
        base = compute_rdi(fs)
        if base.intra_d == 0.0 or base.inter_d == 0.0:
            continue
        centers = np.array([s.center for s in base.per_class if not s.is_empty])
        index_of = {s.class_index: i for i, s in enumerate(p for p in base.per_class if not p.is_empty)}
        offsets = (beta - 1.0) * (centers - base.global_center)
        rows = fs.vectors + np.array([offsets[index_of[int(l)]] for l in fs.labels])
        expanded = compute_rdi(FeatureSet(rows, fs.labels, fs.num_classes))
        assert math.isclose(expanded.inter_d, beta * base.inter_d, rel_tol=1e-9)
        assert math.isclose(expanded.intra_d, base.intra_d, rel_tol=1e-9, abs_tol=1e-12)
        assert expanded.rdi > base.rdi
