"""Statistical kernels against independent oracles and hand-derived values.

The KS statistic gets a second, structurally different route: evaluating
both empirical CDFs at every pooled sample point and taking the largest
gap. Frozen constants below are derived in the comments next to them.
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from syntheval.data import build_normalization
from syntheval.errors import ValidationError
from syntheval.stats import (
    binned_probabilities,
    correlation_ratio,
    cramers_v,
    frobenius_diff,
    hellinger_distance,
    ks_statistic,
    level_probabilities,
    mean_ci,
    mixed_correlation_matrix,
    normalized_mutual_information,
    pca_project,
    pearson_corr,
    permutation_pvalue,
    scott_bin_edges,
    scott_bin_width,
    tvd,
)

from conftest import make_table


def ecdf_sweep_ks(x, y):
    """Independent KS route: max eCDF gap over all pooled sample points."""
    x = np.sort(np.asarray(x, dtype=np.float64))
    y = np.sort(np.asarray(y, dtype=np.float64))
    pts = np.concatenate([x, y])
    fx = np.searchsorted(x, pts, side="right") / x.size
    fy = np.searchsorted(y, pts, side="right") / y.size
    return float(np.max(np.abs(fx - fy)))


class TestKolmogorovSmirnov:
    def test_shifted_integer_grid(self):
        # eCDFs differ by exactly one step of 1/4 everywhere they differ
        d, p = ks_statistic([1, 2, 3, 4], [2, 3, 4, 5])
        assert d == 0.25
        assert 0.0 < p <= 1.0

    def test_matches_ecdf_sweep_on_random_pairs(self, rng):
        for _ in range(50):
            nx = int(rng.integers(2, 40))
            ny = int(rng.integers(2, 40))
            x = rng.normal(0, 1, nx)
            y = rng.normal(rng.uniform(-1, 1), 1, ny)
            d, _ = ks_statistic(x, y)
            assert abs(d - ecdf_sweep_ks(x, y)) < 1e-12

    def test_matches_ecdf_sweep_with_heavy_ties(self, rng):
        for _ in range(30):
            x = rng.integers(0, 5, int(rng.integers(3, 30))).astype(float)
            y = rng.integers(0, 5, int(rng.integers(3, 30))).astype(float)
            d, _ = ks_statistic(x, y)
            assert abs(d - ecdf_sweep_ks(x, y)) < 1e-12

    def test_identical_samples(self):
        d, p = ks_statistic([1.0, 2.0, 3.0], [1.0, 2.0, 3.0])
        assert d == 0.0
        assert p == 1.0

    def test_empty_sample_rejected(self):
        with pytest.raises(ValidationError):
            ks_statistic([], [1.0])


class TestTvd:
    def test_hand_value(self):
        # P = (0.5, 0.5), Q = (0.9, 0.1): 0.5 * (0.4 + 0.4) = 0.4
        x = [0] * 5 + [1] * 5
        y = [0] * 9 + [1]
        assert tvd(x, y) == pytest.approx(0.4, abs=1e-15)

    def test_disjoint_supports(self):
        assert tvd([0, 0], [1, 1]) == 1.0

    def test_identical(self):
        assert tvd([0, 1, 2], [0, 1, 2]) == 0.0


class TestPermutationPvalue:
    def test_never_zero_and_add_one_form(self):
        # maximally separated samples: no permutation beats the observed
        # statistic except those reproducing the split; p >= 1/(n+1)
        x = np.zeros(8)
        y = np.ones(8)
        p = permutation_pvalue(x, y, lambda a, b: abs(a.mean() - b.mean()), n_perms=200, seed=1)
        assert p >= 1 / 201
        assert p <= 0.02

    def test_seed_reproducibility(self, rng):
        x = rng.normal(0, 1, 20)
        y = rng.normal(0, 1, 20)
        stat = lambda a, b: abs(a.mean() - b.mean())
        p1 = permutation_pvalue(x, y, stat, n_perms=99, seed=7)
        p2 = permutation_pvalue(x, y, stat, n_perms=99, seed=7)
        assert p1 == p2

    def test_identical_samples_give_high_p(self):
        x = np.arange(10.0)
        p = permutation_pvalue(x, x.copy(), lambda a, b: abs(a.mean() - b.mean()), n_perms=99, seed=3)
        assert p == 1.0


class TestScottBinning:
    def test_width_for_unit_variance_thousand_points(self):
        # 500 copies of +a and -a with a chosen so the ddof=1 std is exactly
        # 1: width = 3.49 * 1 / cbrt(1000) = 0.349
        a = np.sqrt(999.0 / 1000.0)
        sample = np.concatenate([np.full(500, a), np.full(500, -a)])
        assert abs(scott_bin_width(sample) - 0.349) < 1e-9

    def test_edges_cover_sample(self, rng):
        v = rng.normal(3, 2, 100)
        edges = scott_bin_edges(v)
        assert edges[0] <= v.min()
        assert edges[-1] >= v.max()
        assert np.all(np.diff(edges) > 0)

    def test_constant_sample_single_bin(self):
        edges = scott_bin_edges([4.0, 4.0, 4.0])
        assert edges.tolist() == [3.5, 4.5]
        p, q = binned_probabilities([4.0, 4.0], [4.0], edges)
        assert p.tolist() == [1.0]
        assert q.tolist() == [1.0]

    def test_tiny_sample(self):
        assert scott_bin_width([1.0]) == 0.0


class TestHellinger:
    def test_point_mass_versus_uniform(self):
        # sqrt(1 - sqrt(0.5)); BC of (1,0) and (.5,.5) is sqrt(.5)
        h = hellinger_distance([1.0, 0.0], [0.5, 0.5])
        assert abs(h - 0.5411961001461971) < 1e-12

    def test_bounds(self):
        assert hellinger_distance([1.0, 0.0], [0.0, 1.0]) == pytest.approx(1.0)
        assert hellinger_distance([0.3, 0.7], [0.3, 0.7]) == 0.0

    def test_shape_mismatch(self):
        with pytest.raises(ValidationError):
            hellinger_distance([1.0], [0.5, 0.5])

    def test_level_probabilities_align_union(self):
        p, q = level_probabilities([0, 0, 2], [1, 1, 1])
        assert p.tolist() == pytest.approx([2 / 3, 0.0, 1 / 3])
        assert q.tolist() == [0.0, 1.0, 0.0]


class TestAssociationMeasures:
    def test_cramers_v_perfect(self):
        assert cramers_v([0, 0, 1, 1], [5, 5, 9, 9]) == pytest.approx(1.0)

    def test_cramers_v_independent(self):
        x = [0, 0, 1, 1]
        y = [0, 1, 0, 1]
        assert cramers_v(x, y) == pytest.approx(0.0, abs=1e-12)

    def test_cramers_v_partial_association(self):
        # 2x2 contingency [[8,2],[2,8]]: V = |8*8 - 2*2| / sqrt(10^4) = 0.6
        x = [0] * 10 + [1] * 10
        y = [0] * 8 + [1] * 2 + [0] * 2 + [1] * 8
        assert cramers_v(x, y) == pytest.approx(0.6, abs=1e-12)

    def test_cramers_v_constant_variable(self):
        assert cramers_v([0, 0, 0], [0, 1, 2]) == 0.0

    def test_correlation_ratio_extremes(self):
        # all variance between groups -> 1; equal group means -> 0
        assert correlation_ratio([0, 0, 1, 1], [1.0, 1.0, 5.0, 5.0]) == pytest.approx(1.0)
        assert correlation_ratio([0, 1, 0, 1], [1.0, 1.0, 5.0, 5.0]) == pytest.approx(0.0)

    def test_correlation_ratio_constant_values(self):
        assert correlation_ratio([0, 1], [3.0, 3.0]) == 0.0

    def test_pearson_basic(self):
        x = np.arange(10.0)
        assert pearson_corr(x, 2 * x + 1) == pytest.approx(1.0)
        assert pearson_corr(x, -x) == pytest.approx(-1.0)
        assert pearson_corr(x, np.full(10, 3.0)) == 0.0

    def test_mixed_matrix_structure(self, rng):
        t = make_table({
            "a": ("num", rng.normal(0, 1, 30)),
            "b": ("num", rng.normal(0, 1, 30)),
            "c": ("cat", rng.choice(["x", "y"], 30)),
        })
        m = mixed_correlation_matrix(t, build_normalization(t))
        assert m.shape == (3, 3)
        assert np.allclose(np.diag(m), 1.0)
        assert np.allclose(m, m.T)
        assert m[0, 1] == pytest.approx(pearson_corr(t.column("a").values, t.column("b").values))


class TestMutualInformation:
    def test_identical_is_one(self):
        assert normalized_mutual_information([0, 1, 0, 1, 2], [0, 1, 0, 1, 2]) == pytest.approx(1.0)

    def test_relabeled_is_one(self):
        assert normalized_mutual_information([0, 1, 0, 1], [7, 3, 7, 3]) == pytest.approx(1.0)

    def test_independent_is_zero(self):
        assert normalized_mutual_information([0, 0, 1, 1], [0, 1, 0, 1]) == pytest.approx(0.0, abs=1e-12)

    def test_degenerate_conventions(self):
        # two constants agree perfectly; one constant carries no information
        assert normalized_mutual_information([5, 5, 5], [2, 2, 2]) == 1.0
        assert normalized_mutual_information([5, 5, 5], [0, 1, 2]) == 0.0

    def test_bounded(self, rng):
        for _ in range(20):
            x = rng.integers(0, 4, 25)
            y = rng.integers(0, 4, 25)
            v = normalized_mutual_information(x, y)
            assert 0.0 <= v <= 1.0


class TestFrobenius:
    def test_hand_value(self):
        a = np.array([[0.0, 1.0], [1.0, 0.0]])
        assert frobenius_diff(a, np.zeros((2, 2))) == pytest.approx(np.sqrt(2.0))

    def test_shape_mismatch(self):
        with pytest.raises(ValidationError):
            frobenius_diff(np.zeros((2, 2)), np.zeros((3, 3)))


class TestPca:
    def test_components_orthonormal_and_deterministic(self, rng):
        real = rng.normal(0, 1, (50, 4))
        syn = rng.normal(0, 1, (30, 4))
        p1 = pca_project(real, syn)
        p2 = pca_project(real, syn)
        assert np.array_equal(p1.components, p2.components)
        assert np.allclose(p1.components @ p1.components.T, np.eye(2), atol=1e-12)
        assert p1.real_coords.shape == (50, 2)
        assert p1.synthetic_coords.shape == (30, 2)

    def test_correlated_pair_projects_onto_diagonal(self, rng):
        x = rng.normal(0, 1, 200)
        real = np.column_stack([x, x + rng.normal(0, 0.01, 200)])
        proj = pca_project(real, real)
        # first axis is the diagonal, sign fixed positive
        assert proj.components[0] == pytest.approx([np.sqrt(0.5), np.sqrt(0.5)], abs=0.01)
        assert proj.explained_variance_ratio[0] > 0.99

    def test_sign_fix_flips_negative_pivot(self, rng):
        real = rng.normal(0, 1, (40, 3))
        proj = pca_project(real, real)
        for row in proj.components:
            assert row[np.argmax(np.abs(row))] > 0

    def test_validation(self):
        with pytest.raises(ValidationError):
            pca_project(np.zeros((5, 1)), np.zeros((5, 1)))
        with pytest.raises(ValidationError):
            pca_project(np.zeros((1, 3)), np.zeros((1, 3)))
        with pytest.raises(ValidationError):
            pca_project(np.zeros((5, 3)), np.zeros((5, 2)))


class TestMeanCi:
    def test_frozen_two_point_interval(self):
        # mean 1, s = sqrt(2), n = 2: half-width = z * 1 = 1.959963985
        lo, hi = mean_ci([0.0, 2.0], confidence=95.0)
        assert lo == pytest.approx(1 - 1.9599639845400545, abs=1e-9)
        assert hi == pytest.approx(1 + 1.9599639845400545, abs=1e-9)

    def test_constant_sample_zero_width(self):
        lo, hi = mean_ci([3.0, 3.0, 3.0])
        assert lo == hi == 3.0

    def test_validation(self):
        with pytest.raises(ValidationError):
            mean_ci([1.0])
        with pytest.raises(ValidationError):
            mean_ci([1.0, 2.0], confidence=100.0)


@settings(max_examples=50, deadline=None)
@given(
    st.lists(st.floats(-100, 100, allow_nan=False), min_size=2, max_size=30),
    st.lists(st.floats(-100, 100, allow_nan=False), min_size=2, max_size=30),
)
def test_ks_statistic_bounds_property(x, y):
    d, p = ks_statistic(x, y)
    assert 0.0 <= d <= 1.0
    assert 0.0 <= p <= 1.0
    assert abs(d - ecdf_sweep_ks(x, y)) < 1e-12


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(0, 3), min_size=1, max_size=30), st.lists(st.integers(0, 3), min_size=1, max_size=30))
def test_tvd_bounds_property(x, y):
    v = tvd(x, y)
    assert 0.0 <= v <= 1.0
    assert tvd(x, y) == tvd(* (y, x))
