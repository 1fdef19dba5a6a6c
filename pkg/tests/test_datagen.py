import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from roid.datagen import add_noise, gen_tucker, knn_affinity, laplacian_from_affinity, make_rng, sample_mask
from roid.errors import InputError, RangeError
from roid.metrics import rse
from roid.solvers import solve_hooi
from roid.tensor import unfold


def numerical_rank(m, rtol=1e-10):
    s = np.linalg.svd(m, compute_uv=False)
    return int(np.sum(s > rtol * s[0]))


class TestGenTucker:
    def test_frozen_values(self):
        # regression oracle: Philox(0) stream, core drawn before factors
        t = gen_tucker((4, 3, 2), (2, 2, 1), seed=0)
        assert t[0, 0, 0] == 0.0018965233597488908
        assert t[3, 2, 1] == 0.00835434426366314
        assert np.linalg.norm(t) == pytest.approx(0.1399971882502593, rel=1e-15)

    def test_rank_one(self):
        t = gen_tucker(5, 1, seed=2)
        for n in (1, 2, 3):
            s = np.linalg.svd(unfold(t, n), compute_uv=False)
            assert s[1] / s[0] <= 1e-10

    def test_rank_three(self):
        t = gen_tucker(10, 3, seed=4)
        assert [numerical_rank(unfold(t, n)) for n in (1, 2, 3)] == [3, 3, 3]

    def test_non_cubic_rank(self):
        t = gen_tucker((6, 7, 8), (2, 3, 4), seed=1)
        assert [numerical_rank(unfold(t, n)) for n in (1, 2, 3)] == [2, 3, 4]

    def test_factor_distributions(self):
        _, (core, factors) = gen_tucker(50, 5, seed=9, return_factors=True)
        assert core.min() >= 0 and core.max() <= 1
        assert all(f.min() >= -0.5 and f.max() <= 0.5 for f in factors)

    def test_deterministic(self):
        np.testing.assert_array_equal(gen_tucker(6, 2, seed=5), gen_tucker(6, 2, seed=5))
        assert not np.array_equal(gen_tucker(6, 2, seed=5), gen_tucker(6, 2, seed=6))

    def test_rank_too_large(self):
        with pytest.raises(RangeError):
            gen_tucker((3, 3, 2), 3)

    def test_hooi_recovers(self):
        t = gen_tucker(12, 3, seed=3)
        assert rse(solve_hooi(t, 3).full(), t) <= 1e-10


class TestSampleMask:
    def test_frozen_indices(self):
        m = sample_mask((10, 10, 10), 0.1, seed=0)
        assert m.linear[:8].tolist() == [2, 3, 9, 35, 38, 40, 53, 57]

    def test_count_and_distinct(self):
        m = sample_mask((10, 10, 10), 0.1, seed=0)
        assert len(m) == 100 and len(set(m.linear.tolist())) == 100

    def test_full_ratio(self):
        assert len(sample_mask((3, 4, 5), 1.0)) == 60

    def test_tiny_ratio_keeps_one(self):
        assert len(sample_mask((2, 2, 2), 0.01)) == 1

    @pytest.mark.parametrize("ratio", [0.0, -0.1, 1.5])
    def test_bad_ratio(self, ratio):
        with pytest.raises(RangeError):
            sample_mask((2, 2, 2), ratio)

    @settings(max_examples=40)
    @given(st.tuples(*[st.integers(1, 6)] * 3), st.floats(0.01, 1.0), st.integers(0, 2**32))
    def test_count_property(self, dims, ratio, seed):
        m = sample_mask(dims, ratio, seed=seed)
        total = int(np.prod(dims))
        assert len(m) == min(max(round(ratio * total), 1), total)
        assert m == sample_mask(dims, ratio, seed=seed)


class TestNoise:
    def test_zero_factor(self):
        t = gen_tucker(4, 2)
        np.testing.assert_array_equal(add_noise(t, 0.0), t)

    def test_frozen_draw(self):
        assert add_noise(np.zeros((1, 1, 2)), 1.0, seed=3).ravel().tolist() == [0.7549096679841374, 0.031006213718127174]

    def test_moments(self):
        e = add_noise(np.zeros((20, 20, 20)), 1.0, seed=11)
        assert abs(e.mean()) <= 0.05
        assert 0.9 <= e.var() <= 1.1

    def test_negative(self):
        with pytest.raises(RangeError):
            add_noise(np.zeros((1, 1, 1)), -1.0)


class TestLaplacian:
    def test_two_nodes(self):
        np.testing.assert_array_equal(laplacian_from_affinity([[0, 1], [1, 0]]), [[1, -1], [-1, 1]])

    def test_zero(self):
        np.testing.assert_array_equal(laplacian_from_affinity(np.zeros((3, 3))), np.zeros((3, 3)))

    def test_path_graph(self):
        w = [[0, 1, 0], [1, 0, 1], [0, 1, 0]]
        np.testing.assert_array_equal(laplacian_from_affinity(w), [[1, -1, 0], [-1, 2, -1], [0, -1, 1]])

    @pytest.mark.parametrize(
        "w", [[[0, 1], [2, 0]], [[0, -1], [-1, 0]], [[0, 1, 0]], [[np.nan, 0], [0, 0]]]
    )
    def test_invalid(self, w):
        with pytest.raises(InputError):
            laplacian_from_affinity(w)

    def test_quadratic_form(self, rng):
        a = rng.uniform(size=(6, 6))
        w = a + a.T
        np.fill_diagonal(w, 0)
        lap = laplacian_from_affinity(w)
        x = rng.standard_normal(6)
        direct = 0.5 * np.sum(w * (x[:, None] - x[None, :]) ** 2)
        assert x @ lap @ x == pytest.approx(direct, rel=1e-12)
        np.testing.assert_allclose(lap.sum(axis=1), 0, atol=1e-12)
        assert np.linalg.eigvalsh(lap).min() >= -1e-10


class TestKnnAffinity:
    def test_line(self):
        w = knn_affinity(np.array([[0.0], [1.0], [3.0]]), 1, sigma=1.0)
        expected = np.array([[0, np.exp(-1), 0], [np.exp(-1), 0, np.exp(-4)], [0, np.exp(-4), 0]])
        np.testing.assert_allclose(w, expected)

    def test_symmetric_nonnegative(self, rng):
        w = knn_affinity(rng.standard_normal((10, 3)), 3)
        np.testing.assert_array_equal(w, w.T)
        assert w.min() >= 0 and not np.any(np.diag(w))

    def test_bad_k(self):
        with pytest.raises(RangeError):
            knn_affinity(np.zeros((3, 1)), 3)


def test_make_rng_is_philox():
    assert isinstance(make_rng(0).bit_generator, np.random.Philox)
