import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from roid.errors import ConfigError, DimensionError, NonUniquePolarWarning, RangeError
from roid.linalg import check_weights, kronecker, ort, schatten_norm, svds, svt, tensor_schatten
from roid.tensor import multi_mode_product

from conftest import random_orthonormal

mats = st.tuples(st.integers(1, 6), st.integers(1, 6)).flatmap(
    lambda s: arrays(np.float64, s, elements=st.floats(-10, 10, allow_nan=False))
)


def prox_objective(z, m, mu):
    return mu * np.linalg.svd(z, compute_uv=False).sum() + 0.5 * np.sum((z - m) ** 2)


class TestSvt:
    def test_diagonal_oracle(self):
        m = np.diag([3.0, 1.0, 0.5])
        np.testing.assert_allclose(svt(m, 1.0), np.diag([2.0, 0.0, 0.0]), atol=1e-15)

    def test_zero_threshold_is_identity(self, rng):
        m = rng.standard_normal((4, 6))
        np.testing.assert_allclose(svt(m, 0.0), m, atol=1e-13)

    def test_large_threshold_gives_zero(self, rng):
        assert not np.any(svt(rng.standard_normal((3, 3)), 1e6))

    def test_singular_values_shrunk(self):
        _, s = svt(np.diag([5.0, 2.0]), 1.5, return_singular_values=True)
        np.testing.assert_allclose(s, [3.5, 0.5])

    def test_negative_threshold(self):
        with pytest.raises(RangeError):
            svt(np.eye(2), -0.1)

    @pytest.mark.parametrize("mu", [0.1, 1.0])
    def test_prox_beats_perturbations(self, rng, mu):
        m = rng.standard_normal((5, 7))
        z = svt(m, mu)
        best = prox_objective(z, m, mu)
        worst_gap = min(prox_objective(z + 0.1 * rng.standard_normal(z.shape), m, mu) - best for _ in range(200))
        assert worst_gap >= 0

    @settings(max_examples=50)
    @given(mats, st.floats(0, 5))
    def test_nonexpansive_in_nuclear_norm(self, m, mu):
        out_s = np.linalg.svd(svt(m, mu), compute_uv=False)
        in_s = np.linalg.svd(m, compute_uv=False)
        np.testing.assert_allclose(out_s, np.maximum(in_s - mu, 0.0), atol=1e-9 * (1 + in_s.max(initial=0)))


class TestOrt:
    def test_identity(self):
        np.testing.assert_allclose(ort(np.eye(3)), np.eye(3))

    def test_positive_diagonal_scaling(self):
        np.testing.assert_allclose(ort(np.diag([2.0, 5.0])), np.eye(2), atol=1e-15)

    def test_tall_input_orthonormal(self, rng):
        q = ort(rng.standard_normal((7, 3)))
        np.testing.assert_allclose(q.T @ q, np.eye(3), atol=1e-13)

    def test_procrustes_maximizer(self, rng):
        a = rng.standard_normal((6, 3))
        best = np.trace(ort(a).T @ a)
        others = [np.trace(random_orthonormal(rng, 6, 3).T @ a) for _ in range(300)]
        assert best >= max(others)

    def test_wide_input(self):
        with pytest.raises(DimensionError):
            ort(np.ones((2, 3)))

    def test_rank_deficient_warns(self):
        with pytest.warns(NonUniquePolarWarning):
            q = ort(np.array([[1.0, 0.0], [0.0, 0.0], [0.0, 0.0]]))
        np.testing.assert_allclose(q.T @ q, np.eye(2), atol=1e-13)

    def test_full_rank_is_silent(self, rng):
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            ort(rng.standard_normal((4, 2)))


class TestSvds:
    def test_dominant_subspace(self):
        m = np.diag([1.0, 4.0, 2.0])
        np.testing.assert_allclose(np.abs(svds(m, 2)), [[0, 0], [1, 0], [0, 1]], atol=1e-15)

    def test_sign_normalized(self, rng):
        u = svds(rng.standard_normal((6, 4)), 3)
        for col in u.T:
            assert col[np.argmax(np.abs(col))] > 0

    def test_deterministic_under_sign_flip(self, rng):
        m = rng.standard_normal((5, 8))
        np.testing.assert_allclose(svds(m, 2), svds(-m, 2), atol=1e-12)

    @pytest.mark.parametrize("k", [0, 4])
    def test_bad_k(self, k):
        with pytest.raises(RangeError):
            svds(np.ones((3, 5)), k)


class TestSchatten:
    def test_diagonal_oracle(self):
        m = np.diag([3.0, 4.0])
        assert schatten_norm(m, 1) == 7.0
        assert schatten_norm(m, 2) == 5.0
        assert schatten_norm(m, 0.5) == pytest.approx((np.sqrt(3) + 2) ** 2)

    def test_nonpositive_p(self):
        with pytest.raises(RangeError):
            schatten_norm(np.eye(2), 0)

    def test_zero_matrix(self):
        assert schatten_norm(np.zeros((2, 2)), 3) == 0.0

    @pytest.mark.parametrize("p", [0.5, 1, 2])
    def test_orthonormal_factors_preserve_norm(self, rng, p):
        core = rng.standard_normal((3, 3, 3))
        fs = [random_orthonormal(rng, 8, 3) for _ in range(3)]
        x = multi_mode_product(core, *fs)
        assert tensor_schatten(x, p) == pytest.approx(tensor_schatten(core, p), rel=1e-10)

    def test_kronecker(self):
        np.testing.assert_array_equal(kronecker([[1, 2]], [[1], [10]]), [[1, 2], [10, 20]])


class TestWeights:
    def test_default(self):
        assert check_weights(None) == (1 / 3, 1 / 3, 1 / 3)

    @pytest.mark.parametrize("w", [(0.5, 0.5), (0.6, 0.6, -0.2), (0.5, 0.3, 0.3)])
    def test_invalid(self, w):
        with pytest.raises(ConfigError):
            check_weights(w)
