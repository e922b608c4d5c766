from fractions import Fraction
from itertools import permutations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from aitgibbs.detkernel import StructuredMatrix, dense_det_oracle, f_poly, natural_scale, structured_det


def leibniz_det(M):
    """Exact determinant by permutation expansion (n <= 6)."""
    n = len(M)
    total = Fraction(0)
    for perm in permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = Fraction(-1 if inv % 2 else 1)
        for i in range(n):
            term *= Fraction(M[i][perm[i]])
        total += term
    return total


class TestFPoly:
    def test_values(self):
        assert f_poly([2, 3], 0) == (6.0, -5.0)

    def test_triple_root(self):
        assert f_poly([1, 1, 1], 1) == (0.0, 0.0)

    def test_simple_root_derivative_survives(self):
        # f = (1-x)(2-x)(4-x); f'(1) = -(2-1)(4-1) = -3
        assert f_poly([1, 2, 4], 1) == (0.0, -3.0)

    @pytest.mark.parametrize("c, x", [(3.0, 0.5), (-2.0, 4.0), (7.0, 7.0)])
    def test_linear(self, c, x):
        assert f_poly([c], x) == (c - x, -1.0)

    @given(st.lists(st.integers(-6, 6), min_size=1, max_size=6), st.integers(-6, 6))
    def test_against_polynomial_expansion(self, r, x):
        poly = np.poly1d([1.0])
        for ri in r:
            poly = poly * np.poly1d([-1.0, ri])
        v, d = f_poly(r, x)
        assert v == poly(x)
        assert d == pytest.approx(poly.deriv()(x), abs=1e-9)


class TestStructuredDet:
    def test_upper_triangular(self):
        assert structured_det(StructuredMatrix([2, 3], 1, 0)) == 6.0

    @pytest.mark.parametrize("r", [[2.0], [1.5, -2.0], [3.0, 0.5, -1.0, 2.0]])
    def test_diagonal(self, r):
        assert structured_det(StructuredMatrix(r, 0, 0)) == pytest.approx(np.prod(r), rel=1e-15)

    def test_all_ones(self):
        assert structured_det(StructuredMatrix([1, 1, 1], 1, 1)) == 0.0

    def test_one_by_one(self):
        assert structured_det(StructuredMatrix([4], 9, 9)) == 4.0
        assert structured_det(StructuredMatrix([4], 9, -2)) == pytest.approx(4.0, rel=1e-15)

    def test_oracle_example(self):
        mat = StructuredMatrix([2, 3, 5], 1, 4)
        dense = dense_det_oracle(mat.dense())
        assert structured_det(mat) == pytest.approx(dense, rel=1e-10)
        assert dense == float(leibniz_det(mat.dense().astype(int).tolist()))

    def test_dense_layout(self):
        np.testing.assert_array_equal(
            StructuredMatrix([2, 3, 5], 1, 4).dense(), [[2, 1, 1], [4, 3, 1], [4, 4, 5]]
        )

    @settings(max_examples=200, deadline=None)
    @given(
        st.lists(st.integers(-5, 5), min_size=1, max_size=6),
        st.integers(-5, 5),
        st.integers(-5, 5),
    )
    def test_exact_integers(self, r, a, b):
        mat = StructuredMatrix(r, a, b)
        exact = leibniz_det(mat.dense().astype(int).tolist())
        assert structured_det(mat) == pytest.approx(float(exact), rel=1e-12, abs=1e-9)

    @settings(max_examples=200, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_transpose_symmetry(self, seed):
        rng = np.random.default_rng(seed)
        r = rng.uniform(-5, 5, rng.integers(1, 9))
        a, b = rng.uniform(-5, 5, 2)
        x = structured_det(StructuredMatrix(r, a, b))
        y = structured_det(StructuredMatrix(r, b, a))
        assert x == pytest.approx(y, rel=1e-12, abs=1e-12 * natural_scale(StructuredMatrix(r, a, b)))

    @pytest.mark.parametrize("seed", range(10))
    def test_continuity_at_a_equals_b(self, seed):
        rng = np.random.default_rng(seed)
        r = rng.uniform(-5, 5, rng.integers(1, 9))
        a = rng.uniform(-5, 5)
        mat0 = StructuredMatrix(r, a, a)
        d0 = structured_det(mat0)
        S = natural_scale(StructuredMatrix(r, a, a + 1e-4))
        n = r.size
        for k in range(4, 11):
            eps = 10.0**-k
            d = structured_det(StructuredMatrix(r, a, a + eps))
            # |dD/db| <= n * S; rounding of the a != b branch is ~1e-16 * S / eps
            assert abs(d - d0) <= n * S * eps + 1e-8 * S

    def test_rejects_bad_input(self):
        with pytest.raises(ValueError):
            StructuredMatrix([], 1, 1)
        with pytest.raises(ValueError):
            StructuredMatrix([1.0, np.inf], 1, 1)


class TestDenseOracle:
    def test_triangular(self):
        assert dense_det_oracle([[2, 1], [0, 3]]) == 6.0

    def test_identity(self):
        assert dense_det_oracle(np.eye(5)) == 1.0

    def test_row_swap_sign(self):
        assert dense_det_oracle([[0, 1], [1, 0]]) == -1.0

    def test_singular(self):
        assert dense_det_oracle([[1, 2], [2, 4]]) == 0.0

    @pytest.mark.parametrize("seed", range(5))
    def test_matches_numpy(self, seed):
        A = np.random.default_rng(seed).normal(size=(7, 7))
        assert dense_det_oracle(A) == pytest.approx(np.linalg.det(A), rel=1e-12)

    @pytest.mark.parametrize("bad", [np.zeros((0, 0)), np.zeros((2, 3)), np.eye(65), [[np.nan]]])
    def test_errors(self, bad):
        with pytest.raises(ValueError):
            dense_det_oracle(bad)
