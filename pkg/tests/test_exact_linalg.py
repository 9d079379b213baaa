import math
from fractions import Fraction

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from octodirac.exact_linalg import (
    ExactMatrix,
    RowSpace,
    ShapeError,
    expm,
    inverse,
    kron,
    matmul,
    nullspace,
    rank,
    span_dimension,
    word_products,
)

I2 = ExactMatrix.identity(2)
I4 = ExactMatrix.identity(4)
J = ExactMatrix([[0, 1], [-1, 0]])

entries = st.fractions(min_value=-5, max_value=5, max_denominator=4)


def matrices(rows, cols):
    return st.lists(st.lists(entries, min_size=cols, max_size=cols), min_size=rows, max_size=rows).map(ExactMatrix)


@st.composite
def matrix_any(draw, max_dim=4):
    r = draw(st.integers(1, max_dim))
    c = draw(st.integers(1, max_dim))
    return draw(matrices(r, c))


def brute_span(gens, max_len):
    """Rank of all words up to max_len, via floating rank on small integer data."""
    mats = [ExactMatrix.identity(gens[0].rows)]
    for length in range(1, max_len + 1):
        mats.extend(word_products(gens, length))
    stack = np.array([m.to_float().ravel() for m in mats])
    return int(np.linalg.matrix_rank(stack))


class TestKron:
    def test_identity(self):
        assert kron(I2, I2) == I4

    def test_diagonal(self):
        assert kron(ExactMatrix.diag([1, -1]), I2) == ExactMatrix.diag([1, 1, -1, -1])

    def test_real_sigma2_squared_is_plus_identity(self):
        k = kron(J, J)
        assert k.shape == (4, 4)
        assert matmul(k, k) == I4

    def test_blocks(self):
        a = ExactMatrix([[1, 2], [3, 4]])
        b = ExactMatrix([[0, 5], [6, 7]])
        k = kron(a, b)
        for i in range(2):
            for j in range(2):
                block = ExactMatrix([[k[2 * i + r, 2 * j + c] for c in range(2)] for r in range(2)])
                assert block == b.scale(a[i, j])

    def test_rectangular_shape(self):
        assert kron(ExactMatrix([[1, 2, 3]]), ExactMatrix([[1], [2]])).shape == (2, 3)

    @settings(max_examples=40, deadline=None)
    @given(matrices(2, 3), matrices(3, 2), matrices(2, 2), matrices(2, 1))
    def test_mixed_product(self, a, c, b, d):
        assert matmul(kron(a, b), kron(c, d)) == kron(matmul(a, c), matmul(b, d))

    @settings(max_examples=40, deadline=None)
    @given(matrix_any(3), matrix_any(3))
    def test_transpose(self, a, b):
        assert kron(a, b).T == kron(a.T, b.T)


class TestMatmul:
    def test_identity(self):
        m = ExactMatrix([[1, Fraction(1, 2), 0, 3]] * 4)
        assert matmul(I4, m) == m

    def test_real_sqrt_minus_one(self):
        assert matmul(J, J) == -I2

    def test_shape_mismatch(self):
        with pytest.raises(ShapeError):
            matmul(I2, I4)

    def test_fractions_against_naive(self):
        a = ExactMatrix([[Fraction(1, 3), 2], [Fraction(-5, 7), Fraction(1, 2)]])
        b = ExactMatrix([[Fraction(3, 4), 0], [1, Fraction(-2, 9)]])
        naive = ExactMatrix([[sum(a[i, k] * b[k, j] for k in range(2)) for j in range(2)] for i in range(2)])
        assert matmul(a, b) == naive

    def test_unit_products_have_trinary_entries(self, units):
        p = matmul(units[1], units[2])
        assert p.shape == (32, 32)
        assert {x for x in p.entries} <= {-1, 0, 1}

    @settings(max_examples=40, deadline=None)
    @given(matrices(3, 3), matrices(3, 3), matrices(3, 3))
    def test_associative(self, a, b, c):
        assert matmul(matmul(a, b), c) == matmul(a, matmul(b, c))


class TestNullspace:
    def test_full_rank(self):
        assert nullspace(ExactMatrix.identity(3)) == []

    def test_zero(self):
        ns = nullspace(ExactMatrix.zeros(2))
        assert len(ns) == 2

    def test_known(self):
        a = ExactMatrix([[1, 2, 3], [2, 4, 6]])
        ns = nullspace(a)
        assert len(ns) == 2
        for v in ns:
            assert matmul(a, v).is_zero()

    @settings(max_examples=60, deadline=None)
    @given(matrix_any(5))
    def test_rank_nullity(self, a):
        ns = nullspace(a)
        for v in ns:
            assert matmul(a, v).is_zero()
        assert len(ns) + rank(a) == a.cols
        # independence of the basis
        if ns:
            assert rank(ExactMatrix([v.entries for v in ns])) == len(ns)

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.lists(st.integers(-3, 3), min_size=4, max_size=4), min_size=1, max_size=5))
    def test_rank_matches_numpy_on_integers(self, rows):
        assert rank(ExactMatrix(rows)) == np.linalg.matrix_rank(np.array(rows, dtype=float))


class TestRowSpace:
    def test_contains(self):
        rs = RowSpace(3)
        assert rs.add([1, 1, 0])
        assert rs.add([0, 1, 1])
        assert not rs.add([1, 2, 1])
        assert rs.contains([2, 0, -2])
        assert not rs.contains([0, 0, 1])


class TestInverse:
    def test_inverse(self):
        a = ExactMatrix([[2, 1], [1, 1]])
        assert matmul(a, inverse(a)) == I2

    def test_singular(self):
        with pytest.raises(ZeroDivisionError):
            inverse(ExactMatrix([[1, 2], [2, 4]]))

    @settings(max_examples=30, deadline=None)
    @given(matrices(3, 3))
    def test_roundtrip(self, a):
        if rank(a) == 3:
            assert matmul(inverse(a), a) == ExactMatrix.identity(3)


class TestSpanDimension:
    def test_identity_alone(self):
        assert span_dimension([I2]) == 1

    def test_gamma4_is_sixteen(self, gamma4):
        assert span_dimension(gamma4.generators) == 16

    @pytest.mark.parametrize("length", [0, 1, 2, 3, 4])
    def test_against_brute_force_words(self, gamma4, length):
        gens = list(gamma4.generators)
        assert span_dimension(gens, length) == brute_span(gens, length)

    def test_against_brute_force_nonclifford(self):
        gens = [ExactMatrix([[1, 1, 0], [0, 1, 0], [0, 0, 2]]), ExactMatrix([[0, 0, 1], [1, 0, 0], [0, 1, 0]])]
        for length in range(5):
            assert span_dimension(gens, length) == brute_span(gens, length)

    def test_monotone_and_bounded(self, gamma4):
        dims = [span_dimension(gamma4.generators, k) for k in range(6)]
        assert dims == sorted(dims)
        assert dims[-1] <= 16

    def test_mismatched_sizes(self):
        with pytest.raises(ShapeError):
            span_dimension([I2, I4])


class TestExpm:
    def test_zero(self):
        np.testing.assert_array_equal(expm(np.zeros((3, 3))), np.eye(3))

    def test_diagonal(self):
        out = expm(np.diag([math.log(2), 0.0]))
        np.testing.assert_allclose(out, np.diag([2.0, 1.0]), rtol=0, atol=1e-12)

    @pytest.mark.parametrize("theta", [0.0, 0.3, 1.0, 2.5, -4.0])
    def test_rotation_closed_form(self, theta):
        out = expm(theta * np.array([[0.0, 1.0], [-1.0, 0.0]]))
        want = np.array([[math.cos(theta), math.sin(theta)], [-math.sin(theta), math.cos(theta)]])
        np.testing.assert_allclose(out, want, rtol=0, atol=1e-12)

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            expm(np.array([[np.nan]]))

    def test_exact_input(self):
        np.testing.assert_allclose(expm(ExactMatrix([[0, 1], [0, 0]])), [[1, 1], [0, 1]], atol=1e-15)

    @settings(max_examples=50, deadline=None)
    @given(st.integers(1, 6), st.integers(0, 2**32 - 1))
    def test_against_scipy_and_inverse(self, n, seed):
        a = np.random.default_rng(seed).normal(size=(n, n))
        a /= max(np.linalg.norm(a, 2), 1e-300)  # spectral norm 1
        e = expm(a)
        np.testing.assert_allclose(e, scipy.linalg.expm(a), rtol=1e-12, atol=1e-13)
        np.testing.assert_allclose(e @ expm(-a), np.eye(n), atol=1e-10)
        # d/dt expm(t a) at t=1 equals a expm(a); central difference residual
        h = 1e-5
        deriv = (expm((1 + h) * a) - expm((1 - h) * a)) / (2 * h)
        np.testing.assert_allclose(deriv, a @ e, atol=1e-8)
