import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import matrices
from tensorsvp.errors import RankDeficientError, SingularMatrixError
from tensorsvp.linalg import (
    IntMatrix,
    bareiss_det,
    det_gram,
    ext_gcd,
    hnf_basis,
    hnf_decompose,
    integer_kernel,
    is_unimodular,
    rank,
    rational_inverse,
    rational_matmul,
    solve_diophantine,
)


def leibniz_det(rows):
    n = len(rows)
    total = 0
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = -1 if inv % 2 else 1
        for i, p in enumerate(perm):
            term *= rows[i][p]
        total += term
    return total


def fraction_rank(m: IntMatrix) -> int:
    a = [[Fraction(x) for x in row] for row in m.rows]
    r = 0
    for c in range(m.ncols):
        piv = next((i for i in range(r, m.nrows) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(m.nrows):
            if i != r and a[i][c]:
                f = a[i][c] / a[r][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
    return r


class TestIntMatrix:
    def test_basic_ops(self):
        a = IntMatrix([[1, 2], [3, 4]])
        b = IntMatrix([[0, 1], [1, 0]])
        assert (a @ b).tolist() == [[2, 1], [4, 3]]
        assert a.T.tolist() == [[1, 3], [2, 4]]
        assert (a + b).tolist() == [[1, 3], [4, 4]]
        assert (a - a).is_zero()
        assert a.apply([1, -1]) == (-1, -1)
        assert a.trace() == 5
        assert a[1, 0] == 3

    def test_kron_layout(self):
        a = IntMatrix([[1, 2]])
        b = IntMatrix([[0], [3]])
        assert a.kron(b).tolist() == [[0, 0], [3, 6]]

    def test_columns_roundtrip(self):
        m = IntMatrix.from_columns([(1, 2, 3), (4, 5, 6)])
        assert m.shape == (3, 2)
        assert m.columns() == [(1, 2, 3), (4, 5, 6)]

    def test_empty_columns(self):
        m = IntMatrix.from_columns([], nrows=3)
        assert m.shape == (3, 0)

    def test_ragged_rejected(self):
        with pytest.raises(ValueError):
            IntMatrix([[1, 2], [3]])

    def test_hashable_and_equal(self):
        assert IntMatrix([[1]]) == IntMatrix([[1]])
        assert len({IntMatrix([[1]]), IntMatrix([[1]])}) == 1


class TestDeterminant:
    @given(st.integers(1, 4).flatmap(
        lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=n, max_size=n)))
    def test_bareiss_matches_leibniz(self, rows):
        assert bareiss_det(rows) == leibniz_det(rows)

    def test_big_entries(self):
        big = 10 ** 40
        assert bareiss_det([[big, 1], [1, big]]) == big * big - 1

    @given(matrices())
    def test_rank_matches_fractions(self, m):
        assert rank(m) == fraction_rank(m)

    def test_det_gram_rank_deficient(self):
        with pytest.raises(RankDeficientError):
            det_gram(IntMatrix([[1, 2], [2, 4]]))


class TestHnf:
    def test_known_example(self):
        h = hnf_basis(IntMatrix.from_columns([(4, 0), (2, 2)]))
        assert h.tolist() == [[2, 0], [2, 4]]
        assert det_gram(h) == 64

    def test_identity(self):
        h, u = hnf_decompose(IntMatrix.identity(3))
        assert h == IntMatrix.identity(3)
        assert u == IntMatrix.identity(3)

    @given(matrices(max_rows=4, max_cols=5))
    def test_decomposition(self, b):
        h, u = hnf_decompose(b)
        r = h.ncols
        assert r == rank(b)
        assert is_unimodular(u)
        padded = h.hstack(IntMatrix.zeros(b.nrows, b.ncols - r))
        assert padded @ u == b

    @given(matrices(max_rows=4, max_cols=5))
    def test_hermite_shape(self, b):
        h = hnf_basis(b)
        pivots = []
        for j in range(h.ncols):
            col = h.col(j)
            i = next(i for i, x in enumerate(col) if x)
            assert col[i] > 0
            pivots.append(i)
            for k in range(j):
                assert 0 <= h[i, k] < col[i]
        assert pivots == sorted(set(pivots))

    @given(matrices(max_rows=3, max_cols=3), st.data())
    def test_canonical_under_basis_change(self, b, data):
        ops = data.draw(st.lists(st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(-3, 3)), max_size=6))
        cols = [list(c) for c in b.columns()]
        for i, j, c in ops:
            if i < len(cols) and j < len(cols) and i != j:
                cols[j] = [x + c * y for x, y in zip(cols[j], cols[i])]
        other = IntMatrix.from_columns(cols, nrows=b.nrows)
        assert hnf_basis(other) == hnf_basis(b)


class TestKernelAndSolve:
    def test_kernel_of_sum(self):
        k = integer_kernel(IntMatrix([[1, 1]]))
        assert k.columns() in ([(-1, 1)], [(1, -1)])

    def test_kernel_of_identity_is_empty(self):
        assert integer_kernel(IntMatrix.identity(4)).shape == (4, 0)

    @given(matrices(max_rows=3, max_cols=5))
    def test_kernel_is_saturated(self, s):
        k = integer_kernel(s)
        assert k.ncols == s.ncols - rank(s)
        assert (s @ k).is_zero()
        # primitive: the kernel lattice equals its rational span intersected with Z^n
        if k.ncols:
            assert _maximal_minor_gcd(k) == 1

    def test_solve_examples(self):
        assert solve_diophantine(IntMatrix([[2, 3]]), [1]) is not None
        t = solve_diophantine(IntMatrix([[2, 3]]), [1])
        assert 2 * t[0] + 3 * t[1] == 1
        assert solve_diophantine(IntMatrix([[2]]), [1]) is None
        assert solve_diophantine(IntMatrix([[1, 1], [1, 1]]), [1, 2]) is None

    @given(matrices(max_rows=3, max_cols=4), st.data())
    def test_solve_consistent_systems(self, s, data):
        x = data.draw(st.lists(st.integers(-4, 4), min_size=s.ncols, max_size=s.ncols))
        b = s.apply(x)
        t = solve_diophantine(s, b)
        assert t is not None and s.apply(t) == b

    @given(st.lists(st.integers(-6, 6), min_size=1, max_size=3), st.integers(-20, 20))
    def test_single_row_matches_gcd(self, row, rhs):
        from math import gcd

        g = 0
        for a in row:
            g = gcd(g, a)
        t = solve_diophantine(IntMatrix([row]), [rhs])
        expect = rhs == 0 if g == 0 else rhs % g == 0
        assert (t is not None) == expect


def _maximal_minor_gcd(k: IntMatrix) -> int:
    from math import gcd

    r = k.ncols
    g = 0
    for rows in itertools.combinations(range(k.nrows), r):
        g = gcd(g, bareiss_det([[k[i, j] for j in range(r)] for i in rows]))
    return g


class TestRational:
    @given(st.integers(1, 4).flatmap(
        lambda n: st.lists(st.lists(st.integers(-5, 5), min_size=n, max_size=n), min_size=n, max_size=n)))
    def test_inverse(self, rows):
        m = IntMatrix(rows)
        if bareiss_det(rows) == 0:
            with pytest.raises(SingularMatrixError):
                rational_inverse(m)
            return
        inv = rational_inverse(m)
        n = len(rows)
        assert rational_matmul(rows, inv) == tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))

    @given(st.integers(-10 ** 6, 10 ** 6), st.integers(-10 ** 6, 10 ** 6))
    def test_ext_gcd(self, a, b):
        from math import gcd

        g, x, y = ext_gcd(a, b)
        assert g == gcd(a, b) and x * a + y * b == g
