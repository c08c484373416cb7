import random

import pytest
from hypothesis import given, strategies as st

from conftest import full_rank_bases
from tensorsvp.analysis import (
    random_sublattice,
    random_unimodular,
    sublattice_factor,
    tensor_case_check,
    trace_det_bound,
    trichotomy_classify,
    verify_tensor_lower_bound,
)
from tensorsvp.errors import RankDeficientError
from tensorsvp.lattice import Lattice
from tensorsvp.linalg import IntMatrix, is_unimodular, rank
from tensorsvp.suites import desk_run, rank_reduced


class TestTraceDet:
    def test_identity(self):
        rep = trace_det_bound(IntMatrix.identity(2), IntMatrix.identity(2))
        assert (rep.norm_sq, rep.lhs, rep.rhs) == (2, 4, 4)

    def test_rank_one(self):
        rep = trace_det_bound(IntMatrix([[3]]), IntMatrix([[2]]))
        assert (rep.norm_sq, rep.lhs, rep.rhs) == (36, 36, 36)

    def test_diag(self):
        rep = trace_det_bound(IntMatrix.diag([2, 1]), IntMatrix.identity(2))
        assert (rep.norm_sq, rep.lhs, rep.rhs) == (5, 25, 16)

    def test_rank_deficient(self):
        with pytest.raises(RankDeficientError):
            trace_det_bound(IntMatrix([[1, 2], [2, 4]]), IntMatrix.identity(2))

    @given(st.integers(1, 4).flatmap(lambda r: st.tuples(full_rank_bases_exact(r), full_rank_bases_exact(r))))
    def test_inequality(self, pair):
        rep = trace_det_bound(*pair)
        assert rep.consistent
        assert rep.lhs >= rep.rhs


def full_rank_bases_exact(r):
    return st.integers(r, r + 1).flatmap(
        lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=r, max_size=r), min_size=n, max_size=n)
    ).map(lambda rows: IntMatrix(rows, r)).filter(lambda m: rank(m) == r)


class TestTrichotomy:
    def test_even(self):
        rep = trichotomy_classify(IntMatrix([[2], [0]]), 4)
        assert rep.prop == 2 and rep.nonzero_rows == 1

    def test_det(self):
        rep = trichotomy_classify(IntMatrix([[5], [0]]), 4)
        assert rep.prop == 3 and rep.det_sq == 25

    def test_rows(self):
        rep = trichotomy_classify(IntMatrix.identity(4), 4, random.Random(0))
        assert rep.prop == 1 and rep.resamples == 20

    def test_none_reported(self):
        rep = trichotomy_classify(IntMatrix([[1], [0]]), 4)
        assert rep.prop == 0 and not rep.holds

    @given(st.integers(1, 5), st.integers(0, 2 ** 32))
    def test_unimodular(self, r, seed):
        assert is_unimodular(random_unimodular(r, random.Random(seed)))

    @given(full_rank_bases(3, extra_dim=3), st.integers(0, 2 ** 32))
    def test_support_is_basis_invariant(self, b, seed):
        # raises if resampling changes the row support or parity
        trichotomy_classify(b, 4, random.Random(seed))

    def test_no_lattice_sublattices(self):
        _, run = desk_run("NO", 0)
        rng = random.Random(1)
        for _ in range(30):
            sub = random_sublattice(run.base, rng.randint(1, 3), rng)
            assert trichotomy_classify(sub, 4, rng).holds


class TestSublatticeFactor:
    def _check(self, X, B1, B2):
        b1p, b2p = sublattice_factor(X, B1, B2)
        assert b1p @ b2p.T == B1 @ X @ B2.T
        assert rank(b1p) == b1p.ncols and rank(b2p) == b2p.ncols
        l1, l2 = Lattice(B1), Lattice(B2)
        assert all(l1.contains(c) for c in b1p.columns())
        assert all(l2.contains(c) for c in b2p.columns())
        return b1p, b2p

    def test_identity(self):
        B = IntMatrix([[1, 2], [0, 3]])
        b1p, b2p = self._check(IntMatrix.identity(2), B, B)
        assert b1p == B and b2p.ncols == 2

    def test_zero_column(self):
        B = IntMatrix.identity(2)
        _, b2p = self._check(IntMatrix([[1, 0], [2, 0]]), B, B)
        assert b2p.ncols == 1

    def test_rank_one(self):
        B = IntMatrix([[1, 0], [0, 2]])
        b1p, b2p = self._check(IntMatrix([[1, 1], [1, 1]]), B, B)
        assert b1p.ncols == b2p.ncols == 1

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            sublattice_factor(IntMatrix.zeros(2, 2), IntMatrix.identity(2), IntMatrix.identity(2))

    @given(full_rank_bases(3), full_rank_bases(3), st.data())
    def test_product_preserved(self, B1, B2, data):
        rows = data.draw(st.lists(st.lists(st.integers(-3, 3), min_size=B2.ncols, max_size=B2.ncols),
                                  min_size=B1.ncols, max_size=B1.ncols))
        X = IntMatrix(rows, B2.ncols)
        if X.is_zero():
            return
        self._check(X, B1, B2)


@pytest.fixture(scope="module")
def no_base():
    return desk_run("NO", 0)[1].base


class TestTensorBound:
    def test_with_z(self, no_base):
        rep = verify_tensor_lower_bound(no_base, 4, Lattice.integer(1))
        assert rep.l2_lambda1_sq == 1
        assert rep.tensor_lambda1_sq == 5 and rep.holds

    def test_with_diag3(self, no_base):
        rep = verify_tensor_lower_bound(no_base, 4, Lattice(IntMatrix([[3]])))
        assert rep.tensor_lambda1_sq >= 36 and rep.holds

    def test_square_of_reduced_fixture(self, no_base):
        fx = rank_reduced(no_base, 3)
        rep = verify_tensor_lower_bound(fx, 4, fx)
        assert rep.holds and rep.tensor_lambda1_sq >= 16

    def test_case_analysis(self, no_base):
        rng = random.Random(3)
        b2 = IntMatrix([[1, 2], [0, 3], [1, 1]])
        for _ in range(10):
            X = IntMatrix(([rng.randint(-2, 2) for _ in range(2)] for _ in range(no_base.rank)), 2)
            if X.is_zero():
                continue
            rep = tensor_case_check(X, no_base.basis, b2, 4)
            assert rep.holds
