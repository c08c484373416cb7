import itertools
import random
from math import comb

import pytest
from hypothesis import given, strategies as st

from tensorsvp.errors import ParameterError, ResourceLimitError
from tensorsvp.gf2 import (
    PRIMITIVE_POLYNOMIALS,
    BchParams,
    BitMatrix,
    GF2m,
    bch_parity,
    bits_to_list,
    code_tensor_distance_check,
    columns_independent,
    every_d_columns_independent,
    kernel_mod2_lattice,
    list_to_bits,
    min_distance,
    row_basis,
    sample_codeword_shift,
    shift_is_typical,
    shift_multiplicity,
    weight,
)
from tensorsvp.svp import lambda1_exact


def bit_matrices(max_rows=5, max_cols=7):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.integers(0, (1 << c) - 1), min_size=r, max_size=r).map(
                lambda rows: BitMatrix(rows, c)
            )
        )
    )


def all_codewords(rows, n):
    """Row span by brute force."""
    out = set()
    for mask in range(1 << len(rows)):
        acc = 0
        for i, r in enumerate(rows):
            if mask >> i & 1:
                acc ^= r
        out.add(acc)
    return out


def brute_kernel(m: BitMatrix):
    return [v for v in range(1 << m.ncols) if m.apply(v) == 0]


class TestBitMatrix:
    def test_layout(self):
        m = BitMatrix.from_lists([[1, 0, 1], [0, 1, 1]])
        assert m.tolist() == [[1, 0, 1], [0, 1, 1]]
        assert m[0, 2] == 1 and m[1, 0] == 0
        assert m.to_intmatrix().tolist() == [[1, 0, 1], [0, 1, 1]]
        assert BitMatrix.from_columns(m.column_bits(), 2) == m

    def test_bits_lists(self):
        assert bits_to_list(0b101, 4) == [1, 0, 1, 0]
        assert list_to_bits([1, 0, 1, 0]) == 0b101
        assert weight(0b1011) == 3

    @given(bit_matrices())
    def test_rank_matches_span_size(self, m):
        span = all_codewords(m.row_bits, m.ncols)
        assert 1 << m.rank() == len(span)
        assert all_codewords(row_basis(m.row_bits), m.ncols) == span

    @given(bit_matrices())
    def test_kernel_matches_brute_force(self, m):
        basis = m.kernel_basis()
        assert all(m.apply(v) == 0 for v in basis)
        assert all_codewords(basis, m.ncols) == set(brute_kernel(m))

    @given(bit_matrices(3, 3), bit_matrices(3, 3))
    def test_kron(self, a, b):
        k = a.kron(b)
        for i, j in itertools.product(range(k.nrows), range(k.ncols)):
            assert k[i, j] == a[i // b.nrows, j // b.ncols] & b[i % b.nrows, j % b.ncols]

    def test_columns_independent(self):
        assert columns_independent([0b01, 0b10])
        assert not columns_independent([0b01, 0b10, 0b11])
        assert not columns_independent([0])


class TestField:
    @pytest.mark.parametrize("m", sorted(PRIMITIVE_POLYNOMIALS))
    def test_polynomial_is_primitive(self, m):
        f = GF2m(m)
        assert f.multiplicative_order(2) == (1 << m) - 1

    def test_mul_table_gf4(self):
        f = GF2m(2)
        # x * x = x + 1 modulo x^2 + x + 1
        assert f.mul(2, 2) == 3
        assert f.mul(3, 3) == 2
        assert f.pow(2, 3) == 1

    @given(st.integers(2, 8), st.data())
    def test_field_axioms(self, m, data):
        f = GF2m(m)
        a, b, c = (data.draw(st.integers(1, f.size - 1)) for _ in range(3))
        assert f.mul(a, b) == f.mul(b, a)
        assert f.mul(a, f.mul(b, c)) == f.mul(f.mul(a, b), c)
        assert f.mul(a, b ^ c) == f.mul(a, b) ^ f.mul(a, c)
        assert f.pow(a, f.size - 1) == 1

    def test_unknown_degree(self):
        with pytest.raises(ParameterError):
            GF2m(1)
        with pytest.raises(ValueError):
            GF2m(3).multiplicative_order(0)


class TestBch:
    def test_16_4(self):
        P = bch_parity(BchParams(16, 4))
        assert (P.nrows, P.ncols) == (8, 16)
        assert P.rank() == 8
        ok, count = every_d_columns_independent(P, 4)
        assert ok and count == comb(16, 4)
        assert min_distance(P, kind="parity") >= 5

    @pytest.mark.parametrize("N,d", [(8, 2), (16, 2), (32, 4), (64, 4)])
    def test_infeasible_pairs_rejected(self, N, d):
        with pytest.raises(ParameterError, match="columns"):
            bch_parity(BchParams(N, d))

    def test_resource_ceiling(self):
        with pytest.raises(ResourceLimitError):
            bch_parity(BchParams(64, 6))

    @pytest.mark.parametrize("N,d", [(12, 4), (16, 3), (16, 16), (1, 2)])
    def test_bad_params(self, N, d):
        with pytest.raises(ParameterError):
            BchParams(N, d)

    def test_kernel_mod2_lattice(self):
        P = bch_parity(BchParams(16, 4))
        lat = kernel_mod2_lattice(P)
        assert lat.rank == 16
        assert lat.det_gram() == 4 ** 8
        assert lambda1_exact(lat).norm_sq == 4
        for col in lat.columns():
            assert P.apply(list_to_bits([x % 2 for x in col])) == 0

    def test_kernel_mod2_small_brute_force(self):
        P = BitMatrix.from_lists([[1, 1, 0], [0, 1, 1]])
        lat = kernel_mod2_lattice(P)
        for v in itertools.product(range(-2, 3), repeat=3):
            member = P.apply(list_to_bits([x % 2 for x in v])) == 0
            assert lat.contains(v) == member


class TestDistances:
    @given(bit_matrices(4, 7))
    def test_generator_distance(self, g):
        if g.rank() == 0:
            with pytest.raises(ValueError):
                min_distance(g)
            return
        words = all_codewords(g.row_bits, g.ncols) - {0}
        assert min_distance(g) == min(map(weight, words))

    @given(bit_matrices(4, 7))
    def test_parity_distance(self, p):
        words = set(brute_kernel(p)) - {0}
        if not words:
            with pytest.raises(ValueError):
                min_distance(p, kind="parity")
            return
        assert min_distance(p, kind="parity") == min(map(weight, words))

    def test_ceiling(self):
        with pytest.raises(ResourceLimitError):
            min_distance(BitMatrix.identity(6), ceiling=5)

    def test_repetition_tensor(self):
        rep3 = BitMatrix.from_lists([[1, 1, 1]])
        even = BitMatrix.from_lists([[1, 1, 0], [0, 1, 1]])
        rep = code_tensor_distance_check(rep3, even)
        assert (rep.d1, rep.d2, rep.d_tensor) == (3, 2, 6)
        assert rep.holds


class TestShift:
    def test_sample_is_codeword_plus_flips(self):
        P = bch_parity(BchParams(16, 4))
        rng = random.Random(5)
        s = sample_codeword_shift(P, 7, rng)
        assert len(s.flips) == 7
        assert P.apply(list_to_bits(s.codeword)) == 0
        flipped = [c ^ (i in s.flips) for i, c in enumerate(s.codeword)]
        assert flipped == list(s.s)

    def test_multiplicity_brute_force(self):
        P = BitMatrix.from_lists([[1, 1, 0, 0], [0, 0, 1, 1]])
        s = (1, 0, 0, 0)
        expect = 0
        for F in itertools.combinations(range(4), 2):
            z = [x + (i in F) for i, x in enumerate(s)]
            if P.apply(list_to_bits([x % 2 for x in z])) == 0:
                expect += 1
        assert shift_multiplicity(P, s, 2) == expect

    def test_sampled_shift_has_a_neighbour(self):
        P = bch_parity(BchParams(16, 4))
        s = sample_codeword_shift(P, 7, random.Random(1))
        assert shift_multiplicity(P, s.s, 7) >= 1
        assert isinstance(shift_is_typical(P, s.s, 7), bool)
