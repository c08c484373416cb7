import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import full_rank_bases, matrices
from tensorsvp.errors import FormatError
from tensorsvp.gf2 import BitMatrix
from tensorsvp.lattice import Lattice
from tensorsvp.reduction import SetCoverInstance
from tensorsvp.suites import desk_run
from tensorsvp.svp import GapInstance
from tensorsvp.textio import (
    format_bitmatrix,
    format_certificate,
    format_gap_instance,
    format_lattice,
    format_matrix,
    format_setcover,
    parse_bitmatrix,
    parse_certificate,
    parse_gap_instance,
    parse_lattice,
    parse_matrix,
    parse_setcover,
)


def test_matrix_text():
    from tensorsvp.linalg import IntMatrix

    assert format_matrix(IntMatrix([[1, -2], [3, 4]])) == "2 2\n1 -2\n3 4\n"


@given(matrices(lo=-10 ** 20, hi=10 ** 20))
def test_matrix_roundtrip(m):
    assert parse_matrix(format_matrix(m)) == m


@given(full_rank_bases(3))
def test_lattice_roundtrip(b):
    lat = Lattice(b)
    text = format_lattice(lat)
    assert text.splitlines()[0] == f"{lat.ambient_dim} {lat.rank}"
    assert parse_lattice(text).basis == b


@given(st.integers(1, 5).flatmap(lambda c: st.lists(st.integers(0, (1 << c) - 1), min_size=1, max_size=4).map(
    lambda rows: BitMatrix(rows, c))))
def test_bitmatrix_roundtrip(m):
    text = format_bitmatrix(m)
    assert set("".join(text.splitlines()[1:])) <= {"0", "1"}
    assert parse_bitmatrix(text) == m


@given(st.integers(1, 6).flatmap(lambda n: st.lists(
    st.frozensets(st.integers(0, n - 1), min_size=1), min_size=1, max_size=5).map(lambda sets: (n, sets))))
def test_setcover_roundtrip(args):
    n, sets = args
    inst = SetCoverInstance(n, tuple(sets), 4, Fraction(1, 4))
    assert parse_setcover(format_setcover(inst)) == inst


def test_setcover_one_indexed():
    inst = SetCoverInstance(3, (frozenset({0, 2}),), 4, Fraction(1, 4))
    assert format_setcover(inst) == "3 1 4 1 4\n2 1 3\n"


@pytest.mark.parametrize("p", [1, 2, 5, math.inf])
def test_gap_roundtrip(p):
    from tensorsvp.linalg import IntMatrix

    inst = GapInstance(IntMatrix([[1, 2], [0, 3], [4, 4]]), Fraction(7, 3), p)
    back = parse_gap_instance(format_gap_instance(inst))
    assert (back.basis, back.threshold, back.p) == (inst.basis, inst.threshold, inst.p)


def test_certificate_roundtrip():
    run = desk_run("YES", 2)[1]
    assert parse_certificate(format_certificate(run.certificate)) == run.certificate


@pytest.mark.parametrize("text", ["", "2 2\n1 2\n", "1 2\n1 x\n", "1 1\n1\n5\n", "2 2\n1 2 3\n4 5\n"])
def test_bad_matrix(text):
    with pytest.raises(FormatError):
        parse_matrix(text)


@pytest.mark.parametrize("text,fn", [
    ("3 2\n2 2\n1 0\n0 1\n", parse_lattice),
    ("1 2\n102\n", parse_bitmatrix),
    ("3 1 4 1 4\n3 1 3\n", parse_setcover),
    ("3 1 4 1 4\n1 4\n", parse_setcover),
    ("seed=1\nq\n", parse_certificate),
    ("seed=1\n", parse_certificate),
])
def test_bad_files(text, fn):
    with pytest.raises(Exception) as exc:
        fn(text)
    assert isinstance(exc.value, (FormatError, ValueError))
