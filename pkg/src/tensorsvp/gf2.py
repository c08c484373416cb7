"""GF(2) linear algebra, BCH-style parity checks and binary code distances."""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Iterable, Sequence

from .errors import ParameterError, ResourceLimitError
from .linalg import IntMatrix, hnf_basis

DEFAULT_CODE_CEILING = 20

# Primitive polynomials over GF(2), bit i = coefficient of x^i.
PRIMITIVE_POLYNOMIALS = {
    2: 0b111,
    3: 0b1011,
    4: 0b10011,
    5: 0b100101,
    6: 0b1011011,
    7: 0b10000011,
    8: 0b100011101,
    9: 0b1000010001,
    10: 0b10001101111,
    11: 0b100000000101,
    12: 0b1000011101011,
}


class BitMatrix:
    """Immutable matrix over GF(2); row ``i`` is an int whose bit ``j`` is entry (i, j)."""

    __slots__ = ("row_bits", "nrows", "ncols")

    def __init__(self, row_bits: Iterable[int], ncols: int):
        self.row_bits = tuple(int(r) for r in row_bits)
        self.nrows = len(self.row_bits)
        self.ncols = ncols
        mask = (1 << ncols) - 1
        if any(r & ~mask for r in self.row_bits):
            raise ValueError("row has bits beyond ncols")

    @classmethod
    def from_lists(cls, rows: Sequence[Sequence[int]], ncols: int | None = None) -> "BitMatrix":
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        return cls((sum((int(x) & 1) << j for j, x in enumerate(r)) for r in rows), ncols)

    @classmethod
    def from_columns(cls, col_bits: Sequence[int], nrows: int) -> "BitMatrix":
        """Build from column ints (bit ``i`` of a column is row ``i``)."""
        rows = [sum(((c >> i) & 1) << j for j, c in enumerate(col_bits)) for i in range(nrows)]
        return cls(rows, len(col_bits))

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "BitMatrix":
        return cls([0] * nrows, ncols)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls([1 << i for i in range(n)], n)

    def __getitem__(self, idx) -> int:
        i, j = idx
        return (self.row_bits[i] >> j) & 1

    def tolist(self) -> list[list[int]]:
        return [[(r >> j) & 1 for j in range(self.ncols)] for r in self.row_bits]

    def column_bits(self) -> list[int]:
        return [sum(((r >> j) & 1) << i for i, r in enumerate(self.row_bits)) for j in range(self.ncols)]

    def to_intmatrix(self) -> IntMatrix:
        return IntMatrix(self.tolist(), self.ncols)

    def apply(self, v: int) -> int:
        """``P v`` over GF(2); ``v`` and the result are bit-packed."""
        return sum((bin(r & v).count("1") & 1) << i for i, r in enumerate(self.row_bits))

    def kron(self, other: "BitMatrix") -> "BitMatrix":
        rows = []
        for ra in self.row_bits:
            for rb in other.row_bits:
                rows.append(sum(rb << (j * other.ncols) for j in range(self.ncols) if (ra >> j) & 1))
        return BitMatrix(rows, self.ncols * other.ncols)

    def rank(self) -> int:
        return len(row_basis(self.row_bits))

    def kernel_basis(self) -> list[int]:
        """Basis of ``{v : P v = 0}``, bit-packed."""
        return kernel_bits(self.row_bits, self.ncols)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.ncols == other.ncols and self.row_bits == other.row_bits

    def __hash__(self):
        return hash((self.ncols, self.row_bits))

    def __repr__(self) -> str:
        body = ", ".join("".join(str(x) for x in r) for r in self.tolist())
        return f"BitMatrix({self.nrows}x{self.ncols}: {body})"


def weight(v: int) -> int:
    return bin(v).count("1")


def bits_to_list(v: int, n: int) -> list[int]:
    return [(v >> j) & 1 for j in range(n)]


def list_to_bits(v: Sequence[int]) -> int:
    return sum((int(x) & 1) << j for j, x in enumerate(v))


def row_basis(rows: Iterable[int]) -> list[int]:
    """Echelon basis (distinct leading bits) of the span of bit-packed vectors."""
    piv: dict[int, int] = {}
    for r in rows:
        while r:
            hb = r.bit_length() - 1
            if hb in piv:
                r ^= piv[hb]
            else:
                piv[hb] = r
                break
    return [piv[k] for k in sorted(piv, reverse=True)]


def kernel_bits(rows: Sequence[int], ncols: int) -> list[int]:
    pivots: dict[int, int] = {}  # pivot column -> reduced row
    for r in rows:
        for c, pr in pivots.items():
            if (r >> c) & 1:
                r ^= pr
        if r:
            c = (r & -r).bit_length() - 1
            for k in list(pivots):
                if (pivots[k] >> c) & 1:
                    pivots[k] ^= r
            pivots[c] = r
    free = [j for j in range(ncols) if j not in pivots]
    out = []
    for f in free:
        v = 1 << f
        for c, pr in pivots.items():
            if (pr >> f) & 1:
                v |= 1 << c
        out.append(v)
    return out


def columns_independent(col_bits: Sequence[int]) -> bool:
    return len(row_basis(col_bits)) == len(col_bits)


# ---------------------------------------------------------------------------
# GF(2^m)


class GF2m:
    """Arithmetic in GF(2^m) modulo a fixed primitive polynomial."""

    def __init__(self, m: int):
        if m not in PRIMITIVE_POLYNOMIALS:
            raise ParameterError(f"no primitive polynomial tabulated for m={m}")
        self.m = m
        self.poly = PRIMITIVE_POLYNOMIALS[m]
        self.size = 1 << m

    def mul(self, a: int, b: int) -> int:
        r = 0
        top = self.size
        while b:
            if b & 1:
                r ^= a
            b >>= 1
            a <<= 1
            if a & top:
                a ^= self.poly
        return r

    def pow(self, a: int, e: int) -> int:
        r = 1
        while e:
            if e & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            e >>= 1
        return r

    def multiplicative_order(self, a: int) -> int:
        if not 0 < a < self.size:
            raise ValueError("not a nonzero field element")
        x, k = a, 1
        while x != 1:
            x = self.mul(x, a)
            k += 1
        return k


# ---------------------------------------------------------------------------
# BCH parity check


@dataclass(frozen=True)
class BchParams:
    N: int
    d: int

    def __post_init__(self):
        if self.N < 2 or self.N & (self.N - 1):
            raise ParameterError(f"N={self.N} must be a power of two", "bch")
        if self.d < 2 or self.d % 2:
            raise ParameterError(f"d={self.d} must be even and >= 2", "bch")
        if self.d >= self.N:
            raise ParameterError(f"d={self.d} must be smaller than N={self.N}", "bch")
        if self.h > self.N:
            raise ParameterError(f"h={self.h} rows exceed N={self.N} columns", "bch")

    @property
    def m(self) -> int:
        return self.N.bit_length() - 1

    @property
    def h(self) -> int:
        return (self.d // 2) * self.m


def _bch_columns(params: BchParams) -> list[int]:
    """Columns (x, x^3, ..., x^(d-1)) for the nonzero elements x of GF(2^m)."""
    f = GF2m(params.m)
    m = params.m
    cols = []
    alpha = 2  # the class of x is primitive
    x = 1
    for _ in range(params.N - 1):
        col = 0
        for blk, e in enumerate(range(1, params.d, 2)):
            col |= f.pow(x, e) << (blk * m)
        cols.append(col)
        x = f.mul(x, alpha)
    return cols


class _SumTracker:
    """Sums of at most ``depth`` distinct chosen columns, by subset size."""

    def __init__(self, depth: int):
        self.layers = [{0}] + [set() for _ in range(depth)]

    def add(self, c: int) -> None:
        L = self.layers
        for j in range(len(L) - 1, 0, -1):
            L[j] |= {s ^ c for s in L[j - 1]}

    def forbidden(self, v: int) -> bool:
        return any(v in layer for layer in self.layers)


def _greedy_complete(seed: Sequence[int], h: int, d: int, target: int) -> list[int]:
    """Extend ``seed`` with the smallest h-bit columns that keep d-wise independence."""
    cols = list(seed)
    tr = _SumTracker(d - 1)
    for c in cols:
        tr.add(c)
    v = 1
    while len(cols) < target and v < (1 << h):
        if not tr.forbidden(v):
            cols.append(v)
            tr.add(v)
        v += 1
    return cols


def bch_parity(params: BchParams) -> BitMatrix:
    """An ``h x N`` GF(2) matrix with independent rows and every ``d`` columns independent.

    Columns start from the BCH columns ``(x, x^3, ..., x^(d-1))`` over the
    nonzero elements of GF(2^m), which supply N-1 columns.  The last column
    is added greedily when some h-bit vector avoids all sums of at most
    ``d-1`` chosen columns.  When the BCH columns already cover every
    syndrome, the whole matrix is rebuilt as the greedy lexicographic code.
    Parameter pairs for which neither yields N columns are rejected.
    """
    N, d, h = params.N, params.d, params.h
    if comb(N, d - 1) > 5_000_000:
        raise ResourceLimitError("bch column-sum table", comb(N, d - 1), 5_000_000)
    cols = _greedy_complete(_bch_columns(params), h, d, N)
    if len(cols) < N:
        cols = _greedy_complete([], h, d, N)
    if len(cols) < N:
        raise ParameterError(
            f"no {h}x{N} matrix with {d}-wise independent columns found "
            f"(construction reached {len(cols)} columns)", "bch")
    P = BitMatrix.from_columns(cols, h)
    if P.rank() != h:
        raise ParameterError(f"rows of the {h}x{N} matrix are dependent", "bch")
    return P


def every_d_columns_independent(P: BitMatrix, d: int) -> tuple[bool, int]:
    """Exhaustively check every d-subset of columns; returns (ok, subsets checked)."""
    cols = P.column_bits()
    count = 0
    for sub in combinations(cols, d):
        count += 1
        if not columns_independent(sub):
            return False, count
    return True, count


# ---------------------------------------------------------------------------
# lattices from codes


def kernel_mod2_lattice(P: BitMatrix):
    """Basis of ``{y in Z^N : P y = 0 (mod 2)}``.

    Generators are the 0/1 lifts of a GF(2) kernel basis together with
    ``2 e_i``; the HNF of the generators is the returned basis.
    """
    from .lattice import Lattice

    N = P.ncols
    gens = [bits_to_list(v, N) for v in P.kernel_basis()]
    gens += [[2 if i == j else 0 for i in range(N)] for j in range(N)]
    return Lattice(hnf_basis(IntMatrix.from_columns(gens, nrows=N)), check=False)


# ---------------------------------------------------------------------------
# distances


def _gray_min_weight(basis: Sequence[int]) -> int:
    k = len(basis)
    best = None
    cur = 0
    for i in range(1, 1 << k):
        bit = (i & -i).bit_length() - 1
        cur ^= basis[bit]
        w = weight(cur)
        if best is None or w < best:
            best = w
    return best


def min_distance(M: BitMatrix, kind: str = "generator", ceiling: int = DEFAULT_CODE_CEILING) -> int:
    """Minimum Hamming weight of a nonzero codeword.

    ``kind="generator"``: the code is the row space of ``M``.
    ``kind="parity"``: the code is the kernel of ``M``.
    """
    if kind == "generator":
        basis = row_basis(M.row_bits)
    elif kind == "parity":
        basis = M.kernel_basis()
    else:
        raise ValueError("kind must be 'generator' or 'parity'")
    if not basis:
        raise ValueError("the code has no nonzero codewords")
    if len(basis) > ceiling:
        raise ResourceLimitError("code dimension", len(basis), ceiling)
    return _gray_min_weight(basis)


@dataclass(frozen=True)
class CodeTensorReport:
    d1: int
    d2: int
    d_tensor: int

    @property
    def holds(self) -> bool:
        return self.d_tensor == self.d1 * self.d2


def code_tensor_distance_check(G1: BitMatrix, G2: BitMatrix, ceiling: int = DEFAULT_CODE_CEILING) -> CodeTensorReport:
    """Distances of C1, C2 and C1 (x) C2 (generated by ``G1 (x) G2``)."""
    return CodeTensorReport(
        min_distance(G1, ceiling=ceiling),
        min_distance(G2, ceiling=ceiling),
        min_distance(G1.kron(G2), ceiling=ceiling),
    )


# ---------------------------------------------------------------------------
# random shifts


@dataclass(frozen=True)
class ShiftSample:
    s: tuple[int, ...]
    codeword: tuple[int, ...]
    flips: tuple[int, ...]


def sample_codeword_shift(P: BitMatrix, r: int, rng: random.Random) -> ShiftSample:
    """Uniform kernel word of ``P`` with a uniform r-subset of coordinates flipped."""
    N = P.ncols
    if not 0 <= r <= N:
        raise ParameterError(f"r={r} must lie in [0, N={N}]")
    cw = 0
    for b in P.kernel_basis():
        if rng.getrandbits(1):
            cw ^= b
    flips = tuple(sorted(rng.sample(range(N), r)))
    s = cw
    for i in flips:
        s ^= 1 << i
    return ShiftSample(tuple(bits_to_list(s, N)), tuple(bits_to_list(cw, N)), flips)


def shift_multiplicity(P: BitMatrix, s: Sequence[int], r: int) -> int:
    """Number of lattice vectors ``z`` with ``z - s`` a 0/1 vector of weight ``r``.

    These correspond one-to-one with r-subsets ``F`` for which ``s XOR 1_F``
    lies in the kernel of ``P``.
    """
    sb = list_to_bits(s)
    target = P.apply(sb)
    cols = P.column_bits()
    return sum(1 for F in combinations(cols, r) if _xor(F) == target)


def _xor(vals) -> int:
    acc = 0
    for v in vals:
        acc ^= v
    return acc


def shift_is_typical(P: BitMatrix, s: Sequence[int], r: int) -> bool:
    """Whether ``s`` has more than ``C(N, r) / (100 * 2^h)`` weight-r neighbours in the lattice."""
    return 100 * (1 << P.nrows) * shift_multiplicity(P, s, r) > comb(P.ncols, r)
