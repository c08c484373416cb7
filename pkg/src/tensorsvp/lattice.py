"""Integer lattices, their tensor products, duals and congruence sublattices."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import RankDeficientError, ResourceLimitError
from .linalg import (
    IntMatrix,
    det_gram,
    hnf_basis,
    integer_kernel,
    rational_inverse,
    solve_diophantine,
)

DEFAULT_TENSOR_CEILING = 4096


class Lattice:
    """Lattice generated by the columns of an integer basis matrix.

    ``basis`` is ``ambient_dim x rank`` and must have full column rank;
    pass ``check=False`` only when that is already known (e.g. Kronecker
    products of bases).
    """

    __slots__ = ("basis", "rank", "ambient_dim", "_cols", "_det_gram")

    def __init__(self, basis: IntMatrix, check: bool = True):
        self.basis = basis
        self.ambient_dim, self.rank = basis.shape
        self._cols = None
        self._det_gram = None
        if self.rank > self.ambient_dim:
            raise RankDeficientError(f"rank {self.rank} exceeds ambient dimension {self.ambient_dim}")
        if check and self.rank:
            self._det_gram = det_gram(basis)

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence[int]], ambient_dim: int | None = None, check=True):
        return cls(IntMatrix.from_columns(cols, nrows=ambient_dim), check=check)

    @classmethod
    def integer(cls, n: int) -> "Lattice":
        """The lattice Z^n."""
        return cls(IntMatrix.identity(n), check=False)

    def columns(self) -> list[tuple[int, ...]]:
        if self._cols is None:
            self._cols = self.basis.columns()
        return self._cols

    def det_gram(self) -> int:
        """``det(B^T B)``, i.e. the squared lattice determinant."""
        if self._det_gram is None:
            self._det_gram = det_gram(self.basis) if self.rank else 1
        return self._det_gram

    def vector(self, coeffs: Sequence[int]) -> tuple[int, ...]:
        return self.basis.apply(coeffs)

    def coefficients(self, v: Sequence[int]) -> tuple[int, ...] | None:
        """Integer coefficients of ``v`` in this basis, or None if ``v`` is not in the lattice."""
        return solve_diophantine(self.basis, v)

    def contains(self, v: Sequence[int]) -> bool:
        return self.coefficients(v) is not None

    def is_full_rank(self) -> bool:
        return self.rank == self.ambient_dim

    def __repr__(self) -> str:
        return f"Lattice(ambient_dim={self.ambient_dim}, rank={self.rank})"


def same_lattice(a: Lattice, b: Lattice) -> bool:
    """Exact equality test through canonical HNF bases."""
    return a.ambient_dim == b.ambient_dim and hnf_basis(a.basis) == hnf_basis(b.basis)


# ---------------------------------------------------------------------------
# tensor products


@dataclass(frozen=True)
class TensorVector:
    """A vector of ``R^(n1*n2)`` together with its ``n1 x n2`` matrix view.

    Coordinate ``i*n2 + j`` of the flat vector is entry ``(i, j)`` of the
    matrix.  Entries may be ints or Fractions.
    """

    flat: tuple
    n1: int
    n2: int

    def __post_init__(self):
        if len(self.flat) != self.n1 * self.n2:
            raise ValueError("flat length must equal n1*n2")

    @classmethod
    def from_matrix(cls, rows) -> "TensorVector":
        rows = [tuple(r) for r in rows]
        n2 = len(rows[0]) if rows else 0
        return cls(tuple(x for r in rows for x in r), len(rows), n2)

    @property
    def matrix(self) -> tuple[tuple, ...]:
        n2 = self.n2
        return tuple(self.flat[i * n2:(i + 1) * n2] for i in range(self.n1))

    def norm_sq(self):
        return sum(x * x for x in self.flat)

    def trace_form(self):
        """``tr(W W^T)`` computed from the matrix view."""
        w = self.matrix
        return sum(sum(a * b for a, b in zip(w[i], w[i])) for i in range(self.n1))


def tensor_vector(u: Sequence[int], v: Sequence[int]) -> tuple:
    """``u (x) v`` as the flat vector ``(u_1 v, ..., u_n1 v)``."""
    return tuple(a * b for a in u for b in v)


def tensor(l1: Lattice, l2: Lattice) -> Lattice:
    """``L1 (x) L2``, generated by the Kronecker product of the bases."""
    return Lattice(l1.basis.kron(l2.basis), check=False)


def tensor_power(lat: Lattice, k: int, max_rank: int = DEFAULT_TENSOR_CEILING) -> Lattice:
    """k-fold tensor product; refuses when the rank ``m**k`` exceeds ``max_rank``."""
    if k < 1:
        raise ValueError("k must be at least 1")
    need = lat.rank ** k
    if need > max_rank:
        raise ResourceLimitError("tensor power rank", need, max_rank)
    out = lat
    for _ in range(k - 1):
        out = tensor(out, lat)
    return out


def embed_coefficients(b1: IntMatrix, x: IntMatrix, b2: IntMatrix) -> TensorVector:
    """The tensor-lattice vector ``B1 X B2^T`` in both views."""
    return TensorVector.from_matrix((b1 @ x @ b2.T).rows)


# ---------------------------------------------------------------------------
# duals


@dataclass(frozen=True)
class RationalLattice:
    """A lattice with a rational basis, supporting only what dual bases need."""

    rows: tuple[tuple[Fraction, ...], ...]  # ambient_dim x rank

    @property
    def ambient_dim(self) -> int:
        return len(self.rows)

    @property
    def rank(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    def columns(self) -> list[tuple[Fraction, ...]]:
        return [tuple(c) for c in zip(*self.rows)]


def dual(lat: Lattice) -> RationalLattice:
    """Dual of a full-rank lattice, basis ``(B^{-1})^T``."""
    if not lat.is_full_rank():
        raise RankDeficientError("dual is only defined here for full-rank lattices")
    inv = rational_inverse(lat.basis)
    return RationalLattice(tuple(zip(*inv)))


def identity_tensor_witness(lat: Lattice) -> TensorVector:
    """The vector ``sum_i b_i (x) b~_i`` of ``L (x) L*``.

    Its matrix view is ``B B^{-1} = I``; the sum is formed term by term in
    exact rational arithmetic rather than assumed.
    """
    dl = dual(lat)
    n = lat.ambient_dim
    acc = [Fraction(0)] * (n * n)
    for b, bt in zip(lat.columns(), dl.columns()):
        for idx, val in enumerate(tensor_vector(b, bt)):
            acc[idx] += val
    return TensorVector(tuple(acc), n, n)


# ---------------------------------------------------------------------------
# congruence sublattices and norms


def congruence_sublattice(lat: Lattice, w: Sequence[int], q: int) -> Lattice:
    """Basis of ``{x in L : <w, x> = 0 (mod q)}``.

    The congruence is pulled back to coefficient space, ``c = B^T w``; the
    coefficient sublattice ``{y : <c, y> = 0 mod q}`` is the projection of the
    integer kernel of the row ``(c | q)``, which is then HNF-reduced and
    mapped back through ``B``.
    """
    if len(w) != lat.ambient_dim:
        raise ValueError("w must have the ambient dimension of the lattice")
    if q < 2:
        raise ValueError("q must be at least 2")
    m = lat.rank
    c = [sum(a * b for a, b in zip(col, w)) % q for col in lat.columns()]
    ker = integer_kernel(IntMatrix([c + [q]]))
    proj = IntMatrix(ker.rows[:m], ker.ncols)
    coeff = hnf_basis(proj)
    return Lattice(lat.basis @ coeff, check=False)


def lp_norm(v: Sequence[int], p) -> int:
    """``sum |v_i|^p`` for finite integer ``p``; ``max |v_i|`` for ``p = inf``."""
    if p == math.inf:
        return max((abs(x) for x in v), default=0)
    p = int(p)
    if p < 1:
        raise ValueError("p must be >= 1")
    return sum(abs(x) ** p for x in v)
