"""Exact checkers for how lattices without short sparse vectors behave under tensoring."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .errors import RankDeficientError
from .lattice import Lattice, tensor
from .linalg import IntMatrix, bareiss_det, gram, hnf_decompose, rank
from .svp import DEFAULT_CEILING, lambda1_exact


# ---------------------------------------------------------------------------
# trace / determinant inequality


@dataclass(frozen=True)
class TraceDetReport:
    r: int
    norm_sq: int       # ||U W^T||^2 from the flattened vector
    trace: int         # tr(G1 G2)
    det_g1: int
    det_g2: int

    @property
    def lhs(self) -> int:
        return self.trace ** self.r

    @property
    def rhs(self) -> int:
        return self.r ** self.r * self.det_g1 * self.det_g2

    @property
    def consistent(self) -> bool:
        return self.norm_sq == self.trace

    @property
    def holds(self) -> bool:
        return self.consistent and self.lhs >= self.rhs


def trace_det_bound(U: IntMatrix, W: IntMatrix) -> TraceDetReport:
    """``tr(G1 G2)^r >= r^r det(G1) det(G2)`` for ``v = U W^T``.

    ``tr(G1 G2)`` is computed from the Gram matrices and compared with the
    squared norm of the flattened product; both must agree.
    """
    if U.ncols != W.ncols:
        raise ValueError("U and W need the same number of columns")
    r = U.ncols
    if r == 0 or rank(U) < r or rank(W) < r:
        raise RankDeficientError("U and W must have full column rank")
    g1, g2 = gram(U), gram(W)
    v = U @ W.T
    norm_sq = sum(x * x for row in v.rows for x in row)
    return TraceDetReport(r, norm_sq, (g1 @ g2).trace(), bareiss_det(g1.rows), bareiss_det(g2.rows))


# ---------------------------------------------------------------------------
# sublattice trichotomy


@dataclass(frozen=True)
class TrichotomyReport:
    """Which property a sublattice basis satisfies, with its witness.

    ``prop`` is 1 (at least d nonzero rows), 2 (all even, at least d/4
    nonzero rows), 3 (``det^2 >= d^r``) or 0 when none holds.
    """

    prop: int
    nonzero_rows: int
    all_even: bool
    det_sq: int
    rank: int
    d: int
    resamples: int = 0

    @property
    def holds(self) -> bool:
        return self.prop != 0


def _support(basis: IntMatrix) -> tuple[int, bool]:
    nz = sum(1 for row in basis.rows if any(row))
    even = all(x % 2 == 0 for row in basis.rows for x in row)
    return nz, even


def random_unimodular(r: int, rng: random.Random, steps: int | None = None) -> IntMatrix:
    """Product of random elementary column operations and sign flips."""
    m = [[int(i == j) for j in range(r)] for i in range(r)]
    for _ in range(steps if steps is not None else 4 * r):
        if r > 1:
            i, j = rng.sample(range(r), 2)
            c = rng.choice((-2, -1, 1, 2))
            for row in m:
                row[j] += c * row[i]
        k = rng.randrange(r)
        if rng.getrandbits(1):
            for row in m:
                row[k] = -row[k]
    return IntMatrix(m, r)


def trichotomy_classify(basis: IntMatrix, d: int, rng: random.Random | None = None,
                        resamples: int = 20) -> TrichotomyReport:
    """Classify the lattice spanned by ``basis`` into the first property that holds.

    The row-support count and evenness are recomputed on ``resamples``
    random unimodular changes of basis; a disagreement raises AssertionError.
    """
    r = basis.ncols
    if r == 0 or rank(basis) < r:
        raise RankDeficientError("sublattice basis must have full column rank")
    nz, even = _support(basis)
    if rng is not None:
        for _ in range(resamples):
            other = _support(basis @ random_unimodular(r, rng))
            if other != (nz, even):
                raise AssertionError(f"row support changed under basis change: {(nz, even)} -> {other}")
    det_sq = bareiss_det(gram(basis).rows)
    if nz >= d:
        prop = 1
    elif even and 4 * nz >= d:
        prop = 2
    elif det_sq >= d ** r:
        prop = 3
    else:
        prop = 0
    return TrichotomyReport(prop, nz, even, det_sq, r, d, resamples if rng is not None else 0)


def random_sublattice(lat: Lattice, r: int, rng: random.Random, box: int = 3) -> IntMatrix:
    """Basis ``B C`` for a random full-rank coefficient matrix ``C`` with entries in ``[-box, box]``."""
    if r > lat.rank:
        raise ValueError("sublattice rank exceeds lattice rank")
    while True:
        c = IntMatrix(([rng.randint(-box, box) for _ in range(r)] for _ in range(lat.rank)), r)
        sub = lat.basis @ c
        if rank(sub) == r:
            return sub


# ---------------------------------------------------------------------------
# tensor lower bound


def sublattice_factor(X: IntMatrix, B1: IntMatrix, B2: IntMatrix) -> tuple[IntMatrix, IntMatrix]:
    """Rewrite ``B1 X B2^T`` as ``B1' B2'^T`` with both factors of full column rank.

    With ``X = [H 0] U`` (``U`` unimodular), ``B1' = B1 H`` and ``B2'`` keeps
    the first ``rank(X)`` columns of ``B2 U^T``.
    """
    if X.is_zero():
        raise ValueError("X must be nonzero")
    if (X.nrows, X.ncols) != (B1.ncols, B2.ncols):
        raise ValueError("X must be rank(B1) x rank(B2)")
    H, U = hnf_decompose(X)
    r = H.ncols
    b2u = B2 @ U.T
    return B1 @ H, b2u.select_columns(range(r))


@dataclass(frozen=True)
class TensorBoundReport:
    d: int
    tensor_lambda1_sq: int
    l2_lambda1_sq: int
    tensor_vector: tuple[int, ...]
    nodes: int

    @property
    def holds(self) -> bool:
        return self.tensor_lambda1_sq >= self.d * self.l2_lambda1_sq


def verify_tensor_lower_bound(l1: Lattice, d: int, l2: Lattice, ceiling: int = DEFAULT_CEILING) -> TensorBoundReport:
    """Exact ``lambda_1(L1 (x) L2)^2`` against ``d * lambda_1(L2)^2``."""
    t = tensor(l1, l2)
    res = lambda1_exact(t, ceiling)
    other = lambda1_exact(l2, ceiling)
    return TensorBoundReport(d, res.norm_sq, other.norm_sq, res.vector, res.nodes)


@dataclass(frozen=True)
class CaseReport:
    case: int          # trichotomy property of L1', 0 if none
    norm_sq: int       # ||v||^2
    l2_lambda1_sq: int  # lambda_1(L2')^2
    d: int
    trace_det: TraceDetReport | None = None

    @property
    def holds(self) -> bool:
        if self.case == 0:
            return False
        if self.case == 3 and not self.trace_det.holds:
            return False
        return self.norm_sq >= self.d * self.l2_lambda1_sq


def tensor_case_check(X: IntMatrix, B1: IntMatrix, B2: IntMatrix, d: int,
                     ceiling: int = DEFAULT_CEILING) -> CaseReport:
    """Factor ``v = B1 X B2^T``, classify ``L(B1')`` and check the matching norm bound.

    Every case ends in ``||v||^2 >= d * lambda_1(L(B2'))^2``; for property 3
    the trace/determinant inequality on ``(B1', B2')`` is checked too.
    """
    b1p, b2p = sublattice_factor(X, B1, B2)
    v = b1p @ b2p.T
    norm_sq = sum(x * x for row in v.rows for x in row)
    rep = trichotomy_classify(b1p, d)
    lam = lambda1_exact(Lattice(b2p, check=False), ceiling).norm_sq
    td = trace_det_bound(b1p, b2p) if rep.prop == 3 else None
    return CaseReport(rep.prop, norm_sq, lam, d, td)


def flatten(m: IntMatrix) -> tuple[int, ...]:
    return tuple(x for row in m.rows for x in row)


def matrix_from_flat(flat: Sequence[int], n1: int, n2: int) -> IntMatrix:
    return IntMatrix((flat[i * n2:(i + 1) * n2] for i in range(n1)), n2)
