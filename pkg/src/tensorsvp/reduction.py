"""Exact Set Cover -> CVP -> intermediate lattice -> sparsified SVP instance -> tensor power.

Randomness comes from one integer seed.  Each stage draws from its own
:class:`random.Random` stream seeded with the string ``"<seed>:<stage>"``
(Python hashes string seeds with SHA-512, so streams are stable across runs
and platforms).  Stages: ``setcover``, ``shift``, ``hyperplane``.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from math import comb
from typing import Sequence

from .errors import ParameterError, ResourceLimitError
from .gf2 import BchParams, BitMatrix, ShiftSample, bch_parity, kernel_mod2_lattice, sample_codeword_shift
from .lattice import Lattice, congruence_sublattice, tensor_power, DEFAULT_TENSOR_CEILING
from .linalg import IntMatrix, integer_kernel, solve_diophantine
from .svp import GapInstance

CERTIFY_LIMIT = 2_000_000
PRIME_SEARCH_LIMIT = 10 ** 12


def stage_rng(seed: int, stage: str) -> random.Random:
    return random.Random(f"{seed}:{stage}")


def _is_power_of_two(x: int) -> bool:
    return x >= 1 and not x & (x - 1)


# ---------------------------------------------------------------------------
# Set Cover


@dataclass(frozen=True)
class SetCoverInstance:
    """Sets over the universe ``{0, ..., universe_size-1}`` (1-indexed in files)."""

    universe_size: int
    sets: tuple[frozenset, ...]
    d: int
    eta: Fraction
    planted: tuple[int, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "sets", tuple(frozenset(s) for s in self.sets))
        object.__setattr__(self, "eta", Fraction(self.eta))
        if self.universe_size < 1 or not self.sets:
            raise ParameterError("universe and collection must be nonempty", "setcover")
        for s in self.sets:
            if not s:
                raise ParameterError("empty set in collection", "setcover")
            if min(s) < 0 or max(s) >= self.universe_size:
                raise ParameterError("set element outside the universe", "setcover")
        ed = self.eta * self.d
        if self.d < 1 or ed.denominator != 1 or ed <= 0:
            raise ParameterError(f"eta*d = {ed} must be a positive integer", "setcover")

    @property
    def num_sets(self) -> int:
        return len(self.sets)

    @property
    def cover_size(self) -> int:
        """The YES-case exact cover size ``eta * d``."""
        return int(self.eta * self.d)

    def matrix(self) -> IntMatrix:
        """``n'' x n'`` 0/1 matrix whose columns are the characteristic vectors."""
        return IntMatrix(
            ([1 if e in s else 0 for s in self.sets] for e in range(self.universe_size)), self.num_sets
        )

    def _masks(self) -> list[int]:
        return [sum(1 << e for e in s) for s in self.sets]

    def covers(self, idx: Sequence[int]) -> bool:
        m = self._masks()
        acc = 0
        for i in idx:
            acc |= m[i]
        return acc == (1 << self.universe_size) - 1

    def covers_exactly(self, idx: Sequence[int]) -> bool:
        return sorted(e for i in idx for e in self.sets[i]) == list(range(self.universe_size))


def min_cover_size(inst: SetCoverInstance, below: int) -> int | None:
    """Smallest cover size smaller than ``below``, or None if there is none."""
    masks = inst._masks()
    full = (1 << inst.universe_size) - 1
    for j in range(1, below):
        for sub in combinations(masks, j):
            acc = 0
            for m in sub:
                acc |= m
            if acc == full:
                return j
    return None


def find_exact_cover(inst: SetCoverInstance, size: int) -> tuple[int, ...] | None:
    """Indices of ``size`` sets covering every element exactly once, if any."""
    masks = inst._masks()
    full = (1 << inst.universe_size) - 1
    for idx in combinations(range(inst.num_sets), size):
        acc, total = 0, 0
        for i in idx:
            acc |= masks[i]
            total += len(inst.sets[i])
        if acc == full and total == inst.universe_size:
            return idx
    return None


def certification_cost(num_sets: int, d: int) -> int:
    return sum(comb(num_sets, j) for j in range(1, d))


def certify_no(inst: SetCoverInstance) -> bool:
    """Exhaustively confirm that no fewer than ``d`` sets cover the universe."""
    cost = certification_cost(inst.num_sets, inst.d)
    if cost > CERTIFY_LIMIT:
        raise ResourceLimitError("NO certification subsets", cost, CERTIFY_LIMIT)
    return min_cover_size(inst, inst.d) is None


class Kind(enum.Enum):
    YES = "YES"
    NO = "NO"


def _random_set(rng: random.Random, universe: int, max_size: int) -> frozenset:
    k = rng.randint(1, max_size)
    return frozenset(rng.sample(range(universe), k))


def gen_setcover(kind, universe_size: int, num_sets: int, d: int, eta, rng: random.Random,
                 max_set_size: int | None = None, max_tries: int = 1000) -> SetCoverInstance:
    """Planted YES instances and exhaustively certified NO instances."""
    kind = Kind(kind) if not isinstance(kind, Kind) else kind
    eta = Fraction(eta)
    c = eta * d
    if c.denominator != 1 or c <= 0:
        raise ParameterError(f"eta*d = {c} must be a positive integer", "setcover")
    c = int(c)
    if kind is Kind.YES:
        if universe_size < c or num_sets < c:
            raise ParameterError("YES instance needs universe and collection of size >= eta*d", "setcover")
        elems = list(range(universe_size))
        rng.shuffle(elems)
        cuts = sorted(rng.sample(range(1, universe_size), c - 1))
        bounds = [0] + cuts + [universe_size]
        blocks = [frozenset(elems[a:b]) for a, b in zip(bounds, bounds[1:])]
        ms = max_set_size or max(1, universe_size // 2)
        decoys = [_random_set(rng, universe_size, ms) for _ in range(num_sets - c)]
        order = list(range(num_sets))
        rng.shuffle(order)
        sets = [None] * num_sets
        for pos, item in zip(order, blocks + decoys):
            sets[pos] = item
        planted = tuple(sorted(order[:c]))
        return SetCoverInstance(universe_size, tuple(sets), d, eta, planted)

    cost = certification_cost(num_sets, d)
    if cost > CERTIFY_LIMIT:
        raise ResourceLimitError("NO certification subsets", cost, CERTIFY_LIMIT)
    ms = max_set_size or max(1, (universe_size - 1) // max(1, d - 1))
    full = frozenset(range(universe_size))
    for _ in range(max_tries):
        sets = tuple(_random_set(rng, universe_size, ms) for _ in range(num_sets))
        if frozenset().union(*sets) != full:
            continue
        inst = SetCoverInstance(universe_size, sets, d, eta)
        if certify_no(inst):
            return inst
    raise ParameterError(f"no certified NO instance found in {max_tries} tries", "setcover")


# ---------------------------------------------------------------------------
# parameters


@dataclass(frozen=True)
class ReductionParams:
    """Pipeline constants.

    ``mode="paper"`` pins ``eta = 1/128`` and ``N = d^(2/eta)`` (only the
    count bounds are computable there).  ``mode="desk"`` leaves ``N`` free.
    """

    d: int
    eta: Fraction
    N: int
    k: int = 1
    seed: int = 0
    mode: str = "desk"
    q_override: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "eta", Fraction(self.eta))
        d, eta, N = self.d, self.eta, self.N
        if not _is_power_of_two(d) or d < 2:
            raise ParameterError(f"d={d} must be a power of two >= 2", "params")
        if eta.numerator != 1 or not _is_power_of_two(eta.denominator) or eta.denominator < 2:
            raise ParameterError(f"eta={eta} must be a negative power of two", "params")
        if (eta * d).denominator != 1:
            raise ParameterError(f"eta*d = {eta * d} must be an integer", "params")
        if self.r_fraction.denominator != 1:
            raise ParameterError(f"r = (3/4+eta)d = {self.r_fraction} must be an integer", "params")
        if self.k < 1:
            raise ParameterError(f"k={self.k} must be >= 1", "params")
        if not 0 <= self.seed < 2 ** 64:
            raise ParameterError("seed must be a 64-bit unsigned integer", "params")
        if not _is_power_of_two(N):
            raise ParameterError(f"N={N} must be a power of two", "params")
        if self.mode == "paper":
            if eta != Fraction(1, 128):
                raise ParameterError("paper mode fixes eta = 1/128", "params")
            if N != d ** int(2 / eta):
                raise ParameterError("paper mode fixes N = d^(2/eta)", "params")
            if self.gamma_sq >= 1:
                raise ParameterError("gamma^2 must be < 1 in paper mode", "params")
        elif self.mode == "desk":
            if self.r > N:
                raise ParameterError(f"r={self.r} exceeds N={N}", "params")
            if self.h >= N:
                raise ParameterError(f"h={self.h} must be smaller than N={N}", "params")
        else:
            raise ParameterError(f"unknown mode {self.mode!r}", "params")

    @property
    def r_fraction(self) -> Fraction:
        return (Fraction(3, 4) + self.eta) * self.d

    @property
    def r(self) -> int:
        return int(self.r_fraction)

    @property
    def h(self) -> int:
        return (self.d // 2) * (self.N.bit_length() - 1)

    @property
    def cover_size(self) -> int:
        return int(self.eta * self.d)

    @property
    def good_norm_sq(self) -> int:
        """Squared norm ``4*eta*d + r`` of the good vectors."""
        return 4 * self.cover_size + self.r

    @property
    def gamma_sq(self) -> Fraction:
        """``gamma^2 = (4*eta*d + r)/d``, which equals ``3/4 + 5*eta``."""
        return Fraction(self.good_norm_sq, self.d)


# ---------------------------------------------------------------------------
# step 1: CVP


@dataclass(frozen=True)
class CvpInstance:
    basis: IntMatrix  # n' x (n' - rank S), may have no columns
    t: tuple[int, ...]


def cvp_step(inst: SetCoverInstance) -> CvpInstance | None:
    """Kernel basis of ``S`` and a target ``t`` with ``S t = -1``; None if no such ``t``."""
    S = inst.matrix()
    t = solve_diophantine(S, [-1] * inst.universe_size)
    if t is None:
        return None
    return CvpInstance(integer_kernel(S), t)


def cover_witness(cvp: CvpInstance, cover_idx: Sequence[int]):
    """Coefficients ``y`` with ``B_CVP y - t`` equal to the cover's indicator vector."""
    n = len(cvp.t)
    ind = [1 if i in set(cover_idx) else 0 for i in range(n)]
    z = [a + b for a, b in zip(ind, cvp.t)]
    if cvp.basis.ncols == 0:
        return () if not any(z) else None
    return solve_diophantine(cvp.basis, z)


# ---------------------------------------------------------------------------
# step 2: intermediate lattice


def assemble_intermediate(b_cvp: IntMatrix, t: Sequence[int], b_bch: IntMatrix, s: Sequence[int]) -> Lattice:
    """Block basis ``[[2 B_CVP, 0, 2t], [0, B_BCH, s]]``."""
    n1, N = b_cvp.nrows, b_bch.nrows
    if len(t) != n1 or len(s) != N:
        raise ParameterError("dimension mismatch between blocks", "assemble")
    cols = [tuple(2 * x for x in c) + (0,) * N for c in b_cvp.columns()]
    cols += [(0,) * n1 + tuple(c) for c in b_bch.columns()]
    cols.append(tuple(2 * x for x in t) + tuple(s))
    return Lattice.from_columns(cols, n1 + N)


def good_vector_witness(b_cvp: IntMatrix, t, y, b_bch: IntMatrix, s, x, params: ReductionParams):
    """``B_int (y, x, -1) = (2(B_CVP y - t), B_BCH x - s)``, checked for the good-vector shape."""
    top = [2 * (a - b) for a, b in zip(b_cvp.apply(y) if b_cvp.ncols else [0] * len(t), t)]
    bot = [a - b for a, b in zip(b_bch.apply(x), s)]
    v = tuple(top + bot)
    if any(c not in (0, 1, 2) for c in v):
        raise ValueError("good vector has a coordinate outside {0, 1, 2}")
    if 1 not in v:
        raise ValueError("good vector has no coordinate equal to 1")
    ns = sum(c * c for c in v)
    if ns != params.good_norm_sq:
        raise ValueError(f"good vector has squared norm {ns}, expected 4*eta*d + r = {params.good_norm_sq}")
    return v


class Clause(enum.Enum):
    ANNOYING = 0
    MANY_NONZEROS = 1   # at least d nonzero coordinates
    EVEN_SPREAD = 2     # all even, at least d/4 nonzero
    EVEN_LONG = 3       # all even, norm at least d


def annoying_check(v: Sequence[int], d: int) -> Clause:
    """First NO-case clause that ``v`` satisfies, or ``Clause.ANNOYING``."""
    nnz = sum(1 for x in v if x)
    if nnz >= d:
        return Clause.MANY_NONZEROS
    even = all(x % 2 == 0 for x in v)
    if even and 4 * nnz >= d:
        return Clause.EVEN_SPREAD
    if even and sum(x * x for x in v) >= d * d:
        return Clause.EVEN_LONG
    return Clause.ANNOYING


# ---------------------------------------------------------------------------
# step 3: sparsification


def count_bounds(params: ReductionParams, num_sets: int) -> tuple[int, int]:
    """``G = floor(N^((1/4+eta)d) / (100 d^d))`` and ``A = d^(d/4) C(N+n', d/4)``."""
    d, N = params.d, params.N
    e = (Fraction(1, 4) + params.eta) * d
    if e.denominator != 1 or d % 4:
        raise ParameterError("(1/4+eta)d and d/4 must be integers", "counts")
    G = N ** int(e) // (100 * d ** d)
    A = d ** (d // 4) * comb(N + num_sets, d // 4)
    return G, A


def is_prime(n: int) -> bool:
    """Trial division (exact)."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    if n > PRIME_SEARCH_LIMIT:
        raise ResourceLimitError("trial-division primality", n, PRIME_SEARCH_LIMIT)
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def choose_prime(G: int, A: int, q_override: int | None = None) -> int:
    """Override if given, else the smallest prime in ``[100A, G/100]``."""
    if q_override is not None:
        if not is_prime(q_override):
            raise ParameterError(f"q override {q_override} is not prime", "sparsify")
        return q_override
    lo, hi = 100 * A, G // 100
    if lo > hi:
        raise ParameterError(f"prime interval [100A, G/100] = [{lo}, {hi}] is empty; "
                             "supply a q override", "sparsify")
    q = max(lo, 2)
    while q <= hi:
        if is_prime(q):
            return q
        q += 1
    raise ParameterError(f"no prime in [{lo}, {hi}]", "sparsify")


def sparsify(b_int: Lattice, G: int, A: int, rng: random.Random, q_override: int | None = None):
    """Sublattice cut by a uniformly random hyperplane mod a prime ``q``.

    Returns ``(lattice, q, w)``.
    """
    q = choose_prime(G, A, q_override)
    w = tuple(rng.randrange(q) for _ in range(b_int.ambient_dim))
    return congruence_sublattice(b_int, w, q), q, w


# ---------------------------------------------------------------------------
# full pipeline


@dataclass
class PipelineCertificate:
    seed: int
    q: int | None
    G: int
    A: int
    w: tuple[int, ...]
    s: tuple[int, ...]
    t: tuple[int, ...]
    codeword: tuple[int, ...] = ()
    flips: tuple[int, ...] = ()
    degenerate: bool = False


@dataclass
class PipelineResult:
    instance: GapInstance
    params: ReductionParams
    certificate: PipelineCertificate
    base: Lattice                 # the k = 1 lattice
    intermediate: Lattice | None = None
    cvp: CvpInstance | None = None
    parity: BitMatrix | None = None
    bch_lattice: Lattice | None = None
    shift: ShiftSample | None = None
    good_vector: tuple[int, ...] | None = None


def degenerate_no_instance(d: int) -> Lattice:
    """A fixed NO instance: every nonzero vector of ``dZ`` is even with norm >= d."""
    return Lattice(IntMatrix([[d]]))


def run_pipeline(inst: SetCoverInstance, params: ReductionParams,
                 tensor_ceiling: int = DEFAULT_TENSOR_CEILING) -> PipelineResult:
    """All three steps followed by the k-fold tensor power.

    The output instance has squared threshold ``d^k`` and squared gap
    ``gamma^(2k)``: YES bases should satisfy ``lambda_1^2 <= gamma^(2k) d^k``,
    NO bases ``lambda_1^2 >= d^k``.
    """
    if params.mode != "desk":
        raise ParameterError("lattices are only built in desk mode", "pipeline")
    if inst.d != params.d or inst.eta != params.eta:
        raise ParameterError("instance (d, eta) disagree with parameters", "pipeline")
    d = params.d
    G, A = count_bounds(params, inst.num_sets)
    meta = {"d": d, "k": params.k, "gamma_sq": params.gamma_sq, "seed": params.seed}

    cvp = cvp_step(inst)
    if cvp is None:
        base = degenerate_no_instance(d)
        cert = PipelineCertificate(params.seed, None, G, A, (), (), (), degenerate=True)
        final = tensor_power(base, params.k, tensor_ceiling)
        gap = GapInstance(final.basis, Fraction(d) ** params.k, 2, params.gamma_sq ** params.k,
                          dict(meta, degenerate=True))
        return PipelineResult(gap, params, cert, base)

    P = bch_parity(BchParams(params.N, d))
    b_bch = kernel_mod2_lattice(P)
    shift = sample_codeword_shift(P, params.r, stage_rng(params.seed, "shift"))
    b_int = assemble_intermediate(cvp.basis, cvp.t, b_bch.basis, shift.s)
    base, q, w = sparsify(b_int, G, A, stage_rng(params.seed, "hyperplane"), params.q_override)
    final = tensor_power(base, params.k, tensor_ceiling)
    cert = PipelineCertificate(params.seed, q, G, A, w, shift.s, cvp.t, shift.codeword, shift.flips)

    good = None
    if inst.planted is not None or find_exact_cover(inst, inst.cover_size) is not None:
        cover = inst.planted or find_exact_cover(inst, inst.cover_size)
        y = cover_witness(cvp, cover)
        z_bch = [a + (1 if i in shift.flips else 0) for i, a in enumerate(shift.s)]
        x = b_bch.coefficients(z_bch)
        if y is not None and x is not None:
            good = good_vector_witness(cvp.basis, cvp.t, y, b_bch.basis, shift.s, x, params)

    gap = GapInstance(final.basis, Fraction(d) ** params.k, 2, params.gamma_sq ** params.k, meta)
    return PipelineResult(gap, params, cert, base, b_int, cvp, P, b_bch, shift, good)


def cvp_sparsity_violations(inst: SetCoverInstance, cvp: CvpInstance, box: int = 3, j0_max: int = 3) -> int:
    """Count vectors ``B_CVP y + j0 t`` (``|y_i| <= box``, ``0 < |j0| <= j0_max``) with fewer than d nonzeros.

    Zero for a NO instance.
    """
    cols = cvp.basis.columns()
    n = len(cvp.t)
    bad = 0
    for y in product(range(-box, box + 1), repeat=len(cols)):
        z = [sum(y[j] * cols[j][i] for j in range(len(cols))) for i in range(n)]
        for j0 in range(-j0_max, j0_max + 1):
            if j0 == 0:
                continue
            nnz = sum(1 for a, b in zip(z, cvp.t) if a + j0 * b)
            if nnz < inst.d:
                bad += 1
    return bad
