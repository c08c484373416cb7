"""Shortest vectors at desk scale.

LLL reduction runs in exact integer arithmetic (the fraction-free variant
that keeps the scaled Gram-Schmidt data ``d_i`` and ``lambda_ij`` as
integers).  Enumeration is Schnorr-Euchner depth-first search over the
reduced basis.  Pruning uses doubles with a widened radius; every candidate
that reaches a leaf is re-checked with exact integer norms, so answers never
depend on rounding.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .errors import RankDeficientError, ResourceLimitError
from .linalg import IntMatrix

DEFAULT_CEILING = 24
DEFAULT_DELTA = Fraction(99, 100)

# relative / absolute widening of the float pruning radius
_REL_SLACK = 1e-7
_ABS_SLACK = 1e-6


def _dot(u, v):
    return sum(a * b for a, b in zip(u, v))


# ---------------------------------------------------------------------------
# integral LLL


class _IntegralGSO:
    """Scaled Gram-Schmidt data of a list of vectors (1-indexed internally)."""

    def __init__(self, vecs):
        n = len(vecs)
        self.n = n
        self.b = [None] + [list(v) for v in vecs]
        self.d = [1] + [0] * n
        self.lam = [[0] * (n + 1) for _ in range(n + 1)]
        self.kmax = 0

    def extend(self, k):
        b, d, lam = self.b, self.d, self.lam
        for j in range(1, k + 1):
            u = _dot(b[k], b[j])
            for i in range(1, j):
                u = (d[i] * u - lam[k][i] * lam[j][i]) // d[i - 1]
            if j < k:
                lam[k][j] = u
            else:
                if u == 0:
                    raise RankDeficientError("vectors are linearly dependent")
                d[k] = u
        self.kmax = k

    def float_data(self):
        """``(mu, r)`` as floats: ``r[i] = |b*_i|^2``, ``mu[i][j]`` for ``j < i``."""
        n, d, lam = self.n, self.d, self.lam
        r = [Fraction(d[i + 1], d[i]).__float__() for i in range(n)]
        mu = [[Fraction(lam[i + 1][j + 1], d[j + 1]).__float__() for j in range(i)] for i in range(n)]
        return mu, r


def _lll_inplace(g: _IntegralGSO, num: int, den: int) -> None:
    n = g.n
    if n == 0:
        return
    b, d, lam = g.b, g.d, g.lam
    g.extend(1)

    def redi(k, l):
        if 2 * abs(lam[k][l]) > d[l]:
            q = (2 * lam[k][l] + d[l]) // (2 * d[l])
            bl = b[l]
            b[k] = [x - q * y for x, y in zip(b[k], bl)]
            lam[k][l] -= q * d[l]
            lk, ll = lam[k], lam[l]
            for i in range(1, l):
                lk[i] -= q * ll[i]

    def swapi(k):
        b[k], b[k - 1] = b[k - 1], b[k]
        lk, lk1 = lam[k], lam[k - 1]
        for j in range(1, k - 1):
            lk[j], lk1[j] = lk1[j], lk[j]
        lm = lk[k - 1]
        bb = (d[k - 2] * d[k] + lm * lm) // d[k - 1]
        for i in range(k + 1, g.kmax + 1):
            li = lam[i]
            t = li[k]
            li[k] = (d[k] * li[k - 1] - lm * t) // d[k - 1]
            li[k - 1] = (bb * t + lm * li[k]) // d[k]
        d[k - 1] = bb

    k = 2
    while k <= n:
        if k > g.kmax:
            g.extend(k)
        while True:
            redi(k, k - 1)
            if den * d[k] * d[k - 2] < num * d[k - 1] * d[k - 1] - den * lam[k][k - 1] ** 2:
                swapi(k)
                k = max(2, k - 1)
            else:
                break
        for l in range(k - 2, 0, -1):
            redi(k, l)
        k += 1


def lll_columns(cols: Sequence[Sequence[int]], delta: Fraction = DEFAULT_DELTA) -> list[list[int]]:
    """LLL-reduce a list of linearly independent integer vectors."""
    delta = Fraction(delta)
    if not Fraction(1, 4) < delta <= 1:
        raise ValueError("delta must lie in (1/4, 1]")
    g = _IntegralGSO(cols)
    _lll_inplace(g, delta.numerator, delta.denominator)
    return g.b[1:]


def lll_reduce(lattice, delta: Fraction = DEFAULT_DELTA):
    """Return an LLL-reduced basis of the same lattice (a new Lattice)."""
    from .lattice import Lattice

    cols = lll_columns(lattice.columns(), delta)
    return Lattice(IntMatrix.from_columns(cols, nrows=lattice.ambient_dim), check=False)


def is_lll_reduced(cols, delta: Fraction = DEFAULT_DELTA) -> bool:
    """Exact check of size reduction and the Lovasz condition."""
    g = _IntegralGSO(cols)
    for k in range(1, g.n + 1):
        g.extend(k)
    d, lam = g.d, g.lam
    delta = Fraction(delta)
    for k in range(2, g.n + 1):
        for j in range(1, k):
            if 2 * abs(lam[k][j]) > d[j]:
                return False
        lhs = Fraction(d[k] * d[k - 2])
        rhs = delta * d[k - 1] ** 2 - lam[k][k - 1] ** 2
        if lhs < rhs:
            return False
    return True


# ---------------------------------------------------------------------------
# enumeration


def _enumerate(mu, r, bound: float, leaf: Callable[[list[int]], float | None]) -> int:
    """Schnorr-Euchner walk over coefficient vectors with partial norm <= bound.

    Only one vector of each +/- pair is visited (the highest nonzero
    coefficient is positive) and the zero vector is skipped.  ``leaf`` may
    return a new (smaller) float bound.  Returns the node count.
    """
    n = len(r)
    slack = lambda b: b * (1.0 + _REL_SLACK) + _ABS_SLACK
    B = slack(bound)
    x = [0] * n
    c = [0.0] * n
    l = [0.0] * (n + 1)
    dx = [0] * n
    ddx = [0] * n
    top = [True] * (n + 1)  # top[k]: x[j] == 0 for every j >= k
    nodes = 0
    k = n - 1
    while True:
        diff = x[k] - c[k]
        lk = l[k + 1] + diff * diff * r[k]
        nodes += 1
        if lk <= B:
            if k == 0:
                if not (top[1] and x[0] == 0):
                    nb = leaf(x)
                    if nb is not None:
                        B = slack(nb)
            else:
                l[k] = lk
                top[k] = top[k + 1] and x[k] == 0
                k -= 1
                cc = 0.0
                for j in range(k + 1, n):
                    if x[j]:
                        cc -= x[j] * mu[j][k]
                c[k] = cc
                if top[k + 1]:
                    x[k] = 0
                else:
                    xi = round(cc)
                    x[k] = xi
                    dx[k] = ddx[k] = 1 if cc >= xi else -1
                continue
        else:
            k += 1
            if k == n:
                return nodes
        if top[k + 1]:
            x[k] += 1
        else:
            x[k] += dx[k]
            ddx[k] = -ddx[k]
            dx[k] = ddx[k] - dx[k]


@dataclass(frozen=True)
class SvpResult:
    vector: tuple[int, ...]
    norm_sq: int
    nodes: int = 0


def _check_ceiling(lattice, ceiling):
    if lattice.rank > ceiling:
        raise ResourceLimitError("enumeration rank", lattice.rank, ceiling)
    if lattice.rank == 0:
        raise ValueError("the zero lattice has no nonzero vectors")


def _prepare(lattice):
    cols = lll_columns(lattice.columns())
    g = _IntegralGSO(cols)
    for k in range(1, g.n + 1):
        g.extend(k)
    mu, r = g.float_data()
    return cols, mu, r


def lambda1_exact(lattice, ceiling: int = DEFAULT_CEILING) -> SvpResult:
    """Exact squared Euclidean length of a shortest nonzero vector."""
    _check_ceiling(lattice, ceiling)
    cols, mu, r = _prepare(lattice)
    n = len(cols)
    ambient = lattice.ambient_dim
    best_vec = min((tuple(c) for c in cols), key=lambda v: _dot(v, v))
    best = [_dot(best_vec, best_vec), best_vec]

    def leaf(x):
        v = [0] * ambient
        for i in range(n):
            xi = x[i]
            if xi:
                ci = cols[i]
                for j in range(ambient):
                    v[j] += xi * ci[j]
        ns = _dot(v, v)
        if ns < best[0]:
            best[0] = ns
            best[1] = tuple(v)
            return float(ns)
        return None

    nodes = _enumerate(mu, r, float(best[0]), leaf)
    vec = best[1]
    # canonical sign: first nonzero coordinate positive
    lead = next(a for a in vec if a)
    if lead < 0:
        vec = tuple(-a for a in vec)
    return SvpResult(vec, best[0], nodes)


@dataclass
class BallEnumeration:
    """Lattice vectors (one per +/- pair) with squared norm within a bound."""

    bound: int
    strict: bool
    vectors: list[tuple[int, ...]] = field(default_factory=list)
    nodes: int = 0


def enumerate_ball(lattice, bound: int, strict: bool = False, ceiling: int = DEFAULT_CEILING,
                   max_points: int | None = None) -> BallEnumeration:
    """All nonzero lattice vectors ``v`` (up to sign) with ``|v|^2 <= bound``.

    With ``strict=True`` the condition is ``|v|^2 < bound``.
    """
    _check_ceiling(lattice, ceiling)
    cols, mu, r = _prepare(lattice)
    n = len(cols)
    ambient = lattice.ambient_dim
    out = BallEnumeration(bound, strict)

    def leaf(x):
        v = [0] * ambient
        for i in range(n):
            xi = x[i]
            if xi:
                ci = cols[i]
                for j in range(ambient):
                    v[j] += xi * ci[j]
        ns = _dot(v, v)
        if ns < bound or (ns == bound and not strict):
            out.vectors.append(tuple(v))
            if max_points is not None and len(out.vectors) > max_points:
                raise ResourceLimitError("ball enumeration points", len(out.vectors), max_points)
        return None

    out.nodes = _enumerate(mu, r, float(bound), leaf)
    return out


# ---------------------------------------------------------------------------
# l_p norms


def _iroot_ceil(a: int, p: int) -> int:
    """Smallest integer ``x >= 0`` with ``x**p >= a``."""
    if a <= 0:
        return 0
    x = int(round(a ** (1.0 / p))) if a.bit_length() < 1000 else 1 << (a.bit_length() // p + 1)
    while x ** p < a:
        x += 1
    while x > 0 and (x - 1) ** p >= a:
        x -= 1
    return x


def _lp_value(v, p):
    from .lattice import lp_norm

    return lp_norm(v, p)


def _l2_radius_for(value: int, p, n: int) -> int:
    """Integer bound on |v|_2^2 for every v whose l_p value is at most ``value``."""
    if p == math.inf:
        return n * value * value
    if p == 1:
        return value * value
    if p == 2:
        return value
    # |v|_2^2 <= n^((p-2)/p) |v|_p^2, so (|v|_2^2)^p <= n^(p-2) * value^2
    return _iroot_ceil(n ** (p - 2) * value * value, p)


@dataclass(frozen=True)
class LpResult:
    vector: tuple[int, ...]
    value: int  # sum |x_i|^p for finite p, max |x_i| for p = inf
    p: float
    nodes: int = 0


def lambda1_lp(lattice, p, ceiling: int = DEFAULT_CEILING) -> LpResult:
    """Exact minimum l_p norm (as a p-th power for finite p) over nonzero vectors."""
    _check_ceiling(lattice, ceiling)
    if p != math.inf and (int(p) != p or p < 1):
        raise ValueError("p must be a positive integer or math.inf")
    if p != math.inf:
        p = int(p)
    l2 = lambda1_exact(lattice, ceiling)
    if p == 2:
        return LpResult(l2.vector, l2.norm_sq, 2, l2.nodes)
    cols, mu, r = _prepare(lattice)
    n = lattice.ambient_dim
    cands = [l2.vector] + [tuple(c) for c in cols]
    best_vec = min(cands, key=lambda v: _lp_value(v, p))
    best = [_lp_value(best_vec, p), best_vec]

    def leaf(x):
        v = [0] * n
        for i, xi in enumerate(x):
            if xi:
                for j, cij in enumerate(cols[i]):
                    v[j] += xi * cij
        val = _lp_value(v, p)
        if val < best[0]:
            best[0] = val
            best[1] = tuple(v)
            return float(_l2_radius_for(val, p, n))
        return None

    nodes = _enumerate(mu, r, float(_l2_radius_for(best[0], p, n)), leaf)
    vec = best[1]
    if next(a for a in vec if a) < 0:
        vec = tuple(-a for a in vec)
    return LpResult(vec, best[0], p, nodes + l2.nodes)


# ---------------------------------------------------------------------------
# Minkowski and GapSVP


@dataclass(frozen=True)
class MinkowskiReport:
    rank: int
    det_sq: int
    lambda1_sq: int
    lhs: int  # det^2 * r^r
    rhs: int  # (lambda1^2)^r

    @property
    def holds(self) -> bool:
        return self.lhs >= self.rhs


def minkowski_check(lattice, ceiling: int = DEFAULT_CEILING) -> MinkowskiReport:
    """Compare ``det(L)^2 * r^r`` against ``lambda_1(L)^(2r)`` exactly."""
    res = lambda1_exact(lattice, ceiling)
    r = lattice.rank
    ds = lattice.det_gram()
    return MinkowskiReport(r, ds, res.norm_sq, ds * r ** r, res.norm_sq ** r)


class GapVerdict(enum.Enum):
    YES = "YES"
    NO = "NO"
    INDETERMINATE = "INDETERMINATE"


@dataclass(frozen=True)
class GapInstance:
    """A GapSVP instance ``(B, s)`` with approximation factor ``gamma``.

    For finite ``p`` both ``threshold`` and ``gamma`` hold p-th powers
    (``s**p`` and ``gamma**p``) so every comparison stays rational.  For
    ``p = inf`` they hold ``s`` and ``gamma`` themselves.
    """

    basis: IntMatrix
    threshold: Fraction
    p: float = 2
    gamma: Fraction = Fraction(1)
    metadata: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "threshold", Fraction(self.threshold))
        object.__setattr__(self, "gamma", Fraction(self.gamma))
        if self.threshold <= 0:
            raise ValueError("threshold must be positive")

    @classmethod
    def from_norms(cls, basis, s, gamma, p=2, metadata=None):
        s, gamma = Fraction(s), Fraction(gamma)
        if p != math.inf:
            s, gamma = s ** int(p), gamma ** int(p)
        return cls(basis, s, p, gamma, metadata or {})


def decide_gap(inst: GapInstance, ceiling: int = DEFAULT_CEILING) -> GapVerdict:
    """YES if lambda_1 <= gamma*s, NO if lambda_1 > s, else INDETERMINATE."""
    from .lattice import Lattice

    lat = Lattice(inst.basis)
    value = lambda1_lp(lat, inst.p, ceiling).value
    if value <= inst.gamma * inst.threshold:
        return GapVerdict.YES
    if value > inst.threshold:
        return GapVerdict.NO
    return GapVerdict.INDETERMINATE
