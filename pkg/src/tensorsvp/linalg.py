"""Exact integer and rational matrix algebra.

Everything here works on Python ints (and :class:`fractions.Fraction` where a
rational result is unavoidable).  No floating point is used anywhere in this
module.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .errors import RankDeficientError, SingularMatrixError


class IntMatrix:
    """Immutable dense matrix of arbitrary-precision integers.

    Entries are stored row-major as a tuple of row tuples.
    """

    __slots__ = ("_rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Iterable[int]], ncols: int | None = None):
        data = tuple(tuple(int(x) for x in row) for row in rows)
        if ncols is None:
            if not data:
                raise ValueError("ncols is required for a matrix with no rows")
            ncols = len(data[0])
        for row in data:
            if len(row) != ncols:
                raise ValueError("ragged rows")
        self._rows = data
        self.nrows = len(data)
        self.ncols = ncols

    # -- constructors -----------------------------------------------------

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "IntMatrix":
        return cls(((0,) * ncols for _ in range(nrows)), ncols)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(((1 if i == j else 0 for j in range(n)) for i in range(n)), n)

    @classmethod
    def diag(cls, values: Sequence[int]) -> "IntMatrix":
        n = len(values)
        return cls(((values[i] if i == j else 0 for j in range(n)) for i in range(n)), n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], nrows: int | None = None) -> "IntMatrix":
        if not columns:
            if nrows is None:
                raise ValueError("nrows is required when there are no columns")
            return cls(((),) * nrows, 0)
        n = len(columns[0])
        return cls(((col[i] for col in columns) for i in range(n)), len(columns))

    # -- accessors --------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    @property
    def rows(self) -> tuple[tuple[int, ...], ...]:
        return self._rows

    def __getitem__(self, idx):
        i, j = idx
        return self._rows[i][j]

    def row(self, i: int) -> tuple[int, ...]:
        return self._rows[i]

    def col(self, j: int) -> tuple[int, ...]:
        return tuple(row[j] for row in self._rows)

    def columns(self) -> list[tuple[int, ...]]:
        return [tuple(c) for c in zip(*self._rows)] if self.nrows else [()] * self.ncols

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self._rows]

    # -- algebra ----------------------------------------------------------

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix(self.columns(), self.nrows)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        ocols = other.columns()
        return IntMatrix(
            ([sum(a * b for a, b in zip(row, c)) for c in ocols] for row in self._rows),
            other.ncols,
        )

    def apply(self, v: Sequence[int]) -> tuple[int, ...]:
        """Matrix-vector product."""
        if len(v) != self.ncols:
            raise ValueError("vector length mismatch")
        return tuple(sum(a * b for a, b in zip(row, v)) for row in self._rows)

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return IntMatrix(
            (tuple(a + b for a, b in zip(r, s)) for r, s in zip(self._rows, other._rows)), self.ncols
        )

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        return self + other.scale(-1)

    def scale(self, c: int) -> "IntMatrix":
        return IntMatrix(((c * x for x in r) for r in self._rows), self.ncols)

    def __neg__(self) -> "IntMatrix":
        return self.scale(-1)

    def kron(self, other: "IntMatrix") -> "IntMatrix":
        """Kronecker product, block (i, j) equal to ``self[i, j] * other``."""
        out = []
        for ra in self._rows:
            for rb in other._rows:
                out.append([a * b for a in ra for b in rb])
        return IntMatrix(out, self.ncols * other.ncols)

    def hstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.nrows != other.nrows:
            raise ValueError("row count mismatch")
        return IntMatrix((r + s for r, s in zip(self._rows, other._rows)), self.ncols + other.ncols)

    def vstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.ncols != other.ncols:
            raise ValueError("column count mismatch")
        return IntMatrix(self._rows + other._rows, self.ncols)

    def select_columns(self, idx: Sequence[int]) -> "IntMatrix":
        return IntMatrix((tuple(r[j] for j in idx) for r in self._rows), len(idx))

    def trace(self) -> int:
        if self.nrows != self.ncols:
            raise ValueError("trace of a non-square matrix")
        return sum(self._rows[i][i] for i in range(self.nrows))

    def is_zero(self) -> bool:
        return all(x == 0 for r in self._rows for x in r)

    # -- dunder -----------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    def __hash__(self) -> int:
        return hash((self.shape, self._rows))

    def __repr__(self) -> str:
        return f"IntMatrix({[list(r) for r in self._rows]!r})"


# ---------------------------------------------------------------------------
# determinants, rank


def bareiss_det(a: Sequence[Sequence[int]]) -> int:
    """Exact determinant of a square integer matrix (fraction-free)."""
    n = len(a)
    if n == 0:
        return 1
    m = [list(r) for r in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, n):
            mi, mk = m[i], m[k]
            f = mi[k]
            for j in range(k + 1, n):
                mi[j] = (mi[j] * pivot - f * mk[j]) // prev
        prev = pivot
    return sign * m[n - 1][n - 1]


def rank(a: IntMatrix) -> int:
    """Rank over the rationals (fraction-free elimination)."""
    m = [list(r) for r in a.rows]
    r = 0
    for c in range(a.ncols):
        piv = next((i for i in range(r, a.nrows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        for i in range(r + 1, a.nrows):
            f = m[i][c]
            if f:
                m[i] = [p * x - f * y for x, y in zip(m[i], m[r])]
        r += 1
        if r == a.nrows:
            break
    return r


def gram(b: IntMatrix) -> IntMatrix:
    """``B^T B``."""
    cols = b.columns()
    m = len(cols)
    g = [[0] * m for _ in range(m)]
    for i in range(m):
        ci = cols[i]
        for j in range(i, m):
            v = sum(x * y for x, y in zip(ci, cols[j]))
            g[i][j] = v
            g[j][i] = v
    return IntMatrix(g, m)


def det_gram(b: IntMatrix) -> int:
    """Exact ``det(B^T B)``; the lattice determinant is its square root.

    Raises RankDeficientError when the columns are linearly dependent.
    """
    d = bareiss_det(gram(b).rows)
    if d == 0:
        raise RankDeficientError(f"basis of shape {b.shape} has dependent columns")
    return d


def is_unimodular(u: IntMatrix) -> bool:
    return u.nrows == u.ncols and abs(bareiss_det(u.rows)) == 1


# ---------------------------------------------------------------------------
# Hermite normal form


def ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, x, y)`` with ``x*a + y*b == g == gcd(a, b) >= 0``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def _column_hnf(a: IntMatrix):
    """Column-style HNF with transforms.

    Returns ``(M, V, Vinv, r)`` where ``a @ V == M`` has its first ``r``
    columns in Hermite form and the remaining columns zero, ``V`` is
    unimodular and ``Vinv`` is its exact inverse.  Matrices are returned as
    lists of rows.
    """
    n, m = a.shape
    M = a.tolist()
    V = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    W = [[1 if i == j else 0 for j in range(m)] for i in range(m)]  # V^{-1}

    def colop2(c, j, x, y, u, v):
        # [col_c, col_j] <- [col_c, col_j] @ [[x, u], [y, v]],  x*v - u*y == 1
        for mat in (M, V):
            for row in mat:
                pc, pj = row[c], row[j]
                row[c] = x * pc + y * pj
                row[j] = u * pc + v * pj
        # inverse acts on rows of W: [[v, -u], [-y, x]]
        rc, rj = W[c], W[j]
        W[c] = [v * p - u * q for p, q in zip(rc, rj)]
        W[j] = [-y * p + x * q for p, q in zip(rc, rj)]

    col = 0
    for i in range(n):
        if col == m:
            break
        for j in range(col + 1, m):
            b = M[i][j]
            if b == 0:
                continue
            av = M[i][col]
            g, x, y = ext_gcd(av, b)
            colop2(col, j, x, y, -b // g, av // g)
        p = M[i][col]
        if p == 0:
            continue
        if p < 0:
            for mat in (M, V):
                for row in mat:
                    row[col] = -row[col]
            W[col] = [-x for x in W[col]]
            p = -p
        for j in range(col):
            f = M[i][j] // p
            if f:
                for mat in (M, V):
                    for row in mat:
                        row[j] -= f * row[col]
                W[col] = [x + f * y for x, y in zip(W[col], W[j])]
        col += 1
    return M, V, W, col


def hnf_decompose(b: IntMatrix) -> tuple[IntMatrix, IntMatrix]:
    """Write ``B = [H 0] @ U`` with ``U`` unimodular and ``H`` of full column rank.

    ``H`` is in column Hermite form: pivot rows strictly increase from left to
    right, pivots are positive and entries left of a pivot lie in
    ``[0, pivot)``.
    """
    M, _, W, r = _column_hnf(b)
    h = IntMatrix((row[:r] for row in M), r)
    return h, IntMatrix(W, b.ncols)


def hnf_basis(b: IntMatrix) -> IntMatrix:
    """Canonical HNF basis of the lattice spanned by the columns of ``b``."""
    M, _, _, r = _column_hnf(b)
    return IntMatrix((row[:r] for row in M), r)


# ---------------------------------------------------------------------------
# kernels and linear Diophantine systems


def integer_kernel(s: IntMatrix) -> IntMatrix:
    """Basis (as columns) of the lattice ``{y in Z^n : S y = 0}``.

    The basis is LLL-reduced so its entries stay small.
    """
    _, V, _, r = _column_hnf(s)
    m = s.ncols
    cols = [[V[i][j] for i in range(m)] for j in range(r, m)]
    if len(cols) > 1:
        from .svp import lll_columns

        cols = lll_columns(cols)
    return IntMatrix.from_columns(cols, nrows=m)


def solve_diophantine(s: IntMatrix, b: Sequence[int]) -> tuple[int, ...] | None:
    """An integer ``t`` with ``S t = b``, or ``None`` when no such ``t`` exists."""
    if len(b) != s.nrows:
        raise ValueError("right-hand side length mismatch")
    M, V, _, r = _column_hnf(s)
    # forward substitution through the echelon structure of H = M[:, :r]
    y = [0] * r
    col = 0
    for i in range(s.nrows):
        acc = sum(M[i][j] * y[j] for j in range(col))
        if col < r and M[i][col] != 0:
            q, rem = divmod(b[i] - acc, M[i][col])
            if rem:
                return None
            y[col] = q
            col += 1
        elif acc != b[i]:
            return None
    m = s.ncols
    return tuple(sum(V[i][j] * y[j] for j in range(r)) for i in range(m))


# ---------------------------------------------------------------------------
# rational matrices


def rational_inverse(b: IntMatrix) -> tuple[tuple[Fraction, ...], ...]:
    """Exact inverse of a square integer matrix, as rows of Fractions."""
    n = b.nrows
    if b.ncols != n:
        raise ValueError("inverse of a non-square matrix")
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(b.rows)]
    for c in range(n):
        piv = next((i for i in range(c, n) if aug[i][c] != 0), None)
        if piv is None:
            raise SingularMatrixError("matrix is singular")
        aug[c], aug[piv] = aug[piv], aug[c]
        p = aug[c][c]
        aug[c] = [x / p for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    return tuple(tuple(row[n:]) for row in aug)


def rational_matmul(a, b):
    """Product of two matrices given as nested sequences (any exact numbers)."""
    bt = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def vec_dot(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(u, v))
