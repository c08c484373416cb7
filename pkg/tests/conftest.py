import itertools

from hypothesis import HealthCheck, settings, strategies as st

from tensorsvp.linalg import IntMatrix, rank

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


def matrices(max_rows=4, max_cols=4, lo=-6, hi=6, min_rows=1, min_cols=1):
    return st.integers(min_rows, max_rows).flatmap(
        lambda r: st.integers(min_cols, max_cols).flatmap(
            lambda c: st.lists(
                st.lists(st.integers(lo, hi), min_size=c, max_size=c), min_size=r, max_size=r
            ).map(lambda rows: IntMatrix(rows, c))
        )
    )


def full_rank_bases(max_rank=3, extra_dim=1, lo=-5, hi=5):
    """Full column rank ``n x r`` matrices with ``r <= n <= r + extra_dim``."""
    def build(rn):
        r, n = rn
        return st.lists(st.lists(st.integers(lo, hi), min_size=r, max_size=r), min_size=n, max_size=n).map(
            lambda rows: IntMatrix(rows, r)
        ).filter(lambda m: rank(m) == m.ncols)

    return st.integers(1, max_rank).flatmap(
        lambda r: st.integers(r, r + extra_dim).map(lambda n: (r, n))
    ).flatmap(build)


def brute_lambda1_sq(basis: IntMatrix, box: int) -> int:
    """Shortest nonzero vector over coefficients in ``[-box, box]``."""
    cols = basis.columns()
    best = None
    for coeffs in itertools.product(range(-box, box + 1), repeat=len(cols)):
        if not any(coeffs):
            continue
        v = [sum(c * col[i] for c, col in zip(coeffs, cols)) for i in range(basis.nrows)]
        ns = sum(x * x for x in v)
        if best is None or ns < best:
            best = ns
    return best
