"""Seeded verification suites shared by the CLI and the acceptance tests.

Each suite returns a :class:`SuiteResult` with one line per case (ordered by
case id) plus aggregate statistics.  Hard assertions fail the suite on any
single violation; empirical suites compare a pass fraction to a threshold.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Callable

from .analysis import (
    tensor_case_check,
    random_sublattice,
    trace_det_bound,
    trichotomy_classify,
    verify_tensor_lower_bound,
)
from .gf2 import (
    BchParams,
    BitMatrix,
    bch_parity,
    code_tensor_distance_check,
    every_d_columns_independent,
    kernel_mod2_lattice,
    list_to_bits,
    min_distance,
    shift_is_typical,
)
from .lattice import Lattice, identity_tensor_witness, tensor, tensor_power
from .linalg import IntMatrix, rank
from .reduction import (
    Clause,
    ReductionParams,
    annoying_check,
    count_bounds,
    gen_setcover,
    cvp_sparsity_violations,
    run_pipeline,
    stage_rng,
)
from .svp import enumerate_ball, lambda1_exact, lll_columns, minkowski_check

DESK = dict(d=4, eta=Fraction(1, 4), N=16, q_override=97)
YES_SIZES = (6, 6)    # (n'', n')
NO_SIZES = (7, 8)
EMPIRICAL_THRESHOLD = Fraction(4, 5)


@dataclass
class Case:
    cid: int
    ok: bool
    detail: str = ""


@dataclass
class SuiteResult:
    name: str
    cases: list[Case] = field(default_factory=list)
    stats: dict = field(default_factory=dict)
    hard_ok: bool = True
    threshold: Fraction | None = None   # None: every case must pass
    elapsed: float = 0.0

    @property
    def passed(self) -> int:
        return sum(c.ok for c in self.cases)

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.passed, len(self.cases)) if self.cases else Fraction(1)

    @property
    def ok(self) -> bool:
        if not self.hard_ok:
            return False
        if self.threshold is None:
            return self.passed == len(self.cases)
        return self.fraction >= self.threshold

    def report(self, timing: bool = False) -> str:
        """key=value lines ending in the verdict line."""
        lines = [f"suite={self.name}"]
        for c in sorted(self.cases, key=lambda c: c.cid):
            lines.append(f"case={c.cid} result={'PASS' if c.ok else 'FAIL'}" + (f" {c.detail}" if c.detail else ""))
        for k, v in self.stats.items():
            lines.append(f"{k}={v}")
        lines.append(f"cases={len(self.cases)} passed={self.passed} fraction={float(self.fraction):.4f}")
        if self.threshold is not None:
            lines.append(f"threshold={float(self.threshold):.4f}")
        if timing:
            lines.append(f"elapsed={self.elapsed:.2f}")
        lines.append(f"VERDICT={'PASS' if self.ok else 'FAIL'}")
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# random fixtures


def random_full_rank(rng: random.Random, rank_: int, ambient: int, lo: int = -5, hi: int = 5) -> IntMatrix:
    while True:
        m = IntMatrix(([rng.randint(lo, hi) for _ in range(rank_)] for _ in range(ambient)), rank_)
        if rank(m) == rank_:
            return m


def random_lattice(rng: random.Random, max_rank: int, lo: int = -5, hi: int = 5) -> Lattice:
    r = rng.randint(1, max_rank)
    n = rng.randint(r, max_rank)
    return Lattice(random_full_rank(rng, r, n, lo, hi))


def desk_params(seed: int, k: int = 1) -> ReductionParams:
    return ReductionParams(k=k, seed=seed, **DESK)


def desk_run(kind: str, seed: int, k: int = 1):
    n2, n1 = YES_SIZES if kind == "YES" else NO_SIZES
    p = desk_params(seed, k)
    inst = gen_setcover(kind, n2, n1, p.d, p.eta, stage_rng(seed, "setcover"))
    return inst, run_pipeline(inst, p)


def rank_reduced(lat: Lattice, r: int) -> Lattice:
    """Rank-``r`` sublattice spanned by a shortest vector and LLL basis vectors."""
    cols = [lambda1_exact(lat).vector]
    for c in lll_columns(lat.columns()):
        if len(cols) == r:
            break
        trial = cols + [tuple(c)]
        if rank(IntMatrix.from_columns(trial, lat.ambient_dim)) == len(trial):
            cols = trial
    return Lattice.from_columns(cols, lat.ambient_dim)


def _run(name: str, body: Callable[[SuiteResult], None], threshold=None) -> SuiteResult:
    res = SuiteResult(name, threshold=threshold)
    t0 = time.perf_counter()
    body(res)
    res.elapsed = time.perf_counter() - t0
    return res


# ---------------------------------------------------------------------------
# suites


def suite_submultiplicativity(seed: int = 0, cases: int = 200) -> SuiteResult:
    def body(res):
        rng = stage_rng(seed, "submultiplicativity")
        for i in range(cases):
            l1, l2 = random_lattice(rng, 3), random_lattice(rng, 3)
            a, b = lambda1_exact(l1).norm_sq, lambda1_exact(l2).norm_sq
            t = lambda1_exact(tensor(l1, l2)).norm_sq
            res.cases.append(Case(i, t <= a * b, f"l1={a} l2={b} tensor={t}"))
    return _run("submultiplicativity", body)


def dual_witness_fixtures(seed: int = 0) -> list[Lattice]:
    rng = stage_rng(seed, "dual-witness")
    out = [Lattice.integer(n) for n in range(1, 6)]
    out += [Lattice(IntMatrix([[2, 1], [0, 3]])), Lattice(IntMatrix.diag([1, 2, 3, 4, 5]))]
    for n in range(1, 6):
        out += [Lattice(random_full_rank(rng, n, n)) for _ in range(4)]
    return out


def suite_dual_witness(seed: int = 0) -> SuiteResult:
    def body(res):
        for i, lat in enumerate(dual_witness_fixtures(seed)):
            w = identity_tensor_witness(lat)
            n = lat.ambient_dim
            res.cases.append(Case(i, w.norm_sq() == n, f"n={n} norm_sq={w.norm_sq()}"))
    return _run("dual-witness", body)


def suite_minkowski(seed: int = 0, cases: int = 100) -> SuiteResult:
    def body(res):
        rng = stage_rng(seed, "minkowski")
        for i in range(cases):
            rep = minkowski_check(random_lattice(rng, 4))
            res.cases.append(Case(i, rep.holds, f"r={rep.rank} det_sq={rep.det_sq} lambda1_sq={rep.lambda1_sq}"))
    return _run("minkowski", body)


def suite_trace_det(seed: int = 0, cases: int = 10_000) -> SuiteResult:
    def body(res):
        rng = stage_rng(seed, "trace-det")
        mismatches = 0
        for i in range(cases):
            r = rng.randint(1, 5)
            U = random_full_rank(rng, r, rng.randint(r, 5), -9, 9)
            W = random_full_rank(rng, r, rng.randint(r, 5), -9, 9)
            rep = trace_det_bound(U, W)
            mismatches += not rep.consistent
            res.cases.append(Case(i, rep.holds, f"r={r} trace={rep.trace}"))
        res.stats["trace_identity_mismatches"] = mismatches
        res.hard_ok = mismatches == 0
    return _run("trace-det", body)


def suite_trichotomy(seed: int = 0, lattices: int = 20, per_lattice: int = 100, case_checks: int = 3) -> SuiteResult:
    """Random sublattices of certified NO lattices, plus the tensor-bound case analysis."""
    def body(res):
        rng = stage_rng(seed, "trichotomy")
        counts = {0: 0, 1: 0, 2: 0, 3: 0}
        cases_ok = cases_total = 0
        cid = 0
        for j in range(lattices):
            _, run = desk_run("NO", seed + j)
            base = run.base
            d = run.params.d
            for _ in range(per_lattice):
                sub = random_sublattice(base, rng.randint(1, min(3, base.rank)), rng)
                rep = trichotomy_classify(sub, d, rng)
                counts[rep.prop] += 1
                res.cases.append(Case(cid, rep.holds, f"lattice={j} prop={rep.prop} rows={rep.nonzero_rows} "
                                                      f"even={int(rep.all_even)} det_sq={rep.det_sq}"))
                cid += 1
            for _ in range(case_checks):
                b2 = random_full_rank(rng, 2, 3)
                while True:
                    X = IntMatrix(([rng.randint(-2, 2) for _ in range(2)] for _ in range(base.rank)), 2)
                    if not X.is_zero():
                        break
                cr = tensor_case_check(X, base.basis, b2, d)
                cases_total += 1
                cases_ok += cr.holds
        for p, n in counts.items():
            res.stats[f"property_{p}"] = n
        res.stats["case_checks"] = f"{cases_ok}/{cases_total}"
        res.hard_ok = cases_ok == cases_total
    return _run("trichotomy", body)


def suite_pipeline_yes(seed: int = 0, runs: int = 20) -> SuiteResult:
    def body(res):
        typical = exact = retained = 0
        for i in range(runs):
            inst, run = desk_run("YES", seed + i)
            p = run.params
            gv = run.good_vector
            is_typ = shift_is_typical(run.parity, run.certificate.s, p.r)
            typical += is_typ
            if gv is not None and sum(x * x for x in gv) == p.good_norm_sq:
                exact += 1
            elif is_typ:
                res.hard_ok = False
            if gv is not None and run.base.contains(gv):
                retained += 1
            lam = lambda1_exact(run.base).norm_sq
            bound = p.gamma_sq * p.d
            res.cases.append(Case(i, lam <= bound, f"seed={seed + i} lambda1_sq={lam} bound={bound} "
                                                   f"typical={int(is_typ)}"))
        res.stats.update(typical_shifts=typical, good_vector_exact=exact, good_vector_retained=retained)
    return _run("pipeline-yes", body, EMPIRICAL_THRESHOLD)


def suite_pipeline_no(seed: int = 0, runs: int = 20) -> SuiteResult:
    def body(res):
        sparse_bad = 0
        for i in range(runs):
            inst, run = desk_run("NO", seed + i)
            d = run.params.d
            if run.cvp is not None:
                sparse_bad += cvp_sparsity_violations(inst, run.cvp)
            lam = lambda1_exact(run.base).norm_sq
            ball = enumerate_ball(run.base, d * d, strict=True)
            annoying = sum(1 for v in ball.vectors if annoying_check(v, d) is Clause.ANNOYING)
            ok = lam >= d and annoying == 0
            res.cases.append(Case(i, ok, f"seed={seed + i} lambda1_sq={lam} ball={len(ball.vectors)} "
                                         f"annoying={annoying}"))
        res.stats["cvp_sparse_violations"] = sparse_bad
        res.hard_ok = sparse_bad == 0
    return _run("pipeline-no", body, EMPIRICAL_THRESHOLD)


def random_code(rng: random.Random, max_len: int = 6, max_dim: int = 3) -> BitMatrix:
    """Generator matrix with independent rows."""
    while True:
        n = rng.randint(1, max_len)
        k = rng.randint(1, min(max_dim, n))
        g = BitMatrix([rng.getrandbits(n) for _ in range(k)], n)
        if g.rank() == k:
            return g


def suite_code_tensor(seed: int = 0, cases: int = 50) -> SuiteResult:
    def body(res):
        rng = stage_rng(seed, "code-tensor")
        for i in range(cases):
            rep = code_tensor_distance_check(random_code(rng), random_code(rng))
            res.cases.append(Case(i, rep.holds, f"d1={rep.d1} d2={rep.d2} d_tensor={rep.d_tensor}"))
    return _run("code-tensor", body)


def suite_bch(seed: int = 0, N: int = 16, d: int = 4) -> SuiteResult:
    def body(res):
        P = bch_parity(BchParams(N, d))
        ok, count = every_d_columns_independent(P, d)
        res.cases.append(Case(0, ok and count == comb(N, d), f"independent_tuples={count}/{comb(N, d)}"))
        res.cases.append(Case(1, P.rank() == P.nrows, f"rows={P.nrows} rank={P.rank()}"))
        dist = min_distance(P, kind="parity")
        res.cases.append(Case(2, dist >= d + 1, f"kernel_min_weight={dist}"))
    return _run("bch", body)


def suite_bch_box(seed: int = 0, N: int = 16, d: int = 4, spot_checks: int = 500) -> SuiteResult:
    """Vectors of the kernel-mod-2 lattice with entries in {-2..2}.

    The box is split by parity pattern: an entry is odd exactly when it is
    +-1, so each pattern ``c`` stands for all ``2^|c| 3^(N-|c|)`` box vectors
    reducing to it, and those lie in the lattice iff ``P c = 0``.  Every
    pattern is visited; membership is also confirmed against the HNF basis.
    """
    def body(res):
        P = bch_parity(BchParams(N, d))
        lat = kernel_mod2_lattice(P)
        basis_ok = all(P.apply(list_to_bits([x % 2 for x in col])) == 0 for col in lat.columns())
        index_ok = lat.det_gram() == 4 ** P.rank()
        res.cases.append(Case(0, basis_ok and index_ok, f"det_sq={lat.det_gram()}"))
        members = vectors = 0
        bad = 0
        for bits in range(1 << N):
            if P.apply(bits):
                continue
            members += 1
            w = bin(bits).count("1")
            vectors += 2 ** w * 3 ** (N - w)
            # bits == 0: every entry in {-2, 0, 2}, all even
            if bits and w < d:
                bad += 1
        vectors -= 1  # the zero vector
        res.cases.append(Case(1, bad == 0, f"member_patterns={members} box_vectors={vectors} bad={bad}"))
        # spot check: random box vectors built from lattice patterns must be members
        rng = stage_rng(seed, "bch-box")
        pats = lattice_patterns(P)
        spot_bad = 0
        for _ in range(spot_checks):
            bits = rng.choice(pats)
            v = [rng.choice((-1, 1)) if bits >> j & 1 else rng.choice((-2, 0, 2)) for j in range(N)]
            if not any(v):
                continue
            nnz = sum(1 for x in v if x)
            if not lat.contains(v) or not (nnz >= d or all(x % 2 == 0 for x in v)):
                spot_bad += 1
        res.cases.append(Case(2, spot_bad == 0, f"spot_checks={spot_checks} bad={spot_bad}"))
    return _run("bch-box", body)


def lattice_patterns(P: BitMatrix) -> list[int]:
    return [b for b in range(1 << P.ncols) if not P.apply(b)]


def suite_tensor_amplification(seed: int = 0, fixture_rank: int = 4, k: int = 2) -> SuiteResult:
    """YES and NO desk bases reduced to ``fixture_rank``, tensored ``k`` times."""
    def body(res):
        for cid, kind in enumerate(("YES", "NO")):
            _, run = desk_run(kind, seed)
            p = run.params
            fx = rank_reduced(run.base, fixture_rank)
            lam = lambda1_exact(fx).norm_sq
            t = tensor_power(fx, k)
            tl = lambda1_exact(t).norm_sq
            if kind == "YES":
                bound = (p.gamma_sq * p.d) ** k
                ok = tl <= bound and tl <= lam ** k
                detail = f"kind=YES rank={t.rank} base_lambda1_sq={lam} tensor_lambda1_sq={tl} bound<={bound}"
            else:
                rep = verify_tensor_lower_bound(fx, p.d, fx)
                ok = tl >= p.d ** k and rep.holds
                detail = (f"kind=NO rank={t.rank} base_lambda1_sq={lam} tensor_lambda1_sq={tl} "
                          f"bound>={p.d ** k} lemma_bound>={p.d * rep.l2_lambda1_sq}")
            res.cases.append(Case(cid, ok, detail))
    return _run("tensor-amplification", body)


def paper_counts() -> tuple[int, int]:
    d = 128
    eta = Fraction(1, 128)
    p = ReductionParams(d=d, eta=eta, N=d ** 256, mode="paper")
    return count_bounds(p, d)


def suite_counts(seed: int = 0) -> SuiteResult:
    def body(res):
        G, A = paper_counts()
        res.cases.append(Case(0, 10 ** 5 * A <= G, f"log2_G={G.bit_length()} log2_A={A.bit_length()}"))
        _, A_desk = count_bounds(desk_params(seed), 8)
        res.cases.append(Case(1, A_desk == 96, f"desk_A={A_desk}"))
    return _run("counts", body)


def run_artifacts(kind: str, seed: int) -> bytes:
    from .textio import format_certificate, format_gap_instance, format_lattice

    _, run = desk_run(kind, seed)
    return (format_gap_instance(run.instance) + format_certificate(run.certificate)
            + format_lattice(run.base)).encode()


def suite_determinism(seed: int = 0, runs: int = 3, repeats: int = 2) -> SuiteResult:
    """``runs`` distinct pipeline runs, each regenerated ``repeats`` times."""
    def body(res):
        for cid in range(runs):
            kind = ("YES", "NO")[cid % 2]
            blobs = {run_artifacts(kind, seed + cid) for _ in range(repeats)}
            res.cases.append(Case(cid, len(blobs) == 1,
                                  f"kind={kind} seed={seed + cid} repeats={repeats} distinct={len(blobs)}"))
    return _run("determinism", body)


SUITES: dict[str, Callable[..., SuiteResult]] = {
    "submultiplicativity": suite_submultiplicativity,
    "dual-witness": suite_dual_witness,
    "minkowski": suite_minkowski,
    "trace-det": suite_trace_det,
    "trichotomy": suite_trichotomy,
    "pipeline-yes": suite_pipeline_yes,
    "pipeline-no": suite_pipeline_no,
    "code-tensor": suite_code_tensor,
    "bch": suite_bch,
    "bch-box": suite_bch_box,
    "tensor-amplification": suite_tensor_amplification,
    "counts": suite_counts,
    "determinism": suite_determinism,
}

# selector names used by the command line contract
ALIASES = {"lemma24": "dual-witness", "claim36": "trace-det"}


def get_suite(name: str) -> Callable[..., SuiteResult]:
    return SUITES[ALIASES.get(name, name)]
