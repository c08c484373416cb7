"""Command-line entry point.

Exit codes: 0 success, 1 verification verdict FAIL, 2 usage or parameter
error, 3 resource ceiling exceeded.
"""

from __future__ import annotations

import argparse
import inspect
import math
import sys
from fractions import Fraction
from pathlib import Path

from .errors import FormatError, ParameterError, ResourceLimitError, TensorSvpError
from .lattice import DEFAULT_TENSOR_CEILING, Lattice, tensor, tensor_power
from .reduction import Kind, ReductionParams, gen_setcover, run_pipeline, stage_rng
from .suites import ALIASES, SUITES, desk_run, get_suite, rank_reduced
from .svp import DEFAULT_CEILING, lambda1_exact, lambda1_lp
from .textio import (
    format_certificate,
    format_gap_instance,
    format_lattice,
    format_setcover,
    parse_gap_instance,
    parse_lattice,
    parse_matrix,
    parse_setcover,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: Path, text: str) -> None:
    try:
        path.write_text(text)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror}") from None


def load_lattice(path: str) -> Lattice:
    """Accepts the lattice, GapSVP-instance and bare matrix formats."""
    text = _read(path)
    for parse in (parse_lattice, lambda t: Lattice(parse_gap_instance(t).basis), lambda t: Lattice(parse_matrix(t))):
        try:
            return parse(text)
        except FormatError:
            continue
    raise FormatError(f"{path}: not a lattice, gap instance or matrix file")


def _kv(**items) -> str:
    return "".join(f"{k}={v}\n" for k, v in items.items())


def _vec(v) -> str:
    return " ".join(map(str, v))


# ---------------------------------------------------------------------------
# subcommands


def cmd_generate(args) -> int:
    kind = Kind(args.kind)
    inst = gen_setcover(kind, args.universe, args.sets, args.d, args.eta, stage_rng(args.seed, "setcover"))
    text = format_setcover(inst)
    if args.output:
        _write(Path(args.output), text)
        out = _kv(kind=kind.value, seed=args.seed, output=args.output)
        if inst.planted is not None:
            out += _kv(planted=_vec(i + 1 for i in inst.planted))
        sys.stdout.write(out)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_reduce(args) -> int:
    inst = parse_setcover(_read(args.input))
    d = inst.d if args.d is None else args.d
    eta = inst.eta if args.eta is None else args.eta
    if (d, eta) != (inst.d, inst.eta):
        raise ParameterError(f"flags (d={d}, eta={eta}) disagree with the instance file", "params")
    params = ReductionParams(d, eta, args.N, args.k, args.seed, "desk", args.q_override)
    res = run_pipeline(inst, params, args.tensor_ceiling)
    prefix = Path(args.output)
    gap_path, cert_path, base_path = (prefix.with_name(prefix.name + ext) for ext in (".gap", ".cert", ".lattice"))
    _write(gap_path, format_gap_instance(res.instance))
    extra = {"k": params.k, "d": params.d, "eta": params.eta, "N": params.N,
             "gamma_sq": params.gamma_sq, "threshold": res.instance.threshold}
    _write(cert_path, format_certificate(res.certificate, extra))
    _write(base_path, format_lattice(res.base))
    sys.stdout.write(_kv(seed=params.seed, q=res.certificate.q, degenerate=int(res.certificate.degenerate),
                         rank=res.instance.basis.ncols, ambient=res.instance.basis.nrows,
                         threshold=res.instance.threshold, gamma_pow=res.instance.gamma,
                         gap=gap_path, certificate=cert_path, base=base_path))
    return EXIT_OK


def _parse_p(text: str):
    if text in ("inf", "infinity"):
        return math.inf
    try:
        p = int(text)
    except ValueError:
        raise UsageError(f"--p must be a positive integer or 'inf', got {text!r}") from None
    if p < 1:
        raise UsageError("--p must be at least 1")
    return p


def cmd_svp(args) -> int:
    lat = load_lattice(args.input)
    p = _parse_p(args.p)
    if p == 2:
        res = lambda1_exact(lat, args.ceiling)
        sys.stdout.write(_kv(rank=lat.rank, lambda1_sq=res.norm_sq, vector=_vec(res.vector), nodes=res.nodes))
    else:
        res = lambda1_lp(lat, p, args.ceiling)
        key = "lambda1_inf" if p == math.inf else f"lambda1_pow{p}"
        sys.stdout.write(_kv(rank=lat.rank, p=args.p, **{key: res.value}, vector=_vec(res.vector), nodes=res.nodes))
    return EXIT_OK


def cmd_tensor(args) -> int:
    lat = load_lattice(args.input)
    if args.other:
        if args.k != 1:
            raise UsageError("--k and --other are mutually exclusive")
        other = load_lattice(args.other)
        need = lat.rank * other.rank
        if need > args.tensor_ceiling:
            raise ResourceLimitError("tensor product rank", need, args.tensor_ceiling)
        out = tensor(lat, other)
    else:
        if args.k < 1:
            raise UsageError("--k must be at least 1")
        out = tensor_power(lat, args.k, args.tensor_ceiling)
    text = format_lattice(out)
    if args.output:
        _write(Path(args.output), text)
        sys.stdout.write(_kv(rank=out.rank, ambient=out.ambient_dim, output=args.output))
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        fn = get_suite(args.suite)
    except KeyError:
        raise UsageError(f"unknown suite {args.suite!r}") from None
    kwargs = {"seed": args.seed}
    if args.cases is not None:
        params = inspect.signature(fn).parameters
        key = next((k for k in ("cases", "runs", "lattices") if k in params), None)
        if key is None:
            raise UsageError(f"suite {args.suite} has a fixed case count")
        kwargs[key] = args.cases
    res = fn(**kwargs)
    sys.stdout.write(res.report())
    return EXIT_OK if res.ok else EXIT_FAIL


def cmd_plotdata(args) -> int:
    try:
        values = [int(x) for x in args.values.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"--values must be comma-separated integers, got {args.values!r}") from None
    if args.stat == "gap-vs-k":
        sys.stdout.write("k\trank\tlambda1_sq\tthreshold\tratio\tnodes\n")
        if not values:
            return EXIT_OK
        _, run = desk_run(args.kind, args.seed)
        base = rank_reduced(run.base, args.fixture_rank)
        d = run.params.d
        for k in values:
            lat = tensor_power(base, k, args.tensor_ceiling)
            res = lambda1_exact(lat, args.ceiling)
            ratio = Fraction(res.norm_sq, d ** k)
            sys.stdout.write(f"{k}\t{lat.rank}\t{res.norm_sq}\t{d ** k}\t{float(ratio):.6f}\t{res.nodes}\n")
    else:
        sys.stdout.write("rank\tlambda1_sq\tnodes\n")
        if not values:
            return EXIT_OK
        _, run = desk_run(args.kind, args.seed)
        for r in values:
            if not 1 <= r <= run.base.rank:
                raise UsageError(f"rank {r} outside [1, {run.base.rank}]")
            lat = rank_reduced(run.base, r)
            res = lambda1_exact(lat, args.ceiling)
            sys.stdout.write(f"{r}\t{res.norm_sq}\t{res.nodes}\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _seed(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tensorsvp", allow_abbrev=False,
                                 description="Exact lattice tools and the tensored GapSVP reduction.")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        p = sub.add_parser(name, help=help_, allow_abbrev=False)
        p.set_defaults(func=fn)
        return p

    p = add("generate", cmd_generate, "write a planted YES or certified NO set cover instance")
    p.add_argument("--kind", choices=["YES", "NO"], required=True)
    p.add_argument("--universe", type=int, required=True)
    p.add_argument("--sets", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--eta", type=_fraction, required=True)
    p.add_argument("--seed", type=_seed, required=True)
    p.add_argument("--output")

    p = add("reduce", cmd_reduce, "run the reduction on a set cover file")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True, help="prefix for .gap, .cert and .lattice files")
    p.add_argument("--seed", type=_seed, required=True)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--d", type=int)
    p.add_argument("--eta", type=_fraction)
    p.add_argument("--N", type=int, default=16)
    p.add_argument("--q-override", type=int)
    p.add_argument("--tensor-ceiling", type=int, default=DEFAULT_TENSOR_CEILING)

    p = add("svp", cmd_svp, "exact first minimum of a lattice")
    p.add_argument("--input", required=True)
    p.add_argument("--p", default="2")
    p.add_argument("--ceiling", type=int, default=DEFAULT_CEILING)

    p = add("tensor", cmd_tensor, "tensor power or product of lattices")
    p.add_argument("--input", required=True)
    p.add_argument("--other")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--output")
    p.add_argument("--tensor-ceiling", type=int, default=DEFAULT_TENSOR_CEILING)

    p = add("verify", cmd_verify, "run a seeded verification suite")
    p.add_argument("--suite", required=True, choices=sorted(set(SUITES) | set(ALIASES)))
    p.add_argument("--seed", type=_seed, required=True)
    p.add_argument("--cases", type=int)

    p = add("plotdata", cmd_plotdata, "tab-separated statistics for plotting")
    p.add_argument("--stat", choices=["gap-vs-k", "nodes-vs-rank"], required=True)
    p.add_argument("--values", default="", help="comma-separated k values or ranks")
    p.add_argument("--kind", choices=["YES", "NO"], default="YES")
    p.add_argument("--seed", type=_seed, required=True)
    p.add_argument("--fixture-rank", type=int, default=4)
    p.add_argument("--ceiling", type=int, default=DEFAULT_CEILING)
    p.add_argument("--tensor-ceiling", type=int, default=DEFAULT_TENSOR_CEILING)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (UsageError, TensorSvpError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
