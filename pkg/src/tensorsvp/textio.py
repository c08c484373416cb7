"""Plain-text formats: matrices, lattices, bit matrices, set cover instances,
GapSVP instances and pipeline certificates."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterator

from .errors import FormatError
from .gf2 import BitMatrix
from .lattice import Lattice
from .linalg import IntMatrix
from .reduction import PipelineCertificate, SetCoverInstance
from .svp import GapInstance


def _lines(text: str) -> Iterator[str]:
    for line in text.splitlines():
        line = line.strip()
        if line:
            yield line


def _ints(line: str, n: int | None = None, what: str = "line") -> list[int]:
    try:
        vals = [int(x) for x in line.split()]
    except ValueError as exc:
        raise FormatError(f"{what}: non-integer token in {line!r}") from exc
    if n is not None and len(vals) != n:
        raise FormatError(f"{what}: expected {n} integers, got {len(vals)}")
    return vals


# -- matrices ------------------------------------------------------------------


def format_matrix(m: IntMatrix) -> str:
    out = [f"{m.nrows} {m.ncols}"]
    out += [" ".join(map(str, row)) for row in m.rows]
    return "\n".join(out) + "\n"


def _read_matrix(it: Iterator[str]) -> IntMatrix:
    try:
        nrows, ncols = _ints(next(it), 2, "matrix header")
    except StopIteration:
        raise FormatError("missing matrix header") from None
    if nrows < 0 or ncols < 0:
        raise FormatError("negative matrix dimensions")
    rows = []
    for i in range(nrows):
        try:
            rows.append(_ints(next(it), ncols, f"matrix row {i + 1}"))
        except StopIteration:
            raise FormatError(f"matrix has {i} rows, header says {nrows}") from None
    return IntMatrix(rows, ncols)


def _finish(it: Iterator[str]) -> None:
    extra = next(it, None)
    if extra is not None:
        raise FormatError(f"trailing content: {extra!r}")


def parse_matrix(text: str) -> IntMatrix:
    it = _lines(text)
    m = _read_matrix(it)
    _finish(it)
    return m


# -- lattices --------------------------------------------------------------------


def format_lattice(lat: Lattice) -> str:
    return f"{lat.ambient_dim} {lat.rank}\n" + format_matrix(lat.basis)


def parse_lattice(text: str, check: bool = True) -> Lattice:
    it = _lines(text)
    try:
        ambient, rk = _ints(next(it), 2, "lattice header")
    except StopIteration:
        raise FormatError("empty lattice file") from None
    m = _read_matrix(it)
    _finish(it)
    if m.shape != (ambient, rk):
        raise FormatError(f"lattice header {ambient}x{rk} disagrees with matrix {m.nrows}x{m.ncols}")
    return Lattice(m, check=check)


# -- bit matrices ----------------------------------------------------------------


def format_bitmatrix(m: BitMatrix) -> str:
    out = [f"{m.nrows} {m.ncols}"]
    out += ["".join(map(str, row)) for row in m.tolist()]
    return "\n".join(out) + "\n"


def parse_bitmatrix(text: str) -> BitMatrix:
    it = _lines(text)
    try:
        nrows, ncols = _ints(next(it), 2, "bit matrix header")
    except StopIteration:
        raise FormatError("empty bit matrix file") from None
    rows = []
    for i in range(nrows):
        line = next(it, None)
        if line is None or len(line) != ncols or set(line) - {"0", "1"}:
            raise FormatError(f"bit matrix row {i + 1}: expected {ncols} characters from 0/1")
        rows.append([int(c) for c in line])
    _finish(it)
    return BitMatrix.from_lists(rows, ncols)


# -- set cover ---------------------------------------------------------------------


def format_setcover(inst: SetCoverInstance) -> str:
    eta = inst.eta
    out = [f"{inst.universe_size} {inst.num_sets} {inst.d} {eta.numerator} {eta.denominator}"]
    for s in inst.sets:
        elems = sorted(e + 1 for e in s)
        out.append(" ".join(map(str, [len(elems)] + elems)))
    return "\n".join(out) + "\n"


def parse_setcover(text: str) -> SetCoverInstance:
    it = _lines(text)
    try:
        n2, n1, d, en, ed = _ints(next(it), 5, "set cover header")
    except StopIteration:
        raise FormatError("empty set cover file") from None
    if ed <= 0:
        raise FormatError("eta denominator must be positive")
    sets = []
    for i in range(n1):
        line = next(it, None)
        if line is None:
            raise FormatError(f"set cover has {i} sets, header says {n1}")
        vals = _ints(line, what=f"set {i + 1}")
        if not vals or vals[0] != len(vals) - 1:
            raise FormatError(f"set {i + 1}: size field disagrees with element count")
        sets.append(frozenset(e - 1 for e in vals[1:]))
    _finish(it)
    return SetCoverInstance(n2, tuple(sets), d, Fraction(en, ed))


# -- GapSVP instances ----------------------------------------------------------------


def _format_p(p) -> str:
    return "inf" if p == math.inf else str(int(p))


def format_gap_instance(inst: GapInstance) -> str:
    b = inst.basis
    t = inst.threshold
    head = f"{b.nrows} {b.ncols} {t.numerator} {t.denominator} {_format_p(inst.p)}"
    return head + "\n" + format_matrix(b)


def parse_gap_instance(text: str, gamma=Fraction(1)) -> GapInstance:
    it = _lines(text)
    line = next(it, None)
    if line is None:
        raise FormatError("empty gap instance file")
    parts = line.split()
    if len(parts) != 5:
        raise FormatError("gap instance header needs 5 fields")
    ambient, rk, tn, td = _ints(" ".join(parts[:4]), 4, "gap instance header")
    p = math.inf if parts[4] == "inf" else _ints(parts[4], 1, "p")[0]
    m = _read_matrix(it)
    _finish(it)
    if m.shape != (ambient, rk):
        raise FormatError("gap instance header disagrees with matrix shape")
    if td <= 0:
        raise FormatError("threshold denominator must be positive")
    return GapInstance(m, Fraction(tn, td), p, Fraction(gamma))


# -- certificates ----------------------------------------------------------------------


def _vec(v) -> str:
    return " ".join(map(str, v))


def format_certificate(cert: PipelineCertificate, extra: dict | None = None) -> str:
    items = [
        ("seed", cert.seed),
        ("degenerate", int(cert.degenerate)),
        ("q", "none" if cert.q is None else cert.q),
        ("G", cert.G),
        ("A", cert.A),
        ("w", _vec(cert.w)),
        ("s", _vec(cert.s)),
        ("t", _vec(cert.t)),
        ("codeword", _vec(cert.codeword)),
        ("flips", _vec(cert.flips)),
    ]
    items += list((extra or {}).items())
    return "".join(f"{k}={v}\n" for k, v in items)


def parse_keyvalues(text: str) -> dict[str, str]:
    out = {}
    for line in _lines(text):
        key, sep, val = line.partition("=")
        if not sep:
            raise FormatError(f"expected key=value, got {line!r}")
        out[key.strip()] = val.strip()
    return out


def parse_certificate(text: str) -> PipelineCertificate:
    kv = parse_keyvalues(text)
    try:
        vec = lambda k: tuple(_ints(kv.get(k, ""), what=k))  # noqa: E731
        return PipelineCertificate(
            seed=int(kv["seed"]),
            q=None if kv["q"] == "none" else int(kv["q"]),
            G=int(kv["G"]),
            A=int(kv["A"]),
            w=vec("w"),
            s=vec("s"),
            t=vec("t"),
            codeword=vec("codeword"),
            flips=vec("flips"),
            degenerate=bool(int(kv.get("degenerate", "0"))),
        )
    except KeyError as exc:
        raise FormatError(f"certificate is missing {exc.args[0]!r}") from None
    except ValueError as exc:
        raise FormatError(str(exc)) from None
