"""Command-line front end: ``latzeta <command> [options]``.

Exit codes: 0 success, 2 usage or bad lattice, 3 resource limit,
4 unmet precondition.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from decimal import Decimal
from fractions import Fraction
from typing import Sequence

import mpmath
import numba

from . import exact
from .catalog import CATALOG_NAMES, catalog_lattice
from .designs import certify_lattice
from .errors import DomainError, LatticeError
from .lattice import Lattice, read_lattice
from .shells import first_k_shells
from .theta import theta, theta_min_sum
from .zeta import strip_scan, zeta

EXIT_USAGE = 2
CLI_BUDGET = 10**9


class Table:
    def __init__(self, headers: Sequence[str], rows: Sequence[Sequence[str]], title: str = ""):
        self.headers = list(headers)
        self.rows = [list(r) for r in rows]
        self.title = title

    def render(self, fmt: str) -> str:
        if fmt == "csv":
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(self.headers)
            w.writerows(self.rows)
            return buf.getvalue()
        if fmt == "json":
            doc = [dict(zip(self.headers, r)) for r in self.rows]
            return json.dumps(doc, indent=1) + "\n"
        widths = [max(len(h), *(len(r[i]) for r in self.rows)) if self.rows else len(h) for i, h in enumerate(self.headers)]
        lines = [self.title] if self.title else []
        lines.append("  ".join(h.rjust(w) for h, w in zip(self.headers, widths)))
        lines += ["  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in self.rows]
        return "\n".join(lines) + "\n"


def sci(x, digits: int) -> str:
    """Scientific notation with ``digits`` significant digits, always with an exponent."""
    x = mpmath.mpf(x)
    if x == 0:
        return "0." + "0" * (digits - 1) + "e+0"
    d = Decimal(mpmath.nstr(x, digits + 2, strip_zeros=False))
    return format(d, f".{digits - 1}e")


def rational(q) -> str:
    return exact.format_rational(Fraction(q))


def _digits(bits: int) -> int:
    return max(6, min(30, int(bits * 0.30103) - 2))


def load_lattice(args) -> Lattice:
    if args.file:
        return read_lattice(args.file)
    if not args.lattice:
        raise DomainError("give --lattice NAME or --file PATH")
    return catalog_lattice(args.lattice, args.dim)


def cmd_catalog(args) -> Table:
    rows = []
    for name in CATALOG_NAMES:
        L = catalog_lattice(name, args.dim or 4) if name == "Zn" else catalog_lattice(name)
        g = L.gram
        rows.append([name, str(L.n), rational(g.det), str(g.is_even).lower(), L.provenance[0]])
    return Table(["name", "dim", "det", "even", "provenance"], rows)


def cmd_shells(args) -> Table:
    L = load_lattice(args)
    shells = first_k_shells(L, args.depth, args.budget, keep_vectors=False)
    rows = [[str(s.index), rational(s.norm), str(s.cardinality)] for s in shells]
    return Table(["k", "m_k", "a_k"], rows, f"# {L.name}")


def cmd_design(args) -> Table:
    L = load_lattice(args)
    rep = certify_lattice(L, args.depth, args.t, args.budget)
    ts = [t for t in (2, 4, 6) if t <= args.t]
    headers = ["k", "m_k", "a_k"] + [f"t{t}" for t in ts] + [f"defect_t{t}" for t in ts]
    rows = []
    for c in rep.certificates:
        ok = c.passes
        rows.append(
            [str(c.index), rational(c.norm), str(c.cardinality)]
            + ["pass" if ok[t] else "fail" for t in ts]
            + [rational(c.defects[t]) for t in ts]
        )
    return Table(headers, rows, f"# {L.name}")


def cmd_zeta(args) -> Table:
    L = load_lattice(args)
    if not args.s:
        raise DomainError("zeta needs at least one --s")
    d = _digits(args.precision_bits)
    rows = []
    for s in args.s:
        v = zeta(L, s, args.tol, args.budget, args.precision_bits, strict=False)
        rows.append([sci(s, 6), sci(v.value, d), sci(v.err, 3)])
    return Table(["s", "zeta", "err"], rows, f"# {L.name}")


def cmd_theta(args) -> Table:
    L = load_lattice(args)
    if not args.y:
        raise DomainError("theta needs at least one --y")
    d = _digits(args.precision_bits)
    rows = []
    for y in args.y:
        v = theta(L, y, args.tol, args.budget, args.precision_bits, strict=False)
        S = theta_min_sum(L, y, args.tol, args.budget, args.precision_bits, strict=False)
        rows.append([sci(y, 6), sci(v.value, d), sci(v.err, 3), sci(S.value, d), sci(S.err, 3), str(S.sign)])
    return Table(["y", "theta", "err", "S", "S_err", "S_sign"], rows, f"# {L.name}")


def cmd_strip(args) -> Table:
    L = load_lattice(args)
    scan = strip_scan(L, args.points, args.tol, args.budget, args.precision_bits)
    d = _digits(args.precision_bits)
    rows = [[sci(s, 8), sci(v.value, d), sci(v.err, 3), str(v.sign)] for s, v in zip(scan.grid, scan.values)]
    return Table(["s", "zeta", "err", "sign"], rows, f"# {L.name}: {scan.summary}")


def cmd_extremality(args):
    from .extremality import extremality_report

    L = load_lattice(args)
    if not args.s:
        raise DomainError("extremality needs at least one --s")
    rep = extremality_report(L, args.s, depth=args.depth, seed=args.seed, step=args.step, tol=args.tol, budget=args.budget)
    if args.format == "table":
        return "\n".join(rep.lines()) + "\n"
    rows = []
    for v in rep.verdicts:
        f = v.fit
        extra = ["", "", "", ""] if f is None else [sci(f.quadratic, 12), sci(f.quadratic_err, 3), sci(f.predicted, 12), sci(f.gap, 3)]
        rows.append([sci(v.s, 6), v.answer, v.reason] + extra)
    return Table(["s", "verdict", "reason", "fitted", "fitted_err", "predicted", "gap"], rows)


COMMANDS = {
    "catalog": cmd_catalog,
    "shells": cmd_shells,
    "design": cmd_design,
    "zeta": cmd_zeta,
    "theta": cmd_theta,
    "strip": cmd_strip,
    "extremality": cmd_extremality,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="latzeta", description="Lattice shells, designs and zeta/theta extremality checks.")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--lattice", help="catalog name (" + ", ".join(CATALOG_NAMES) + ")")
    p.add_argument("--file", help="lattice JSON document")
    p.add_argument("--dim", type=int, help="dimension for Zn")
    p.add_argument("--depth", type=int, default=3, help="number of shells")
    p.add_argument("--t", type=int, default=4, choices=(2, 4, 6), help="largest design strength checked")
    p.add_argument("--s", type=float, action="append", help="zeta argument (repeatable)")
    p.add_argument("--y", type=float, action="append", help="theta argument (repeatable)")
    p.add_argument("--precision-bits", type=int, default=128)
    p.add_argument("--tol", type=float, default=1e-12, help="truncation tolerance")
    p.add_argument("--points", type=int, default=37, help="strip grid size")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--step", type=float, default=1e-3, help="path step for variation fits")
    p.add_argument("--budget", type=int, default=CLI_BUDGET, help="max lattice vectors visited")
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--format", choices=("table", "csv", "json"), default="table")
    p.add_argument("--out", help="write output here instead of stdout")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.threads is not None:
        numba.set_num_threads(max(1, min(args.threads, numba.config.NUMBA_NUM_THREADS)))
    try:
        result = COMMANDS[args.command](args)
    except LatticeError as exc:
        print(f"latzeta: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"latzeta: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = result if isinstance(result, str) else result.render(args.format)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
