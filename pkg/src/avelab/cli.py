"""Command-line interface.

Exit codes: 0 success, 1 bad input, 2 undecided, 3 solution set proven empty.
"""

import argparse
import csv
import io
import sys
import time

import numpy as np

from . import instance_io
from .classify import DEFAULT_CONVEXITY_LIMIT
from .core import DEFAULT_ENUM_LIMIT, AveInstance, enumerate_solution_set
from . import oracle
from .report import classify_all
from .solvers import solve_auto

EXIT_OK, EXIT_INPUT, EXIT_UNDECIDED, EXIT_EMPTY = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _common(p):
    p.add_argument("path", help="instance file")
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--enum-limit", type=int, default=DEFAULT_ENUM_LIMIT)
    p.add_argument("--convexity-limit", type=int, default=DEFAULT_CONVEXITY_LIMIT)
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json")
    fmt.add_argument("--csv", dest="fmt", action="store_const", const="csv")
    p.set_defaults(fmt="json")
    p.add_argument("--timing", action="store_true", help="include wall-clock seconds")
    p.add_argument("--seed", type=int, default=None)


def build_parser():
    parser = _Parser(prog="avelab", description="Absolute value equations A x + |x| = b.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="solve an instance")
    _common(p)
    p = sub.add_parser("classify", help="classify the matrix of an instance")
    _common(p)
    p = sub.add_parser("export-pieces", help="CSV of solution-set pieces (n = 2)")
    p.add_argument("path")
    p.add_argument("-o", "--out", default="-")
    p.add_argument("--enum-limit", type=int, default=DEFAULT_ENUM_LIMIT)

    p = sub.add_parser("gen", help="generate an instance file")
    p.add_argument("kind", choices=["subset-sum", "convexity-gadget", "inverse-nonneg", "random"])
    p.add_argument("--v", help="comma-separated natural numbers")
    p.add_argument("--n", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--out", default="-")
    return parser


def _write(text, out):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _load(path, require_b=True):
    try:
        return instance_io.read(path, require_b)
    except instance_io.InstanceParseError as exc:
        print(f"{path}:{exc}", file=sys.stderr)
    except OSError as exc:
        print(f"{path}: {exc.strerror}", file=sys.stderr)
    return None


def _echo(inst, meta):
    return {"n": inst.n, "A": inst.A, "b": inst.b, **meta}


def cmd_solve(args):
    loaded = _load(args.path)
    if loaded is None:
        return EXIT_INPUT
    inst, meta = loaded
    t0 = time.perf_counter()
    out = solve_auto(inst, args.enum_limit, args.tol)
    elapsed = time.perf_counter() - t0
    code = {"solved": EXIT_OK, "enumerated": EXIT_OK, "empty": EXIT_EMPTY}.get(out.status,
                                                                              EXIT_UNDECIDED)
    if args.fmt == "csv":
        if out.method == "enumeration":
            sys.stdout.write(pieces_csv(out.solution.pieces, inst.n))
        else:
            w = csv.writer(sys.stdout, lineterminator="\n")
            w.writerow(["method", "status"] + [f"x{i + 1}" for i in range(inst.n)])
            x = out.point
            w.writerow([out.method, out.status]
                       + ([instance_io.format_number(v) for v in x] if x is not None else []))
        return code
    doc = {"instance": _echo(inst, meta), "outcome": out.to_dict()}
    if args.timing:
        doc["timing"] = {"seconds": elapsed}
    sys.stdout.write(instance_io.dumps(doc) + "\n")
    return code


def cmd_classify(args):
    loaded = _load(args.path, require_b=False)
    if loaded is None:
        return EXIT_INPUT
    inst, meta = loaded
    t0 = time.perf_counter()
    rep = classify_all(inst.A, args.enum_limit, args.convexity_limit)
    elapsed = time.perf_counter() - t0
    if args.fmt == "csv":
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(["predicate", "value", "method"])
        for k, v in rep.items():
            w.writerow([k, "unknown" if v.value is None else str(v.value).lower(), v.method])
        return EXIT_OK
    doc = {"instance": _echo(inst, meta), "classification": rep.to_dict()}
    if args.timing:
        doc["timing"] = {"seconds": elapsed}
    sys.stdout.write(instance_io.dumps(doc) + "\n")
    return EXIT_OK


def _points(vs):
    return ";".join(" ".join(instance_io.format_number(c) for c in v) for v in vs)


def pieces_csv(pieces, n):
    """CSV text: one row per nonempty piece, in lexicographic orthant order."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([f"s{i + 1}" for i in range(n)] + ["status", "dim", "vertices", "rays"])
    for p in pieces:
        w.writerow([int(v) for v in p.s] + [p.status, p.dim, _points(p.vertices), _points(p.rays)])
    return buf.getvalue()


def cmd_export_pieces(args):
    loaded = _load(args.path)
    if loaded is None:
        return EXIT_INPUT
    inst, _ = loaded
    if inst.n != 2:
        print(f"{args.path}: export-pieces needs n = 2, got n = {inst.n}", file=sys.stderr)
        return EXIT_INPUT
    desc = enumerate_solution_set(inst, args.enum_limit)
    _write(pieces_csv(desc.pieces, 2), args.out)
    return EXIT_OK


def _parse_v(text):
    try:
        v = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise ValueError("--v must be comma-separated natural numbers") from None
    if not v or any(t < 0 for t in v):
        raise ValueError("--v must be comma-separated natural numbers")
    return v


def generate(kind, v=None, n=None, seed=0):
    """``(instance, metadata)`` for one of the generator kinds."""
    meta = {"name": kind, "kind": kind, "seed": seed}
    if kind in ("subset-sum", "convexity-gadget"):
        if v is None:
            raise ValueError(f"{kind} needs --v")
        vv = _parse_v(v) if isinstance(v, str) else list(v)
        meta["v"] = vv
        case = oracle.subset_sum_instance(vv)
        if kind == "subset-sum":
            inst = AveInstance(case.A, np.zeros(len(vv)))
            meta["expected_finiteness"] = case.expected_finiteness
            meta["expected_boundedness"] = case.expected_boundedness
            meta["witness"] = None if case.witness is None else [int(s) for s in case.witness]
        else:
            inst = oracle.convexity_gadget(vv)
            meta["expected_convex"] = case.witness is None
        return inst, meta
    if n is None or n < 1:
        raise ValueError(f"{kind} needs --n >= 1")
    if kind == "inverse-nonneg":
        inst = oracle.inverse_nonneg_generator(n, seed)
        meta["expected_inverse_nonneg"] = oracle.kuttler_check(inst.A)
        return inst, meta
    if kind == "random":
        return oracle.random_instance(n, seed), meta
    raise ValueError(f"unknown kind {kind!r}")


def cmd_gen(args):
    try:
        inst, meta = generate(args.kind, args.v, args.n, args.seed)
    except ValueError as exc:
        print(f"avelab gen: {exc}", file=sys.stderr)
        return EXIT_INPUT
    _write(instance_io.emit(inst, meta), args.out)
    return EXIT_OK


COMMANDS = {"solve": cmd_solve, "classify": cmd_classify,
            "export-pieces": cmd_export_pieces, "gen": cmd_gen}


def main(argv=None):
    args = build_parser().parse_args(argv)
    return COMMANDS[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
