"""diophfp command line: counts, formulas, coefficients, fiber tables,
tuple construction and the verification suites.

Exit codes: 0 success (or all checks pass), 1 a verification check failed,
2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from . import __version__
from .dioph import build_graph, construct_tuple, count_tuples, enumerate_tuples, formula_count, is_diophantine, theorem_bound
from .ec_fibers import fiber_table, w1, w_table_from_fibers
from .ff_core import is_prime, odd_primes, prime_context
from .modforms import CM_FORMS, ETA_SPECS, cm_coeff, coeff_bundle, default_cache, DEFAULT_N_MAX
from .verify import SUITES, VerifyConfig, json_safe, report_json, run_suites

# brute-force clique search beyond this is impractical for m >= 4
COUNT_P_MAX = 5000
FIBER_HEADER = ["t", "P", "full2", "halvable", "halving_square", "xR_square",
                "T0", "T1", "T2", "T3", "T4", "T5", "case", "W"]


def _odd_prime(text: str) -> int:
    try:
        p = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer")
    if p < 3 or not is_prime(p):
        raise argparse.ArgumentTypeError(f"{p} is not an odd prime")
    return p


def _positive(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer")
    if n < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return n


def _flag(v: bool) -> int:
    return int(bool(v))


class Output:
    """Collects one document (rows for CSV, a dict for JSON) and writes it."""

    def __init__(self, fmt: str, path: str | None):
        self.fmt = fmt
        self.path = path

    def emit(self, header: list[str], rows: list[list], doc: dict) -> None:
        if self.fmt == "json":
            text = json.dumps(json_safe(doc), indent=2) + "\n"
        else:
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(header)
            w.writerows(rows)
            text = buf.getvalue()
        self.write(text)

    def write(self, text: str) -> None:
        if self.path:
            with open(self.path, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)


def _tuple_text(t) -> str:
    return " ".join(str(x) for x in t)


def cmd_count(args, out: Output) -> int:
    if args.p > COUNT_P_MAX:
        raise UsageError(f"--p above {COUNT_P_MAX} is outside the brute-force range")
    g = build_graph(prime_context(args.p))
    n = count_tuples(g, args.m, workers=args.jobs).count
    doc = {"p": args.p, "m": args.m, "count": n}
    if not args.list:
        out.emit(["p", "m", "count"], [[args.p, args.m, n]], doc)
        return 0
    tuples = enumerate_tuples(g, args.m, args.limit)
    doc["tuples"] = [list(t) for t in tuples]
    rows = [[args.p, args.m, n, _tuple_text(t)] for t in tuples]
    out.emit(["p", "m", "count", "tuple"], rows, doc)
    return 0


def cmd_formula(args, out: Output) -> int:
    if args.m not in (2, 3, 4):
        raise UsageError("closed formulas exist for m in {2, 3, 4}")
    if args.m < 4:
        n = formula_count(args.p, args.m).count
        out.emit(["p", "m", "count"], [[args.p, args.m, n]], {"p": args.p, "m": args.m, "count": n})
        return 0
    b = coeff_bundle(args.p)
    n = formula_count(args.p, 4, b.q).count
    doc = {"p": args.p, "m": 4, "count": n, "a": b.a, "b": b.b, "c": b.c, "d": b.d, "e": b.e, "q": b.q}
    out.emit(list(doc), [list(doc.values())], doc)
    return 0


def cmd_coeff(args, out: Output) -> int:
    if args.method == "cm" and args.form not in CM_FORMS:
        raise UsageError(f"{args.form} has no CM closed form; use --method eta")
    primes = odd_primes(args.pmax)
    if args.method == "eta":
        cache = default_cache(max(DEFAULT_N_MAX, args.pmax))
        vals = [cache.coeff(args.form, p) for p in primes]
    else:
        vals = [cm_coeff(args.form, p) for p in primes]
    rows = [[p, v] for p, v in zip(primes, vals)]
    doc = {"form": args.form, "method": args.method, "pmax": args.pmax, "rows": rows}
    out.emit(["p", "coefficient"], rows, doc)
    return 0


def cmd_fibers(args, out: Output) -> int:
    ctx = prime_context(args.p)
    table = fiber_table(ctx)
    rows = []
    for r in table:
        rows.append([r.t, r.P, _flag(r.full2), _flag(r.halvable), _flag(r.halving_square),
                     _flag(r.xR_square), *map(_flag, r.memberships()), r.case, r.W])
    w_one = w1(args.p)
    total = w_table_from_fibers(ctx, table).total()
    doc = {
        "p": args.p,
        "header": FIBER_HEADER,
        "rows": rows,
        "W1": w_one,
        "N4": total,
        "row_count": len(rows),
    }
    blank = [""] * (len(FIBER_HEADER) - 3)
    summary = [[1, *blank, "product_one", w_one], ["total", *blank, "N4", total]]
    out.emit(FIBER_HEADER, rows + summary, doc)
    return 0


def cmd_construct(args, out: Output) -> int:
    ctx = prime_context(args.p)
    tup = construct_tuple(ctx, args.m)
    bound = theorem_bound(args.m)
    if tup is not None and not is_diophantine(tup, ctx):
        raise RuntimeError(f"constructed tuple {tup} failed verification")
    doc = {
        "p": args.p,
        "m": args.m,
        "found": tup is not None,
        "tuple": list(tup) if tup is not None else None,
        "bound": bound,
        "bound_exceeded": args.p > bound,
    }
    row = [args.p, args.m, _flag(tup is not None), _tuple_text(tup) if tup else "none found",
           bound, _flag(args.p > bound)]
    out.emit(["p", "m", "found", "tuple", "bound", "bound_exceeded"], [row], doc)
    return 0


def cmd_verify(args, out: Output) -> int:
    cfg = VerifyConfig.capped(args.pmax, args.jobs)
    suites = SUITES if args.suite == "all" else (args.suite,)
    report = run_suites(cfg, suites, args.pmax)
    report.config["suite"] = args.suite
    out.write(report_json(report) + "\n")
    failed = [r for r in report.results if r.status != "pass"]
    for r in failed:
        ps = sorted({f.p for f in r.failures})
        print(f"FAIL {r.name}: {len(r.failures)} failure(s) at p = {ps[:10]}", file=sys.stderr)
    return 1 if failed else 0


class UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", metavar="PATH", help="write output here instead of stdout")

    ap = argparse.ArgumentParser(prog="diophfp", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("count", parents=[common], help="brute-force count of Diophantine m-tuples")
    s.add_argument("--p", type=_odd_prime, required=True)
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--list", action="store_true", help="also list the first tuples")
    s.add_argument("--limit", type=int, default=10)
    s.add_argument("--jobs", type=_positive, default=1)
    s.set_defaults(func=cmd_count)

    s = sub.add_parser("formula", parents=[common], help="closed-form count for m = 2, 3, 4")
    s.add_argument("--p", type=_odd_prime, required=True)
    s.add_argument("--m", type=int, required=True)
    s.set_defaults(func=cmd_formula)

    s = sub.add_parser("coeff", parents=[common], help="prime coefficients of f1..f5")
    s.add_argument("--form", choices=sorted(ETA_SPECS), required=True)
    s.add_argument("--pmax", type=_positive, required=True)
    s.add_argument("--method", choices=("eta", "cm"), default="eta")
    s.set_defaults(func=cmd_coeff)

    s = sub.add_parser("fibers", parents=[common], help="per-fiber classification table")
    s.add_argument("--p", type=_odd_prime, required=True)
    s.set_defaults(func=cmd_fibers)

    s = sub.add_parser("construct", parents=[common], help="build a Diophantine m-tuple")
    s.add_argument("--p", type=_odd_prime, required=True)
    s.add_argument("--m", type=int, required=True)
    s.set_defaults(func=cmd_construct)

    s = sub.add_parser("verify", help="run verification suites, JSON report")
    s.add_argument("--pmax", type=_positive, default=None, help="cap every sweep bound at this value")
    s.add_argument("--suite", choices=("all",) + SUITES, default="all")
    s.add_argument("--jobs", type=_positive, default=1)
    s.add_argument("--out", metavar="PATH")
    s.set_defaults(func=cmd_verify, format="json")
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if getattr(args, "m", 2) < 2:
        ap.error("--m must be at least 2")
    if getattr(args, "limit", 0) < 0:
        ap.error("--limit must be non-negative")
    try:
        return args.func(args, Output(args.format, args.out))
    except UsageError as exc:
        ap.error(str(exc))


if __name__ == "__main__":
    sys.exit(main())
