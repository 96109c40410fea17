"""Command-line front end: ``rackd classify`` and ``rackd twisted``.

Reports are JSON with sorted keys (or a one-line text table) and contain no
timing data unless ``--timings`` is given, so runs with the same seed are
byte-identical. Per-class progress goes to stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time

from . import __version__
from .catalog import CatalogError, DataCorruptionError, ParameterError, ambient_pair, load_group
from .permcore import (ClassEnumerationError, PermutationError, conjugacy_class,
                       conjugacy_classes, derived_subgroup, parse_cycles)
from .twisted import (NormalizationError, automorphism_from_conjugator,
                      semidirect_product, twisted_class, verify_class_correspondence)
from .typed import DEFAULT_BUDGET, DEFAULT_ORBIT_CAP, PairCertificate, classify_class
from .verdict import NOT_TYPE_D, UNKNOWN

log = logging.getLogger("rackd")

EXIT_OK, EXIT_ERROR, EXIT_INCOMPLETE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _jsonable(value):
    """Plain JSON types, so that a parsed report compares equal to the original."""
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    return str(value)


def verdict_record(verdict) -> dict:
    rec = {"verdict": verdict.status,
           "proof_method": verdict.proof_method,
           "budget": _jsonable(verdict.budget_spent),
           "details": _jsonable(verdict.details),
           "witness": None}
    cert = verdict.certificate
    if isinstance(cert, PairCertificate):
        rec["witness"] = {"r": str(cert.r), "s": str(cert.s),
                          "orbit_size": cert.orbit_size}
    return rec


# -- classify ---------------------------------------------------------------

def cmd_classify(args) -> dict:
    G = load_group(args.group)
    D = derived_subgroup(G) if G.order > 1 else G
    index_two = G.order == 2 * D.order
    if args.outer_only and not index_two:
        raise UsageError(f"{args.group}: --outer-only needs a derived subgroup of "
                         f"index 2, found index {G.order // D.order}")
    outer_test = (lambda g: not D.contains(g)) if index_two else None
    classes = conjugacy_classes(G, seed=args.seed, outer_test=outer_test)
    records = []
    for c in classes:
        outer = outer_test(c.representative) if outer_test else None
        if args.outer_only and not outer:
            continue
        start = time.perf_counter()
        v = classify_class(G, c, strategy=args.strategy, budget=args.budget_pairs,
                           seed=args.seed, orbit_cap=args.orbit_cap, workers=args.workers)
        elapsed = time.perf_counter() - start
        rec = {"label": c.label, "element_order": c.element_order, "size": c.size,
               "centralizer_order": c.centralizer_order, "outer": outer,
               "representative": str(c.representative),
               "trivial": c.element_order == 1}
        rec.update(verdict_record(v))
        if args.timings:
            rec["wall_time"] = round(elapsed, 3)
        records.append(rec)
        log.info("%s %s size=%d %s %s pairs=%s %.2fs", args.group, c.label, c.size,
                 v.status, v.proof_method or "-", v.budget_spent.get("pairs", 0), elapsed)
    not_d = [r["label"] for r in records if r["verdict"] == NOT_TYPE_D and not r["trivial"]]
    unknown = [r["label"] for r in records if r["verdict"] == UNKNOWN]
    return {"kind": "classification", "tool": "rackd", "version": __version__,
            "group": args.group, "group_order": G.order, "degree": G.degree,
            "scope": "outer" if args.outer_only else "all",
            "seed": args.seed, "strategy": args.strategy,
            "budget_pairs": args.budget_pairs, "orbit_cap": args.orbit_cap,
            "workers": args.workers, "classes": records,
            "not_type_d": not_d, "unknown": unknown, "complete": not unknown}


# -- twisted ----------------------------------------------------------------

def cmd_twisted(args) -> dict:
    G, A = ambient_pair(args.group)
    w = parse_cycles(args.conjugator, G.degree)
    x = parse_cycles(args.rep, G.degree)
    if not G.contains(x):
        raise UsageError(f"representative {x} is not in {args.group}")
    u = automorphism_from_conjugator(G, A, w)
    tc = twisted_class(G, u, x)
    corr = verify_class_correspondence(G, u, x)
    P = semidirect_product(G, u)
    C = conjugacy_class(P, P.element(x, 1))
    start = time.perf_counter()
    v = classify_class(P, C, strategy=args.strategy, budget=args.budget_pairs,
                       seed=args.seed, orbit_cap=args.orbit_cap, workers=args.workers)
    elapsed = time.perf_counter() - start
    log.info("%s twisted by %s at %s: size=%d %s %s %.2fs", args.group, w, x,
             tc.size, v.status, v.proof_method or "-", elapsed)
    report = {"kind": "twisted", "tool": "rackd", "version": __version__,
              "group": args.group, "group_order": G.order, "seed": args.seed,
              "strategy": args.strategy, "budget_pairs": args.budget_pairs,
              "orbit_cap": args.orbit_cap, "workers": args.workers,
              "correspondence": {"holds": corr.holds,
                                 "semidirect_size": corr.semidirect_size,
                                 "twisted_size": corr.twisted_size,
                                 "tables_compared": corr.tables_compared,
                                 "mismatches": corr.mismatches},
              "complete": v.status != UNKNOWN}
    report.update(tc.report())
    report.update(verdict_record(v))
    if args.timings:
        report["wall_time"] = round(elapsed, 3)
    return report


# -- output -----------------------------------------------------------------

def emit_report(report: dict, fmt: str = "json") -> bytes:
    if fmt == "json":
        return (json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False)
                + "\n").encode("utf-8")
    if report["kind"] == "classification":
        labels = ", ".join(report["not_type_d"]) or "none"
        lines = [f"{report['group']} : {labels}"]
        if report["unknown"]:
            lines.append(f"# undecided: {', '.join(report['unknown'])}")
    else:
        lines = [f"{report['group']} twisted by {report['conjugator']} at "
                 f"{report['representative']} : orbit {report['orbit_size']}, "
                 f"{report['verdict']}, checksum {report['rack_checksum']}"]
    return ("\n".join(lines) + "\n").encode("utf-8")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--budget-pairs", type=int, default=DEFAULT_BUDGET,
                        help="pair budget; also the largest class scanned exhaustively")
    common.add_argument("--orbit-cap", type=int, default=DEFAULT_ORBIT_CAP)
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--strategy", choices=["exhaustive", "random", "auto"],
                        default="auto")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--format", choices=["json", "text"], default="json")
    common.add_argument("--timings", action="store_true",
                        help="include wall times in the report")
    common.add_argument("-q", "--quiet", action="store_true",
                        help="no per-class log lines")

    parser = _Parser(prog="rackd", description="Type-D classification of "
                     "conjugacy classes and twisted conjugacy classes.")
    parser.add_argument("--version", action="version", version=f"rackd {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common],
                       help="classify the conjugacy classes of a group")
    p.add_argument("group")
    p.add_argument("--outer-only", action="store_true",
                   help="only classes outside the index-2 derived subgroup")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("twisted", parents=[common],
                       help="classify one twisted conjugacy class")
    p.add_argument("group")
    p.add_argument("--conjugator", required=True,
                   help="element of the ambient group inducing the automorphism")
    p.add_argument("--rep", required=True, help="representative x of the twisted class")
    p.set_defaults(func=cmd_twisted)
    return parser


def _configure_logging(quiet: bool) -> None:
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(message)s"))
    log.handlers[:] = [handler]
    log.setLevel(logging.WARNING if quiet else logging.INFO)
    log.propagate = False


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.workers < 1 or args.budget_pairs < 1 or args.orbit_cap < 1:
        print("rackd: --workers, --budget-pairs and --orbit-cap must be positive",
              file=sys.stderr)
        return EXIT_ERROR
    _configure_logging(args.quiet)
    try:
        report = args.func(args)
    except (CatalogError, DataCorruptionError, ParameterError, NormalizationError,
            PermutationError, ClassEnumerationError, UsageError, ValueError) as e:
        print(f"rackd: error: {e}", file=sys.stderr)
        return EXIT_ERROR
    data = emit_report(report, args.format)
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    if report["kind"] == "twisted" and not report["correspondence"]["holds"]:
        print("rackd: error: class correspondence failed", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_OK if report["complete"] else EXIT_INCOMPLETE


if __name__ == "__main__":
    sys.exit(main())
