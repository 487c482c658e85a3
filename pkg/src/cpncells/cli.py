"""Command-line interface: ``cpncells build | verify | report``.

Exit codes: 0 success, 1 a verification check failed, 2 capacity or
configuration error, 3 internal inconsistency.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from .checks import (
    BOUNDS,
    CHECK_NAMES,
    TARGETS,
    CheckResult,
    Verifier,
    build_target,
    check_bounds,
    format_table,
    run_checks,
)
from .complex_core import dumps_gcx, f_vector, loads_gcx
from .derived import derived_f_vector
from .errors import CapacityExceeded, ConstructionInconsistency, CpnCellsError, IllDefinedGluing, NotGood
from .gem_io import complex_to_gem, export_gem
from .homology import homology

THREADS_ENV = "CPNCELLS_THREADS"
EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_INTERNAL = 0, 1, 2, 3

log = logging.getLogger("cpncells")


def _n_range(text: str) -> list[int]:
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            out = list(range(int(lo), int(hi) + 1))
        else:
            out = [int(text)]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N or A..B, got {text!r}") from None
    if not out:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return out


def _default_threads() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cpncells", description="Build and certify simplicial cell decompositions.")
    p.add_argument("-v", "--verbose", action="count", default=0, help="more logging on standard error")
    p.add_argument("--threads", type=int, default=None,
                   help=f"worker threads (default ${THREADS_ENV} or 1); output does not depend on it")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="construct a complex and write it out")
    b.add_argument("--target", choices=TARGETS, required=True)
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--format", choices=("gcx", "gem", "fvector", "homology-report"), default="gcx")
    b.add_argument("-o", "--output", type=Path, help="output file (default: standard output)")

    v = sub.add_parser("verify", help="run the certificate suite")
    v.add_argument("--target", choices=TARGETS)
    v.add_argument("--n", type=int)
    v.add_argument("--input", type=Path, help="GCX file to verify instead of building the target")
    group = v.add_mutually_exclusive_group()
    group.add_argument("--checks", help="comma-separated subset of: " + ",".join(CHECK_NAMES))
    group.add_argument("--all", action="store_true", help="run every check (the default)")
    v.add_argument("--budget-seconds", type=float, default=None, help="soft time cap; later checks are skipped")
    v.add_argument("--max-derived-facets", type=int, default=200_000,
                   help="largest explicit derived subdivision to build")

    r = sub.add_parser("report", help="print tables of f-vectors, derived f-vectors or homology")
    r.add_argument("--table", choices=("fvectors", "derived", "homology"), required=True)
    r.add_argument("--n", type=_n_range, default=[1, 2, 3, 4], help="N or A..B (default 1..4)")
    return p


def _write(text: str, path: Path | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        path.write_text(text, encoding="utf-8", newline="\n")


def _fmt(vec) -> str:
    return "(" + ", ".join(map(str, vec)) + ")"


def cmd_build(args) -> int:
    c = build_target(args.target, args.n)
    if args.format == "gcx":
        text = dumps_gcx(c)
    elif args.format == "gem":
        text = export_gem(complex_to_gem(c))
    elif args.format == "fvector":
        text = ",".join(map(str, f_vector(c))) + "\n"
    else:
        text = homology(c).report()
    _write(text, args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    names = CHECK_NAMES
    if args.checks:
        names = tuple(x.strip() for x in args.checks.split(",") if x.strip())
        unknown = [x for x in names if x not in CHECK_NAMES]
        if unknown:
            raise ValueError(f"unknown check(s) {','.join(unknown)}; choose from {','.join(CHECK_NAMES)}")
    if (args.target is None) != (args.n is None):
        raise ValueError("--target and --n go together")
    if args.input is None and args.target is None:
        raise ValueError("give --target/--n or --input")

    def progress(msg: str) -> None:
        print(f"[verify] {msg}", file=sys.stderr, flush=True)

    if args.input is not None:
        if args.target is not None:
            check_bounds(args.target, args.n)
        try:
            c = loads_gcx(args.input.read_text(encoding="utf-8"))
        except CpnCellsError as exc:
            sys.stdout.write(format_table([CheckResult("load", "FAIL", f"{type(exc).__name__}: {exc}")]))
            return EXIT_FAIL
    else:
        progress(f"building {args.target} n={args.n}")
        c = build_target(args.target, args.n)
    v = Verifier(c, args.target, args.n, derived_cap=args.max_derived_facets)
    results = run_checks(v, names, args.budget_seconds, progress)
    sys.stdout.write(format_table(results))
    if any(r.status == "FAIL" for r in results):
        return EXIT_FAIL
    if any(r.detail == "time budget exhausted" for r in results):
        return EXIT_CONFIG
    return EXIT_OK


def cmd_report(args) -> int:
    ns = args.n
    lo, hi = BOUNDS["cpn"]
    bad = [n for n in ns if not lo <= n <= hi]
    if bad:
        raise CapacityExceeded(f"report tables support {lo} <= n <= {hi}")
    lines = []
    if args.table == "fvectors":
        for n in ns:
            lines.append(f"f(X^{n}) = {_fmt(f_vector(build_target('sphere-product', n)))}")
        for n in ns:
            lines.append(f"f(T_{n}) = {_fmt(f_vector(build_target('cpn', n)))}")
        note = "X^n: staircase decomposition of (S^2)^n; T_n = X^n/Sym(n), a decomposition of CP^n."
    elif args.table == "derived":
        for n in ns:
            lines.append(f"f((T_{n})') = {_fmt(derived_f_vector(f_vector(build_target('cpn', n))))}")
        note = "Derived f-vectors from the surjection-count formula applied to f(T_n)."
    else:
        for n in ns:
            h = homology(build_target("cpn", n))
            tors = "" if h.torsion_free else "  torsion " + _fmt(h.torsion)
            lines.append(f"betti(T_{n}) = {_fmt(h.betti)}{tors}")
        note = "Integral homology by exact Smith normal form."
    _write("\n".join(lines) + f"\n\n* {note}\n", None)
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    threads = args.threads if args.threads is not None else _default_threads()
    log.debug("threads=%d (computation is single-process and deterministic)", threads)
    handler = {"build": cmd_build, "verify": cmd_verify, "report": cmd_report}[args.command]
    try:
        return handler(args)
    except (CapacityExceeded, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ConstructionInconsistency, IllDefinedGluing, NotGood) as exc:
        print(f"internal inconsistency: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except CpnCellsError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
