"""Command-line driver.

Exit codes: 0 success, 1 a mathematical check failed, 2 bad usage.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import __version__
from .cases import LEMMAS, CaseKind, CaseSpec, build_case, lead_term_lemma_check
from .certify import (
    MAX_DEGREE_ENV,
    _reference_top,
    degree_cap,
    kernel_series,
    nakayama_certify,
    secondary_certify,
    truncation_bound,
)
from .hilbert import NotPolynomialError, format_series, numerator, rank_s
from .poly import GREVLEX, GRLEX, format_poly
from .slices import kernel_slice
from .suite import GROUPS, acceptance_specs, lemma_plan, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

ORDERS = {"grevlex": GREVLEX, "grlex": GRLEX}


class UsageError(Exception):
    pass


def _add_case_args(sp):
    sp.add_argument("--case", required=True, choices=[k.value for k in CaseKind])
    sp.add_argument("--p", type=int, help="characteristic (implied for v3c4)")
    sp.add_argument("--n", type=int, required=True, help="dimension of the Jordan block V_n")


def _add_order(sp):
    sp.add_argument("--order", choices=sorted(ORDERS), default="grevlex", help="monomial order for output")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="modcov", description="Modules of covariants for cyclic p-groups.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="certify the generating set of K_n")
    _add_case_args(v)
    _add_order(v)
    v.add_argument("--json", metavar="PATH", help="write the certificate as JSON")
    v.add_argument("--secondary", action="store_true", help="also certify the secondary invariants")
    v.add_argument("--drop", type=int, action="append", default=[], metavar="I",
                   help="remove candidate I before certifying (repeatable)")
    v.add_argument("--multiply", type=int, action="append", default=[], metavar="I",
                   help="replace candidate I by its product with the lowest-degree hsop element")
    v.add_argument("--quiet", action="store_true", help="print only the verdict")

    s = sub.add_parser("suite", help="run the acceptance matrix and the operator property suites")
    s.add_argument("--max-p", type=int, default=7)
    s.add_argument("--only", help=f"comma-separated subset of: {','.join(GROUPS)}")
    s.add_argument("--samples", type=int, default=500, help="random samples per property suite")
    s.add_argument("--json", metavar="PATH")

    k = sub.add_parser("kernel", help="print an RREF basis of K_n in one degree")
    _add_case_args(k)
    _add_order(k)
    k.add_argument("--degree", type=int, required=True)

    se = sub.add_parser("series", help="truncated Hilbert series of K_n, its numerator and (r, s)")
    _add_case_args(se)
    se.add_argument("--max-degree", type=int)

    le = sub.add_parser("lemmas", help="check the lead-term lemmas")
    le.add_argument("--lemma", choices=LEMMAS, action="append")
    le.add_argument("--p", type=int, action="append", help="restrict to these primes")
    le.add_argument("--samples", type=int, default=200)
    return ap


def _spec(args) -> CaseSpec:
    kind = CaseKind(args.case)
    p = args.p
    if kind is CaseKind.V3C4:
        if p not in (None, 2):
            raise UsageError("v3c4 lives in characteristic 2")
        p = 2
    elif p is None:
        raise UsageError(f"--p is required for --case {kind.value}")
    try:
        return CaseSpec(kind, p, args.n)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _check_env():
    try:
        degree_cap()
    except ValueError as exc:
        raise UsageError(f"{MAX_DEGREE_ENV} must be an integer") from exc


def _mutate(case, drop, multiply):
    cands = list(case.candidates)
    r = len(cands)
    for i in drop + multiply:
        if not 0 <= i < r:
            raise UsageError(f"candidate index {i} out of range 0..{r - 1}")
    g = min(case.hsop, key=lambda h: h.degree)
    for i in multiply:
        cands[i] = cands[i] * g
    return [c for i, c in enumerate(cands) if i not in set(drop)]


def _print_certificate(cert, order, title):
    print(title)
    print("  hsop:       " + ", ".join(format_poly(g, order) for g in cert.case.hsop))
    print(f"  candidates ({len(cert.candidates)}):")
    for g in cert.candidates:
        print(f"    [{g.degree}] {format_poly(g, order)}")
    print("     d   dim M_d   dim A+M_d   cands   ok")
    for r in cert.per_degree:
        print(f"  {r.d:4d} {r.dim_Md:9d} {r.dim_AplusMd:11d} {r.candidates_at_d:7d}   {'yes' if r.ok else 'NO'}")
    ft = cert.freetest
    if ft is not None:
        print(f"  freetest: count={ft.count} r={ft.r} (expected {ft.expected_r}), "
              f"degree sum={ft.degree_sum} s={ft.s} (expected {ft.expected_s})")
    print(f"  verdict: {cert.verdict}")


def cmd_verify(args) -> int:
    spec = _spec(args)
    order = ORDERS[args.order]
    start = time.perf_counter()
    case = build_case(spec)
    cands = _mutate(case, args.drop, args.multiply)
    cert = nakayama_certify(case, cands)
    sec = secondary_certify(case) if (args.secondary or spec.n == 1) else None
    elapsed = (time.perf_counter() - start) * 1000

    if args.quiet:
        print(f"{spec.label()}: {cert.verdict}")
    else:
        _print_certificate(cert, order, f"{spec.label()} (q={spec.prime.q})")
        if sec is not None:
            _print_certificate(sec, order, "secondary invariants")
    if args.json:
        out = {"version": __version__, **cert.to_json(order)}
        if sec is not None:
            out["secondary_certificate"] = sec.to_json(order)
        out["elapsed_ms"] = round(elapsed, 3)
        with open(args.json, "w") as fh:
            json.dump(out, fh, indent=2)
            fh.write("\n")
    ok = cert.verified and (sec is None or sec.verified)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_suite(args) -> int:
    if args.only is None:
        groups = list(GROUPS)
    else:
        groups = [g.strip() for g in args.only.split(",") if g.strip()]
        unknown = [g for g in groups if g not in GROUPS]
        if unknown:
            raise UsageError(f"unknown group(s): {', '.join(unknown)}")
    if not groups or not acceptance_specs(args.max_p):
        raise UsageError("empty selection")
    if args.samples < 1:
        raise UsageError("--samples must be positive")
    start = time.perf_counter()
    results = run_suite(args.max_p, groups, args.samples)
    elapsed = (time.perf_counter() - start) * 1000
    for r in results:
        print(f"{'PASS' if r.ok else 'FAIL'}  {r.group:<13} {r.label}")
    failed = sum(not r.ok for r in results)
    print(f"{len(results) - failed}/{len(results)} passed")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(
                {
                    "version": __version__,
                    "max_p": args.max_p,
                    "groups": groups,
                    "results": [r.to_json() for r in results],
                    "ok": not failed,
                    "elapsed_ms": round(elapsed, 3),
                },
                fh,
                indent=2,
            )
            fh.write("\n")
    return EXIT_FAIL if failed else EXIT_OK


def cmd_kernel(args) -> int:
    spec = _spec(args)
    if args.degree < 0:
        raise UsageError("--degree must be nonnegative")
    order = ORDERS[args.order]
    ks = kernel_slice(build_case(spec).action, spec.n, args.degree, order)
    for f in ks.polys():
        print(format_poly(f, order))
    return EXIT_OK


def cmd_series(args) -> int:
    spec = _spec(args)
    case = build_case(spec)
    top = _reference_top(case, spec.n)
    degrees = case.hsop_degrees
    bound = truncation_bound(top, degrees) if args.max_degree is None else args.max_degree
    need = top + max(degrees)
    if bound < need:
        raise UsageError(f"--max-degree must be at least {need} for this case")
    series = kernel_series(case, spec.n, bound)
    print(f"H(K_{spec.n}, t) = {format_series(series.coeffs)} + O(t^{bound + 1})")
    try:
        f = numerator(series, degrees, top)
    except NotPolynomialError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    rs = rank_s(f)
    print(f"hsop degrees: {degrees}")
    print(f"numerator: {f}")
    print(f"r = {rs.r}, s = {rs.s}")
    return EXIT_OK


def cmd_lemmas(args) -> int:
    plan = lemma_plan(7)
    if args.lemma:
        plan = [(l, p) for l, p in plan if l in args.lemma]
    if args.p:
        plan = [(l, p) for l, p in plan if p in args.p]
    if not plan:
        raise UsageError("empty selection")
    bad = 0
    for lemma, p in plan:
        rep = lead_term_lemma_check(lemma, p, args.samples)
        bad += not rep.ok
        print(f"{'PASS' if rep.ok else 'FAIL'}  {lemma:<13} p={p} order={rep.order.value} checked={rep.checked}")
        for f in rep.failures[:5]:
            print(f"      {f}")
    return EXIT_FAIL if bad else EXIT_OK


COMMANDS = {
    "verify": cmd_verify,
    "suite": cmd_suite,
    "kernel": cmd_kernel,
    "series": cmd_series,
    "lemmas": cmd_lemmas,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        _check_env()
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"modcov {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
