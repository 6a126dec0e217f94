"""Command-line interface. Exit codes: 0 success, 1 semantic negative, 2 usage or I/O error."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .arith import SearchCeilingExceeded, parse_rational
from .calculus import InadmissibleTriple, Triple, UnsupportedTriple, derive_period_index, is_admissible
from .certificates import BundleError, CertificateBundle, forge_bundle, pipeline_bundle, verify_bundle, write_atomic
from .curves import HyperellipticModel, poly_str, reduce_mod_p
from .forge import ForgeError
from .local import CertificateError, count_affine_points, qp_points_exist
from .tracecheck import check_trace

OK, NEGATIVE, USAGE = 0, 1, 2


def _rational(text: str):
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _coeffs(text: str):
    try:
        return [parse_rational(t) for t in text.replace(",", " ").split()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def cmd_admissible(args) -> int:
    ok, failed = is_admissible(Triple(args.g, args.P, args.I))
    if ok:
        print(f"({args.g}, {args.P}, {args.I}) is admissible")
        return OK
    print(f"({args.g}, {args.P}, {args.I}) is not admissible")
    for f in failed:
        print(f"  violated: {f}")
    return NEGATIVE


def cmd_derive(args) -> int:
    try:
        trace = derive_period_index(Triple(args.g, args.P, args.I))
    except (InadmissibleTriple, UnsupportedTriple) as exc:
        print(f"rejected: {exc}", file=sys.stderr)
        return NEGATIVE
    steps = [s.to_json() for s in trace.steps]
    env = check_trace(steps)
    print(f"case {trace.case}: m = {trace.setup.m}, P^ = {trace.setup.P_hat}, I^ = {trace.setup.I_hat}, ell = {trace.setup.ell}")
    for h in trace.hypotheses:
        print(f"  assumes: {h}")
    print(f"conclusion: P(Y) = {env['P_Y']}, I(Y) = {env['I_Y']}, g(Y) = {env['g_Y']} ({len(steps)} steps checked)")
    if args.trace:
        write_atomic(args.trace, json.dumps(steps, indent=2, sort_keys=True) + "\n")
    return OK


def _emit(bundle: CertificateBundle, out: str) -> None:
    write_atomic(out, bundle.dumps())
    print(f"wrote {out}")


def cmd_forge(args) -> int:
    case = int(args.case[-1])
    try:
        bundle = forge_bundle(case, args.b, args.c, args.a, args.bound)
    except (ForgeError, CertificateError, SearchCeilingExceeded, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return NEGATIVE
    art = bundle.artifacts
    print(f"y^2 = {poly_str(list(art['model'].coeffs))}")
    concl = bundle.conclusions
    print(f"(P, I) = ({concl['period']}, {concl['index']})")
    if "deficiency_report" in art:
        rep = art["deficiency_report"]
        places = ", ".join(p.to_json() for p in rep.deficient_places)
        print(f"{len(rep.certificates)} place certificates; deficient at: {places}")
    if art["params"].pi:
        print(f"pi = {art['params'].pi}, alpha = {art['params'].alpha}")
    _emit(bundle, args.out or f"forge-case{case}-b{args.b}-c{args.c}.json")
    return OK


def cmd_verify(args) -> int:
    try:
        text = Path(args.bundle).read_text(encoding="utf-8")
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    try:
        bundle = CertificateBundle.loads(text)
    except BundleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return NEGATIVE
    problems = verify_bundle(bundle)
    if problems:
        for p in problems:
            print(p)
        print("verification FAILED")
        return NEGATIVE
    print("verification OK")
    return OK


def cmd_pipeline(args) -> int:
    try:
        bundle = pipeline_bundle(args.g, args.P, args.I, args.b, args.c, args.bound)
    except (InadmissibleTriple, UnsupportedTriple, ForgeError, CertificateError) as exc:
        print(f"rejected: {exc}", file=sys.stderr)
        return NEGATIVE
    art = bundle.artifacts
    print(f"case {art['case']}: genus-2 ingredient from forge case {art['genus2_ingredient']['forge_case']}")
    c = bundle.conclusions
    print(f"conclusion: (g, P, I) = ({c['genus']}, {c['period']}, {c['index']})")
    _emit(bundle, args.out or f"pipeline-{args.g}-{args.P}-{args.I}.json")
    return OK


def cmd_localtest(args) -> int:
    f = args.coeffs
    try:
        res = qp_points_exist(f, args.p)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    print(f"Q_{args.p} points: {'yes' if res.exists else 'no'}")
    shown = {k: v for k, v in res.evidence.items() if k != "trace"}
    print("evidence: " + json.dumps(shown, sort_keys=True, default=str))
    try:
        fbar, reduced, k = reduce_mod_p(HyperellipticModel(f), args.p)
    except ValueError as exc:
        print(f"no reduction: {exc}")
    else:
        if reduced:
            total, smooth = count_affine_points(fbar, args.p)
            print(f"affine points mod {args.p}: {total} ({smooth} smooth)")
        else:
            print(f"reduction mod {args.p} is zero")
    return OK if res.exists else NEGATIVE


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pix", description="Period and index certificates for curves over Q")
    sub = ap.add_subparsers(dest="command", required=True)

    def triple(p):
        p.add_argument("g", type=int)
        p.add_argument("P", type=int)
        p.add_argument("I", type=int)

    p = sub.add_parser("admissible", help="check the global divisibility conditions")
    triple(p)
    p.set_defaults(func=cmd_admissible)

    p = sub.add_parser("derive", help="derive (P, I) of the fiber-product curve and check the trace")
    triple(p)
    p.add_argument("--trace", metavar="OUT", help="write the trace steps as JSON")
    p.set_defaults(func=cmd_derive)

    p = sub.add_parser("forge", help="construct a genus-2 curve with certificates")
    p.add_argument("case", choices=["case1", "case2", "case3"])
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--c", type=int, required=True)
    p.add_argument("--a", type=_rational, default=None, help="case 1 parameter")
    p.add_argument("--bound", type=int, default=1000, help="explicit place enumeration bound (case 2)")
    p.add_argument("--out", help="bundle path")
    p.set_defaults(func=cmd_forge)

    p = sub.add_parser("verify", help="re-check a certificate bundle")
    p.add_argument("bundle")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("pipeline", help="derivation plus the matching genus-2 certificate")
    triple(p)
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--c", type=int, required=True)
    p.add_argument("--bound", type=int, default=1000)
    p.add_argument("--out", help="bundle path")
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("localtest", help="Q_p points and F_p point count of y^2 = f(z)")
    p.add_argument("--coeffs", type=_coeffs, required=True, help="coefficients of f, constant term first")
    p.add_argument("--p", type=int, required=True)
    p.set_defaults(func=cmd_localtest)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except BundleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return NEGATIVE


if __name__ == "__main__":
    sys.exit(main())
