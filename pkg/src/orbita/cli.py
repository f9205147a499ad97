"""Command-line front end.

Every command prints one JSON object on stdout (or ``key: value`` lines with
``--format text``).  Exit codes: 0 success, 1 domain error, 2 unresolved
verdict, 3 a lemma or theorem check failed.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .bounds import bounds_report, candidate_periods
from .corpus import periodic_corpus
from .dynamics import DecideConfig, decide_periodic, orbit_report
from .errors import OrbitaError, TheoremViolation
from .parser import parse_map, parse_point, print_map
from .poly import eval_map, iterate
from .search import FamilySpec, census, max_order_gl, open_question_report
from .theorem import decompose
from .zmod import verify_lemma

EXIT_OK, EXIT_DOMAIN, EXIT_UNRESOLVED, EXIT_VIOLATION = 0, 1, 2, 3

log = logging.getLogger("orbita")


class _Parser(argparse.ArgumentParser):
    # usage errors are domain errors; exit code 2 is reserved for unresolved verdicts
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_DOMAIN, f"{self.prog}: error: {message}\n")


def _load_map(args):
    if args.map_text is not None:
        return parse_map(args.map_text)
    if args.map is None:
        raise OrbitaError("one of --map or --map-text is required")
    return parse_map(Path(args.map).read_text(encoding="utf-8"))


def _config(args) -> DecideConfig:
    kwargs = {}
    if getattr(args, "bound", None):
        kwargs["bound_source"] = args.bound
    if getattr(args, "cap", None):
        kwargs["magnitude_cap"] = args.cap
    if getattr(args, "primes", None):
        primes = tuple(int(p) for p in args.primes.split(","))
        kwargs["primes"] = primes
        kwargs["filter_primes"] = min(len(primes), args.filter_primes or len(primes))
    elif getattr(args, "filter_primes", None):
        kwargs["filter_primes"] = args.filter_primes
    return DecideConfig(**kwargs)


def _family(args) -> FamilySpec:
    return FamilySpec(N=args.dim, degree=args.degree, coeff_bound=args.coeff_bound,
                      point_box=args.point_box, linear_only=args.linear_only)


def cmd_parse(args):
    f = _load_map(args)
    return {"dim": f.dim, "map": print_map(f)}, EXIT_OK


def cmd_eval(args):
    f = _load_map(args)
    P = parse_point(args.point, f.dim)
    Q = eval_map(f, P) if args.steps == 1 else iterate(f, P, args.steps)
    return {"point": list(P), "steps": args.steps, "image": list(Q)}, EXIT_OK


def cmd_period(args):
    f = _load_map(args)
    report = orbit_report(f, parse_point(args.point, f.dim), _config(args))
    code = EXIT_UNRESOLVED if report.status == "unresolved" else EXIT_OK
    return report.to_json(), code


def cmd_decide(args):
    f = _load_map(args)
    decision = decide_periodic(f, parse_point(args.point, f.dim), _config(args))
    code = EXIT_UNRESOLVED if decision.status == "unresolved" else EXIT_OK
    return decision.to_json(), code


def cmd_decompose(args):
    primes = [int(p) for p in args.prime.split(",")]
    if args.corpus:
        pairs = periodic_corpus(args.corpus, args.seed)
        failures = []
        checked = 0
        for index, (f, P) in enumerate(pairs):
            d = decide_periodic(f, P)
            if d.status != "periodic":
                raise TheoremViolation(f"corpus pair {index} is not periodic: {d.status}")
            for p in primes:
                cert = decompose(f, P, p, n=d.primitive_period)
                checked += 1
                if not cert.valid:
                    failures.append({"index": index, "map": print_map(f), "point": list(P),
                                     "p": p, "failed": cert.failed_checks()})
        out = {"seed": args.seed, "pairs": len(pairs), "primes": primes,
               "certificates": checked, "failures": failures}
        return out, EXIT_VIOLATION if failures else EXIT_OK
    f = _load_map(args)
    if args.point is None:
        raise OrbitaError("--point is required unless --corpus is given")
    P = parse_point(args.point, f.dim)
    decision = decide_periodic(f, P, _config(args))
    if decision.status == "unresolved":
        return decision.to_json(), EXIT_UNRESOLVED
    if decision.status != "periodic":
        raise OrbitaError(f"{args.point} is not periodic; no decomposition exists")
    certs = [decompose(f, P, p, n=decision.primitive_period) for p in primes]
    payload = [dict(c.to_json(), valid=c.valid) for c in certs]
    out = payload[0] if len(payload) == 1 else {"certificates": payload}
    return out, EXIT_OK if all(c.valid for c in certs) else EXIT_VIOLATION


def cmd_verify_lemma(args):
    report = verify_lemma(args.dim, args.prime, jobs=args.jobs)
    return report.to_json(), EXIT_OK if report.ok else EXIT_VIOLATION


def cmd_bounds(args):
    return bounds_report(args.dim).to_json(), EXIT_OK


def cmd_candidates(args):
    return {"N": args.dim, "sharp": args.sharp,
            "candidates": candidate_periods(args.dim, sharp=args.sharp)}, EXIT_OK


def cmd_census(args):
    report = census(_family(args), _config(args), jobs=args.jobs, checkpoint=args.checkpoint)
    code = EXIT_UNRESOLVED if report.unresolved else EXIT_OK
    return report.to_json(), code


def cmd_max_order(args):
    return {"n": args.n, "max_order": max_order_gl(args.n)}, EXIT_OK


def cmd_open_question(args):
    report = open_question_report(args.dim, _family(args), _config(args), jobs=args.jobs)
    if report.exceeded:
        print(f"WARNING: census period {report.census_max} exceeds the maximal order "
              f"{report.gl_max} in GL_{args.dim + 1}(Z); re-verified: {report.reverified}",
              file=sys.stderr)
    return report.to_json(), EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--seed", type=int, default=0, help="seed for generated corpora")
    common.add_argument("--jobs", type=int, default=1, help="worker processes")
    common.add_argument("-v", "--verbose", action="store_true")

    map_args = argparse.ArgumentParser(add_help=False)
    map_args.add_argument("--map", help="path to a map file")
    map_args.add_argument("--map-text", help="map given inline")

    decide_args = argparse.ArgumentParser(add_help=False)
    decide_args.add_argument("--bound", choices=("auto", "plane", "divisor", "elementary"))
    decide_args.add_argument("--primes", help="comma-separated escalation primes")
    decide_args.add_argument("--filter-primes", type=int,
                             help="how many primes to sieve with before exact iteration")
    decide_args.add_argument("--cap", type=int, help="magnitude cap in bits")

    family_args = argparse.ArgumentParser(add_help=False)
    family_args.add_argument("--dim", type=int, required=True)
    family_args.add_argument("--degree", type=int, default=1)
    family_args.add_argument("--coeff-bound", type=int, default=1)
    family_args.add_argument("--point-box", type=int, default=1)
    family_args.add_argument("--linear-only", action="store_true")

    parser = _Parser(prog="orbita", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("parse", parents=[common, map_args], help="parse and print a map")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("eval", parents=[common, map_args], help="evaluate f^k at a point")
    p.add_argument("--point", required=True)
    p.add_argument("--steps", type=int, default=1)
    p.set_defaults(func=cmd_eval)

    for name, func, text in (("period", cmd_period, "primitive period and orbit"),
                             ("decide", cmd_decide, "certified periodicity decision")):
        p = sub.add_parser(name, parents=[common, map_args, decide_args], help=text)
        p.add_argument("--point", required=True)
        p.set_defaults(func=func)

    p = sub.add_parser("decompose", parents=[common, map_args, decide_args],
                       help="local-global decomposition certificate")
    p.add_argument("--point")
    p.add_argument("--prime", default="2", help="prime or comma-separated primes")
    p.add_argument("--corpus", type=int, default=0,
                   help="instead of --map/--point, certify a generated corpus of this size")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("verify-lemma", parents=[common], help="exhaustive g(A) sweep")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--prime", type=int, required=True)
    p.set_defaults(func=cmd_verify_lemma)

    p = sub.add_parser("bounds", parents=[common], help="period bounds for dimension N")
    p.add_argument("--dim", type=int, required=True)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("candidates", parents=[common], help="admissible periods")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--sharp", action="store_true", help="use the affine-line bound for N=1")
    p.set_defaults(func=cmd_candidates)

    p = sub.add_parser("census", parents=[common, family_args, decide_args],
                       help="census of periodic orbits over a family")
    p.add_argument("--checkpoint", help="checkpoint file to write and resume from")
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("max-order", parents=[common], help="maximal finite order in GL_n(Z)")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_max_order)

    p = sub.add_parser("open-question", parents=[common, family_args, decide_args],
                       help="census maximum versus maximal order in GL_{N+1}(Z)")
    p.set_defaults(func=cmd_open_question)
    return parser


def flatten(value, prefix=""):
    if isinstance(value, dict) and value:
        for k, v in value.items():
            yield from flatten(v, f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(value, list) and any(isinstance(v, (dict, list)) for v in value):
        for i, v in enumerate(value):
            yield from flatten(v, f"{prefix}[{i}]")
    else:
        yield prefix, json.dumps(value)


def render(payload: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(payload)
    return "\n".join(f"{k}: {v}" for k, v in flatten(payload))


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    try:
        payload, code = args.func(args)
    except TheoremViolation as exc:
        log.error("theorem check failed: %s", exc)
        return EXIT_VIOLATION
    except (OrbitaError, ValueError, OSError) as exc:
        log.error("%s", exc)
        return EXIT_DOMAIN
    print(render(payload, args.format), file=stdout)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
