"""Command-line front end: reduce, certify, shorten, verify, paperchecks, eval."""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import paperchecks
from .certify import Certificate, CertifyError, certify_hypercube
from .circuit import CircuitError
from .hypercube import DEFAULT_CAP, ConstraintSet, DimensionTooLarge, Hypercube, normal_form, parse_cube
from .poly import Poly, PolySyntaxError, parse, render
from .shorten import shorten_certificate
from .verify import verify_certificate

EXIT_OK = 0
EXIT_REJECTED = 1
EXIT_USAGE = 2
EXIT_CAPACITY = 3
MAX_CAP = 24


class UsageError(Exception):
    pass


def load_poly(arg: str, n: int | None = None) -> Poly:
    """A JSON file, a text file, or an inline polynomial."""
    if os.path.exists(arg):
        with open(arg) as fh:
            text = fh.read()
        stripped = text.lstrip()
        if stripped.startswith("{"):
            return Poly.from_json(json.loads(text))
        return parse(text.strip(), n)
    return parse(arg, n)


def load_constraints(path: str | None, n: int) -> ConstraintSet:
    if path is None:
        return ConstraintSet()
    with open(path) as fh:
        return ConstraintSet.from_json(json.load(fh), n)


def _write_json(data, path: str | None):
    text = json.dumps(data, indent=2, sort_keys=False) + "\n"
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _cube(args) -> Hypercube:
    return parse_cube(args.cube)


def _poly_for_cube(args, cube: Hypercube) -> Poly:
    f = load_poly(args.poly, cube.n)
    if f.n != cube.n:
        raise UsageError(f"polynomial has n={f.n}, cube has n={cube.n}")
    return f


def cmd_reduce(args) -> int:
    cube = _cube(args)
    f = _poly_for_cube(args, cube)
    nf = normal_form(f, cube)
    out = {
        "remainder": nf.remainder.to_json(),
        "remainder_text": render(nf.remainder),
        "quotients": [q.to_json() for q in nf.quotients],
    }
    _write_json(out, args.out)
    return EXIT_OK


def cmd_certify(args) -> int:
    cube = _cube(args)
    f = _poly_for_cube(args, cube)
    constraints = load_constraints(args.constraints, cube.n)
    cert = certify_hypercube(f, cube, constraints, cap=args.cap, seed=args.seed)
    _write_json(cert.to_json(), args.out)
    print(f"terms: {len(cert)}  degree: {cert.degree}", file=sys.stderr)
    return EXIT_OK


def cmd_shorten(args) -> int:
    with open(args.inp) as fh:
        cert = Certificate.from_json(json.load(fh))
    short = shorten_certificate(cert)
    if args.seed is not None:
        short.seed = args.seed
    _write_json(short.to_json(), args.out)
    print(f"terms: {len(cert)} → {len(short)}")
    return EXIT_OK


def cmd_verify(args) -> int:
    cube = _cube(args)
    f = _poly_for_cube(args, cube)
    constraints = load_constraints(args.constraints, cube.n)
    with open(args.cert) as fh:
        cert_json = json.load(fh)
    report = verify_certificate(f, cert_json, cube, constraints, cap=args.cap)
    _write_json(report.to_json(), None)
    return EXIT_OK if report.overall else EXIT_REJECTED


def cmd_eval(args) -> int:
    cube = parse_cube(args.cube) if args.cube else None
    n = cube.n if cube else None
    f = load_poly(args.poly, n)
    if args.at:
        point = [Fraction(x) for x in args.at.split(",")]
        print(f.evaluate(point))
        return EXIT_OK
    if cube is None:
        raise UsageError("eval needs --at or --cube")
    for v in cube.vertices(args.cap):
        print(" ".join(str(x) for x in v), f.evaluate(v))
    return EXIT_OK


def cmd_paperchecks(args) -> int:
    if args.action == "bound":
        print(paperchecks.putinar_bound(args.n))
        return EXIT_OK
    rows = paperchecks.run_all(args.seed if args.seed is not None else 0)
    width = max(len(name) for name, _ in rows)
    for name, ok in rows:
        print(f"{name:<{width}}  {'PASS' if ok else 'FAIL'}")
    return EXIT_OK if all(ok for _, ok in rows) else EXIT_REJECTED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sonccert", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, poly=True, cube=True):
        if poly:
            p.add_argument("--poly", required=True, help="polynomial: JSON file, text file or inline text")
        if cube:
            p.add_argument("--cube", required=True, help="pm1:n, 01:n or a hypercube JSON file")
        p.add_argument("--cap", type=int, default=DEFAULT_CAP, help="vertex enumeration cap (max 24)")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--out", default=None)

    p = sub.add_parser("reduce", help="multilinear normal form over the cube")
    common(p)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("certify", help="build a degree n+d certificate")
    common(p)
    p.add_argument("--constraints", default=None)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("verify", help="check a certificate; exit 0 iff accepted")
    common(p)
    p.add_argument("--constraints", default=None)
    p.add_argument("--cert", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("shorten", help="Caratheodory-prune a certificate")
    common(p, poly=False, cube=False)
    p.add_argument("--in", dest="inp", required=True)
    p.set_defaults(func=cmd_shorten)

    p = sub.add_parser("eval", help="evaluate a polynomial at a point or on every vertex")
    p.add_argument("--poly", required=True)
    p.add_argument("--cube", default=None)
    p.add_argument("--at", default=None, help="comma separated rationals")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("paperchecks", help="run the structural regressions")
    p.add_argument("action", choices=("run", "bound"))
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_paperchecks, cap=DEFAULT_CAP)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if getattr(args, "cap", DEFAULT_CAP) > MAX_CAP:
        print(f"error: --cap may not exceed {MAX_CAP}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except DimensionTooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (UsageError, PolySyntaxError, CircuitError, ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        if isinstance(exc, CertifyError):
            print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
            return EXIT_REJECTED
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
