"""Command line interface.  Exit codes: 0 pass, 1 fail, 2 input error."""
import argparse
from fractions import Fraction
import json
import logging
import sys

from . import cox_coh, lattice_core, skeleton, workbench
from . import fan as fanmod
from .cellsheaf.complex import UnsupportedDimension
from .cellsheaf.generators import CodimTwoObstruction

PASS, FAIL, INPUT_ERROR = 0, 1, 2

INPUT_ERRORS = (OSError, json.JSONDecodeError, KeyError, ValueError, TypeError,
                fanmod.InvalidFan, cox_coh.NotSimplicial, cox_coh.NotComplete,
                skeleton.DimensionTooLarge, UnsupportedDimension, lattice_core.RankDeficient)


def _vector(text, cast=Fraction):
    text = text.strip()
    if text.startswith("["):
        return tuple(cast(x) for x in json.loads(text))
    return tuple(cast(x) for x in text.split(",") if x.strip())


def _gamma(fd, text):
    if text is None:
        return (Fraction(0),) * fd.n
    g = _vector(text)
    if len(g) != fd.n:
        raise ValueError(f"gamma needs {fd.n} entries, got {len(g)}")
    return g


def _classes(fd, text):
    out = [_vector(part, int) for part in text.split(";") if part.strip()]
    if any(len(c) != fd.n for c in out):
        raise ValueError(f"each class lift needs {fd.n} entries")
    return out


def _print_json(obj):
    print(json.dumps(obj, sort_keys=True, indent=2))


def cmd_validate(args):
    fd = fanmod.load_fan(args.fan)
    rep = fanmod.validate(fd)
    if rep.valid:
        print(f"valid: {fd.name} (n={fd.n}, d={fd.d}, {len(fd.strata)} strata)")
        if fd.closure_added:
            print(f"note: loader added {len(fd.closure_added)} face(s) by downward closure")
        return PASS
    print(f"invalid: {fd.name}")
    for line in rep.lines():
        print(line)
    return INPUT_ERROR


def cmd_cox(args):
    fd = fanmod.load_fan(args.fan)
    fanmod.require_valid(fd)
    cs = lattice_core.character_sequence(fd.f, fd.n)
    print(f"{fanmod.irrelevant_locus(fd).describe()}; Cl = {cs.quotient}")
    print(f"quotient torus rank = {fd.d}")
    rows = [list(r) for r in cs.M_inclusion]
    print("M basis (non-canonical): " + json.dumps([[rows[i][k] for i in range(fd.n)]
                                                    for k in range(fd.d)]))
    return PASS


def cmd_skeleton(args):
    fd = fanmod.load_fan(args.fan)
    fanmod.require_valid(fd)
    gamma = _gamma(fd, args.gamma)
    _print_json([c.to_json() for c in skeleton.reduce(fd, gamma)])
    if args.svg:
        with open(args.svg, "w") as fh:
            fh.write(skeleton.emit_svg(fd, gamma))
    return PASS


def cmd_equiv(args):
    fd = fanmod.load_fan(args.fan)
    rep = skeleton.check_equivalence(fd)
    s, n, m = rep.as_tuple()
    _print_json({"simplicial": s, "noncharacteristic": n, "submersive": m,
                 "agree": rep.agree,
                 "witness": workbench._plain(rep.witness)})
    return PASS if rep.agree else FAIL


def cmd_bside(args):
    fd = fanmod.load_fan(args.fan)
    (c1,), (c2,) = _classes(fd, args.src), _classes(fd, args.dst)
    table = cox_coh.hom_dims(fd, c1, c2)
    diff = tuple(b - a for a, b in zip(c1, c2))
    _print_json(table.to_json(cox_coh.divisor_class(fd, diff).lift))
    return PASS


def cmd_verify(args):
    if args.kind == "dim1":
        rep = workbench.verify_dim1(args.seed, args.count, args.orientation, jobs=args.jobs)
    else:
        if not args.fan:
            raise ValueError(f"verify {args.kind} needs a fan file")
        fd = fanmod.load_fan(args.fan)
        if args.kind == "quotient":
            if not args.classes:
                raise ValueError("verify quotient needs --classes")
            gamma = _gamma(fd, args.gamma) if args.gamma else None
            rep = workbench.verify_quotient(fd, _classes(fd, args.classes), gamma)
        else:
            gammas = [_gamma(fd, g) for g in args.gammas or []]
            if args.random:
                gammas += workbench.random_gammas(fd, args.seed, args.random)
            rep = workbench.verify_gamma(fd, gammas or [_gamma(fd, None)], jobs=args.jobs)
    print(rep.to_json())
    return PASS if rep.passed else FAIL


def build_parser():
    p = argparse.ArgumentParser(prog="toricmirror")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate")
    s.add_argument("fan")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("cox")
    s.add_argument("fan")
    s.set_defaults(func=cmd_cox)

    s = sub.add_parser("skeleton")
    s.add_argument("fan")
    s.add_argument("--gamma")
    s.add_argument("--svg")
    s.set_defaults(func=cmd_skeleton)

    s = sub.add_parser("equiv-check")
    s.add_argument("fan")
    s.set_defaults(func=cmd_equiv)

    s = sub.add_parser("bside")
    s.add_argument("fan")
    s.add_argument("--from", dest="src", required=True)
    s.add_argument("--to", dest="dst", required=True)
    s.set_defaults(func=cmd_bside)

    s = sub.add_parser("verify")
    s.add_argument("kind", choices=["dim1", "quotient", "gamma"])
    s.add_argument("fan", nargs="?")
    s.add_argument("--count", type=int, default=50)
    s.add_argument("--orientation", type=int, choices=[1, -1], default=1)
    s.add_argument("--classes", help="class lifts separated by ';', e.g. '0,0;-1,0'")
    s.add_argument("--gamma", dest="gamma", help="gamma lift for verify quotient")
    s.add_argument("--at", dest="gammas", action="append", help="gamma lift (repeatable)")
    s.add_argument("--random", type=int, default=0, help="add this many seeded random gammas")
    s.set_defaults(func=cmd_verify)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return INPUT_ERROR if e.code else PASS
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except CodimTwoObstruction as e:
        print(f"error: {e}", file=sys.stderr)
        return FAIL
    except INPUT_ERRORS as e:
        print(f"input error: {e}", file=sys.stderr)
        return INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
