"""Command-line interface.

Subcommands: fan info, div check, coh dims, mmp run, verify kv|mmp|mfs|flip,
suite. Exit codes: 0 success / all pass, 1 verdict failure, 2 input error.
"""

import argparse
import sys

from .cohomology import coh_dims, parse_field, vanishing_higher
from .divisors import (
    NotQCartier,
    cartier_data,
    coeffs_of,
    h0_dim,
    klt_check,
    positivity,
    q_cartier_index,
    semiample_witness,
)
from .fans import is_complete, is_simplicial, properties, support_is_convex, validate


def _require_valid(fan):
    defects = validate(fan)
    if defects:
        raise ParseError("invalid fan: " + "; ".join(defects))
from .formats import (
    ParseError,
    canonical_json,
    fraction_to_str,
    load_divisor,
    load_fan,
    load_instance,
    save,
)
from .mmp import contract, run_mmp
from .mori import extremal_rays, intersect, walls
from .verify import (
    DEFAULT_FIELDS,
    suite,
    verify_flip_diagram_for,
    verify_kv,
    verify_mfs,
    verify_mmp,
)


def _fan_info(args):
    fan = load_fan(args.fan)
    defects = validate(fan)
    if defects:
        print("invalid fan:")
        for d in defects:
            print(f"  - {d}")
        return 1
    p = properties(fan)
    print(f"rank:            {fan.rank}")
    print(f"rays:            {len(fan.rays)}")
    print(f"maximal cones:   {len(fan.max_cones)}")
    print(f"simplicial:      {p.simplicial}")
    print(f"smooth:          {p.smooth}")
    print(f"complete:        {p.complete}")
    print(f"support convex:  {p.support_convex}")
    print(f"index of K:      {p.q_gorenstein_index_of_K}")
    if p.simplicial:
        print(f"interior walls:  {len(walls(fan))}")
    return 0


def _div_check(args):
    fan, coeffs = load_divisor(args.divisor)
    _require_valid(fan)
    cd = cartier_data(fan, coeffs)
    if isinstance(cd, NotQCartier):
        print(f"q_cartier:  no (cone {fan.max_cones[cd.cone_index]})")
        return 0
    print(f"q_cartier:  yes (index {q_cartier_index(fan, coeffs)})")
    pos = positivity(fan, coeffs)
    print(f"nef:        {pos.nef}")
    print(f"ample:      {pos.ample}")
    print(f"big:        {pos.big}")
    if pos.nef:
        w = semiample_witness(fan, coeffs)
        print(f"semiample:  multiple {w.multiple}")
    print(f"h0:         {h0_dim(fan, coeffs)}")
    ok, reason = klt_check(fan, coeffs)
    print(f"klt pair:   {ok} ({reason})")
    return 0


def _coh_dims(args):
    fan, coeffs = load_divisor(args.divisor)
    _require_valid(fan)
    field = parse_field(args.field)
    if is_complete(fan):
        rep = coh_dims(fan, coeffs, field)
        print(" ".join(str(d) for d in rep.dims))
        return 0
    if support_is_convex(fan) and is_simplicial(fan):
        ok, witness = vanishing_higher(fan, coeffs, field)
        if ok:
            print("higher cohomology vanishes")
        else:
            print(f"nonvanishing: pattern {witness[0]} in degree {witness[1]}")
        return 0
    raise ParseError("fan is neither complete nor simplicial with convex support")


def _mmp_run(args):
    fan, coeffs = load_divisor(args.divisor)
    _require_valid(fan)
    if args.boundary:
        _, b = load_divisor(args.boundary)
    else:
        b = coeffs_of(fan, {})
    run = run_mmp(fan, coeffs, b)
    for i, step in enumerate(run.steps):
        cert = step.certificate
        if step.kind == "divisorial":
            print(f"step {i}: divisorial, removes {cert.exceptional}, "
                  f"a = {fraction_to_str(cert.a)}")
        elif step.kind == "flip":
            print(f"step {i}: flip at {cert.exceptional}, "
                  f"a = {fraction_to_str(cert.a)}, b = {fraction_to_str(cert.b)}, "
                  f"c = {fraction_to_str(cert.c)}, case {cert.case}")
        else:
            print(f"step {i}: fibration to rank {step.contraction.target.rank}")
    print(f"end: {run.end} after {len(run.steps)} step(s), triangulation=pulling")
    return 0


def _fields(args):
    if args.field:
        return tuple(args.field)
    return DEFAULT_FIELDS


def _is_quiet(args):
    return bool(args.quiet or getattr(args, "quiet_sub", False))


def _verify(args):
    if args.what == "kv":
        inst = load_instance(args.path)
        _require_valid(inst.fan)
        verdict = verify_kv(inst, _fields(args))
    elif args.what == "mmp":
        inst = load_instance(args.path)
        _require_valid(inst.fan)
        verdict = verify_mmp(inst, _fields(args))
    elif args.what == "mfs":
        fan, coeffs = load_divisor(args.path)
        _require_valid(fan)
        chosen = None
        for item in extremal_rays(fan):
            if intersect(fan, coeffs, item[1][0]) < 0:
                res = contract(fan, item)
                if res.kind == "fibration":
                    chosen = res
                    break
        if chosen is None:
            raise ParseError("no D-negative fibration ray")
        verdict = verify_mfs(fan, coeffs, chosen, _fields(args))
    elif args.what == "flip":
        fan, coeffs = load_divisor(args.path)
        _require_valid(fan)
        verdict = verify_flip_diagram_for(fan, coeffs)
    else:
        raise ParseError(f"unknown verifier {args.what!r}")
    obj = verdict.to_obj()
    if not _is_quiet(args):
        print(canonical_json(obj), end="")
    return 0 if verdict.passed else 1


def _suite(args):
    ranks = (args.rank,) if args.rank else (2, 3)
    quiet = _is_quiet(args)
    report, code = suite(seed=args.seed, ranks=ranks, count=args.count,
                         max_rays=args.max_rays, fields=_fields(args),
                         quiet=quiet)
    if args.report:
        save(args.report, report)
    if not quiet:
        total = len(report["instances"])
        bad = [e for e in report["instances"]
               if e["verdict"] not in ("pass", "expected-fail")]
        print(f"{total - len(bad)}/{total} instances passed")
    return code


def build_parser():
    parser = argparse.ArgumentParser(prog="toricvanish")
    parser.add_argument("--quiet", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    fan_p = sub.add_parser("fan")
    fan_sub = fan_p.add_subparsers(dest="sub", required=True)
    info = fan_sub.add_parser("info")
    info.add_argument("fan")
    info.set_defaults(func=_fan_info)

    div_p = sub.add_parser("div")
    div_sub = div_p.add_subparsers(dest="sub", required=True)
    check = div_sub.add_parser("check")
    check.add_argument("divisor")
    check.set_defaults(func=_div_check)

    coh_p = sub.add_parser("coh")
    coh_sub = coh_p.add_subparsers(dest="sub", required=True)
    dims = coh_sub.add_parser("dims")
    dims.add_argument("divisor")
    dims.add_argument("--field", default="q",
                      choices=["q", "f2", "f3", "f5", "f7"])
    dims.set_defaults(func=_coh_dims)

    mmp_p = sub.add_parser("mmp")
    mmp_sub = mmp_p.add_subparsers(dest="sub", required=True)
    runp = mmp_sub.add_parser("run")
    runp.add_argument("divisor")
    runp.add_argument("--boundary")
    runp.set_defaults(func=_mmp_run)

    ver = sub.add_parser("verify")
    ver.add_argument("what", choices=["kv", "mmp", "mfs", "flip"])
    ver.add_argument("path")
    ver.add_argument("--field", action="append",
                     choices=["q", "f2", "f3", "f5", "f7"])
    ver.add_argument("--quiet", action="store_true", dest="quiet_sub")
    ver.set_defaults(func=_verify)

    sui = sub.add_parser("suite")
    sui.add_argument("--seed", type=int, default=42)
    sui.add_argument("--rank", type=int, choices=[2, 3])
    sui.add_argument("--count", type=int, default=10)
    sui.add_argument("--max-rays", type=int, default=12)
    sui.add_argument("--report")
    sui.add_argument("--field", action="append",
                     choices=["q", "f2", "f3", "f5", "f7"])
    sui.add_argument("--quiet", action="store_true", dest="quiet_sub")
    sui.set_defaults(func=_suite)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        code = args.func(args)
    except ParseError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    return code


if __name__ == "__main__":
    sys.exit(main())
