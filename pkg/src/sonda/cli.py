"""Command line front end.

Every number is printed as a dyadic string ``s x/1 0^k`` (sign, binary
numerator, binary power-of-two denominator). ``--decimal`` adds a decimal
rendering of that dyadic; it is exact for the dyadic but the dyadic is only an
approximation of the real asked for.

Expressions (``--expr``, ``--rhs``, ``--x``)::

    expr   := term (("+" | "-") term)*
    term   := factor ("*" factor)*
    factor := ("-" | "+") factor | atom
    atom   := number | t | y | sin(expr) | exp01(expr) | (expr)

Numbers: ``3/8`` (decimal, power-of-two denominator), ``-11/100`` (binary
string form, here -3/4), ``5`` or ``0.25``. ``exp01`` needs its argument in
[0, 1].

Exit status: 0 on success, 1 when a computation faults, 2 on bad usage or
input.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from typing import Optional, Sequence

from . import __version__
from .cfun import APPLY, apply
from .complexity import (builtin_map, builtin_pred, exist2, power2, qbf2, sat2, table_map,
                         table_pred)
from .encoding import Dyadic
from .errors import (BoundExceeded, CapExceeded, MalformedName, NotLengthPreserving,
                     RegularityFault, SondaError, TrajectoryEscape)
from .expr import Node, cfun_of, lip_of, parse_expr, parse_literal, real_name_of
from .ivp import lip_ivp
from .names import Name, pair
from .real import ADD, MUL, NEG, real_neg, to_dyadic
from .sets import convex_hull, load_exact_set, set_from_exact
from .sopoly import MeteredOp, eval_sopoly, size_function, sopoly_parse

log = logging.getLogger("sonda")

COMPUTATION_FAULTS = (MalformedName, BoundExceeded, TrajectoryEscape, CapExceeded,
                      RegularityFault, NotLengthPreserving)

# the library default is higher; interactive hull queries stay short
CLI_MAX_PREC = 6


class UsageError(Exception):
    pass


# -- helpers -------------------------------------------------------------------------


def _decimal(d: Dyadic) -> str:
    """Exact decimal expansion of a dyadic; ``k`` fraction bits need ``k`` digits."""
    d = d.reduced()
    neg = d.num < 0
    num = abs(d.num)
    if d.exp <= 0:
        text = str(num << -d.exp)
    else:
        whole, rest = divmod(num, 1 << d.exp)
        digits = str(rest * 5 ** d.exp).rjust(d.exp, "0").rstrip("0")
        text = f"{whole}.{digits}" if digits else str(whole)
    return f"-{text}" if neg and text.strip("0.") else text


def _emit(d: Dyadic, decimal: bool) -> None:
    print(d.encode())
    if decimal:
        print(f"decimal {_decimal(d)} (lossy: view of the dyadic above)")


def _dyadic(text: str) -> Dyadic:
    return parse_literal(text.strip())


def _read(path: str) -> str:
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _meter_report(op: MeteredOp, phi: Name, top: int) -> None:
    """``n cost bound`` for every query length up to ``top``."""
    print(f"# {op.label}: cost bound {op.bound_text}")
    for n in range(top + 1):
        _, cost, meter = op.run(phi, "0" * n)
        print(f"{n} {cost} {meter.limit}")


def _metered_input(node: Node) -> Optional[tuple[MeteredOp, Name]]:
    """The shipped operation at the root of ``node`` and the name it reads."""
    if node.op == "neg":
        return NEG, real_name_of(node.args[0]).name
    if node.op in ("add", "sub", "mul"):
        a = real_name_of(node.args[0])
        b = real_name_of(node.args[1])
        if node.op == "sub":
            b = real_neg(b)
        return (MUL if node.op == "mul" else ADD), pair(a.name, b.name)
    return None


def _pred(spec: str) -> Name:
    kind, _, arg = spec.partition(":")
    if kind == "builtin":
        return builtin_pred(arg)
    if kind == "table":
        return table_pred(_read(arg), label=arg)
    raise UsageError(f"--pred takes builtin:NAME or table:FILE, got {spec!r}")


def _map(spec: str) -> Name:
    kind, _, arg = spec.partition(":")
    if kind == "builtin":
        return builtin_map(arg)
    if kind == "table":
        return table_map(_read(arg), label=arg)
    raise UsageError(f"--map takes builtin:NAME or table:FILE, got {spec!r}")


def _bits(text: str) -> str:
    if text.strip("01"):
        raise UsageError(f"{text!r} is not a bit string")
    return text


# -- commands ------------------------------------------------------------------------


def cmd_real_eval(args) -> int:
    node = parse_expr(args.expr)
    _emit(to_dyadic(real_name_of(node), args.prec), args.decimal)
    if args.meter:
        found = _metered_input(node)
        if found is None:
            print(f"# no metered operation at the root of the expression ({node.op})")
        else:
            _meter_report(*found, args.prec)
    return 0


def cmd_cfun_eval(args) -> int:
    f = cfun_of(parse_expr(args.expr))
    t = _dyadic(args.at)
    if not Dyadic(0) <= t <= Dyadic(1):
        raise UsageError("--at must lie in [0, 1]")
    _emit(f.approx(args.prec, t), args.decimal)
    if args.modulus:
        print(f"modulus {f.modulus(args.prec)}")
    return 0


def cmd_cfun_apply(args) -> int:
    f = cfun_of(parse_expr(args.expr))
    x = real_name_of(parse_expr(args.x))
    _emit(to_dyadic(apply(f, x), args.prec), args.decimal)
    if args.meter:
        _meter_report(APPLY, pair(f.name, x.name), args.prec)
    return 0


def cmd_ivp_solve(args) -> int:
    if args.lipschitz < 0:
        raise UsageError("--lipschitz must be a natural number")
    g = lip_of(parse_expr(args.rhs), args.lipschitz)
    h = lip_ivp(g)
    sch = h.schedule(args.prec)
    for text in args.at:
        t = _dyadic(text)
        if not Dyadic(0) <= t <= Dyadic(1):
            raise UsageError("--at must lie in [0, 1]")
        _emit(h.approx(args.prec, t), args.decimal)
    print(f"error_bound 2^-{args.prec} steps 2^{sch.p}")
    return 0


def _load_set(path: str):
    try:
        return load_exact_set(_read(path))
    except ValueError as exc:
        raise UsageError(f"{path}: {exc}") from None


def cmd_set(args) -> int:
    E = _load_set(args.set)
    S = set_from_exact(E)
    if args.action == "hull":
        cap = args.max_prec if args.max_prec is not None else _env_cap()
        S = convex_hull(S, max_prec=cap, method=args.method, jobs=args.jobs)
    print(S.query(_dyadic(args.u), _dyadic(args.v), args.prec))
    return 0


def _env_cap() -> int:
    env = os.environ.get("SONDA_MAX_PREC")
    if not env:
        return CLI_MAX_PREC
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"SONDA_MAX_PREC={env!r} is not an integer") from None


def cmd_sopoly_eval(args) -> int:
    P = sopoly_parse(args.poly)
    try:
        L = size_function(args.size)
    except OSError as exc:
        raise UsageError(f"cannot read size table: {exc.strerror}") from None
    for n in args.n:
        print(eval_sopoly(P, L, n))
    return 0


def cmd_cx(args) -> int:
    if args.problem == "power":
        if not args.map:
            raise UsageError("power needs --map")
        print(power2(_map(args.map), _bits(args.u)))
        return 0
    if not args.pred:
        raise UsageError(f"{args.problem} needs --pred")
    p = _pred(args.pred)
    if args.problem == "exist":
        if args.n is None:
            raise UsageError("exist needs --n")
        print(exist2(p, _bits(args.u), args.n, jobs=args.jobs))
    else:
        if not args.formula:
            raise UsageError(f"{args.problem} needs --formula")
        print((sat2 if args.problem == "sat" else qbf2)(p, args.formula))
    return 0


def cmd_meter(args) -> int:
    if args.op == "apply":
        if not args.f:
            raise UsageError("apply needs --f")
        f = cfun_of(parse_expr(args.f))
        x = real_name_of(parse_expr(args.x))
        _meter_report(APPLY, pair(f.name, x.name), args.max_n)
        return 0
    x = real_name_of(parse_expr(args.x))
    if args.op == "neg":
        _meter_report(NEG, x.name, args.max_n)
        return 0
    if not args.y:
        raise UsageError(f"{args.op} needs --y")
    y = real_name_of(parse_expr(args.y))
    _meter_report(ADD if args.op == "add" else MUL, pair(x.name, y.name), args.max_n)
    return 0


def cmd_selftest(args) -> int:
    from .selftest import SEED, run_all
    results = run_all(args.only, args.seed if args.seed is not None else SEED)
    return 0 if all(r.passed for r in results) else 1


# -- parser --------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        kwargs.setdefault("allow_abbrev", False)
        super().__init__(*args, **kwargs)

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(2)


def _natural(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be a natural number")
    return value


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.RawDescriptionHelpFormatter
    parser = _Parser(prog="sonda", description=__doc__, formatter_class=fmt)
    parser.add_argument("--version", action="version", version=f"sonda {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    top = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def prec(p, required=True):
        p.add_argument("--prec", type=_natural, required=required, help="precision n, error < 2^-n")

    real = top.add_parser("real", help="real number expressions").add_subparsers(
        dest="action", required=True, parser_class=_Parser)
    p = real.add_parser("eval", help="approximate a constant expression")
    p.add_argument("--expr", required=True)
    prec(p)
    p.add_argument("--decimal", action="store_true")
    p.add_argument("--meter", action="store_true",
                   help="print 'n cost bound' for the root operation at n = 0..prec")
    p.set_defaults(run=cmd_real_eval)

    cfun = top.add_parser("cfun", help="functions on [0, 1]").add_subparsers(
        dest="action", required=True, parser_class=_Parser)
    p = cfun.add_parser("eval", help="f(t) for a dyadic t in [0, 1]")
    p.add_argument("--expr", required=True, help="expression in t")
    p.add_argument("--at", required=True)
    prec(p)
    p.add_argument("--decimal", action="store_true")
    p.add_argument("--modulus", action="store_true", help="also print mu(prec)")
    p.set_defaults(run=cmd_cfun_eval)
    p = cfun.add_parser("apply", help="f(x) for a real x given as a constant expression")
    p.add_argument("--expr", required=True, help="expression in t")
    p.add_argument("--x", required=True, help="constant expression with value in [0, 1]")
    prec(p)
    p.add_argument("--decimal", action="store_true")
    p.add_argument("--meter", action="store_true")
    p.set_defaults(run=cmd_cfun_apply)

    ivp = top.add_parser("ivp", help="h(0) = 0, h' = g(t, h)").add_subparsers(
        dest="action", required=True, parser_class=_Parser)
    p = ivp.add_parser("solve", help="solution value at dyadic times")
    p.add_argument("--rhs", required=True, help="expression in t and y")
    p.add_argument("--lipschitz", type=int, required=True,
                   help="natural L with |g(t,y) - g(t,z)| <= L |y - z|")
    prec(p)
    p.add_argument("--at", required=True, nargs="+", help="one or more times in [0, 1]")
    p.add_argument("--decimal", action="store_true")
    p.set_defaults(run=cmd_ivp_solve)

    p = top.add_parser("set", help="closed subsets of the unit square")
    p.add_argument("action", choices=("query", "hull"))
    p.add_argument("--set", required=True, help="point file, one 'u v' pair per line")
    p.add_argument("--u", required=True)
    p.add_argument("--v", required=True)
    prec(p)
    p.add_argument("--max-prec", type=_natural, default=None,
                   help=f"hull precision cap (default SONDA_MAX_PREC or {CLI_MAX_PREC})")
    p.add_argument("--method", choices=("hull", "triangles"), default="hull")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(run=cmd_set)

    sop = top.add_parser("sopoly", help="second-order polynomials").add_subparsers(
        dest="action", required=True, parser_class=_Parser)
    p = sop.add_parser("eval", help="P(L)(n)")
    p.add_argument("--poly", required=True, help="grammar: int | n | P+P | P*P | L(P)")
    p.add_argument("--size", required=True, help="id | square | const:k | table:FILE")
    p.add_argument("--n", type=_natural, required=True, nargs="+")
    p.set_defaults(run=cmd_sopoly_eval)

    p = top.add_parser("cx", help="brute-force complete problems")
    p.add_argument("problem", choices=("exist", "sat", "qbf", "power"))
    p.add_argument("--pred", help="builtin:NAME or table:FILE ('bitstring bit' lines)")
    p.add_argument("--map", help="builtin:NAME or table:FILE ('input output' lines), for power")
    p.add_argument("--u", default="", help="bit string")
    p.add_argument("--n", type=_natural, help="witness length, for exist")
    p.add_argument("--formula", help="e.g. 'E a1 A a2 (a1 | !a2) & p(a1, a2)'")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(run=cmd_cx)

    p = top.add_parser("meter", help="cost report of a shipped operation")
    p.add_argument("--op", required=True, choices=("add", "neg", "mul", "apply"))
    p.add_argument("--x", required=True, help="constant expression")
    p.add_argument("--y", help="second operand for add and mul")
    p.add_argument("--f", help="expression in t, for apply")
    p.add_argument("--max-n", type=_natural, default=10)
    p.set_defaults(run=cmd_meter)

    p = top.add_parser("selftest", help="run the acceptance criteria")
    p.add_argument("--only", type=int, nargs="*")
    p.add_argument("--seed", type=int)
    p.set_defaults(run=cmd_selftest)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s", stream=sys.stderr)
    try:
        return args.run(args)
    except COMPUTATION_FAULTS as exc:
        print(f"sonda: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except (UsageError, ValueError) as exc:
        print(f"sonda: error: {exc}", file=sys.stderr)
        return 2
    except SondaError as exc:
        print(f"sonda: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
