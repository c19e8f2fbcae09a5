"""A small closed-form expression language for the command line.

Grammar (``+ - *`` associate left, ``*`` binds tighter)::

    expr   := term (("+" | "-") term)*
    term   := factor ("*" factor)*
    factor := ("-" | "+") factor | atom
    atom   := number | "t" | "y" | "sin(" expr ")" | "exp01(" expr ")" | "(" expr ")"

Numbers are dyadic literals:

* ``a/b`` with ``b`` a power of two in decimal, e.g. ``3/8``;
* otherwise ``a/b`` with both parts binary and ``b = 10...0`` is read in the
  ``x / 1 0^k`` string form, so ``1/100`` is one quarter;
* decimal integers and finite decimals whose value is dyadic (``0.25``).

Every expression carries interval bounds on the domain ``t in [0, 1]``,
``y in [-1, 1]`` and Lipschitz bounds in ``t`` and ``y``, from which a
modulus of continuity and a magnitude bound are derived.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .cfun import LIP_BOX, UNIT_BOX, CFunName, LipName, ceil_log2, make_cfun, make_lip_name
from .encoding import Dyadic, parse_dyadic
from .errors import ParseError
from .real import (RealName, real_add, real_exp01, real_from_dyadic, real_mul, real_neg,
                   real_sin, to_dyadic)

__all__ = [
    "Node", "parse_expr", "parse_literal", "Bounds", "bounds",
    "real_name_of", "cfun_of", "lip_of", "evaluate", "modulus_for",
]

Value = Union[Dyadic, Fraction]


@dataclass(frozen=True)
class Node:
    op: str  # const, t, y, add, sub, mul, neg, sin, exp01
    args: tuple = ()
    value: Optional[Dyadic] = None

    @property
    def variables(self) -> set[str]:
        if self.op in ("t", "y"):
            return {self.op}
        out: set[str] = set()
        for a in self.args:
            out |= a.variables
        return out

    @property
    def polynomial(self) -> bool:
        return self.op not in ("sin", "exp01") and all(a.polynomial for a in self.args)


def _is_power_of_two(k: int) -> bool:
    return k > 0 and k & (k - 1) == 0


def parse_literal(text: str) -> Dyadic:
    """Read a numeric literal by the rules in the module docstring."""
    if text[:1] in "+-" and "/" in text:
        return parse_dyadic(text)
    if "/" in text:
        a, _, b = text.partition("/")
        if not (a.isdigit() and b.isdigit()):
            raise ValueError(f"bad literal {text!r}")
        if _is_power_of_two(int(b)):
            return Dyadic.from_fraction(Fraction(int(a), int(b)))
        if not a.strip("01") and re.fullmatch(r"10*", b):
            return parse_dyadic("+" + a + "/" + b)
        raise ValueError(f"{text!r} is not a dyadic literal "
                         "(decimal denominators must be powers of two)")
    value = Fraction(text)
    if not _is_power_of_two(value.denominator):
        raise ValueError(f"{text!r} is not a dyadic rational")
    return Dyadic.from_fraction(value)


_TOKEN = re.compile(r"\s*(?:(\d+(?:\.\d+)?(?:/\d+)?)|(sin|exp01|t|y)\b|(.))")


class _Parser:
    def __init__(self, text: str):
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m is None:  # only trailing whitespace left
                break
            if m.group(1):
                self.tokens.append(("num", m.group(1), m.start(1)))
            elif m.group(2):
                self.tokens.append(("word", m.group(2), m.start(2)))
            else:
                if m.group(3) not in "+-*()":
                    raise ParseError(f"unexpected {m.group(3)!r}", m.start(3))
                self.tokens.append(("sym", m.group(3), m.start(3)))
            pos = m.end()
        self.i = 0
        self.end = len(text)

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i] if self.i < len(self.tokens) else ("end", "", self.end)

    def take(self, value: str) -> None:
        kind, tok, pos = self.peek()
        if tok != value or kind == "end":
            raise ParseError(f"expected {value!r}, got {tok or 'end of input'!r}", pos)
        self.i += 1

    def parse(self) -> Node:
        node = self.expr()
        kind, tok, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {tok!r}", pos)
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "sym":
            op = "add" if self.peek()[1] == "+" else "sub"
            self.i += 1
            node = Node(op, (node, self.term()))
        return node

    def term(self) -> Node:
        node = self.factor()
        while self.peek()[:2] == ("sym", "*"):
            self.i += 1
            node = Node("mul", (node, self.factor()))
        return node

    def factor(self) -> Node:
        kind, tok, pos = self.peek()
        if kind == "sym" and tok in ("+", "-"):
            self.i += 1
            inner = self.factor()
            return inner if tok == "+" else Node("neg", (inner,))
        return self.atom()

    def atom(self) -> Node:
        kind, tok, pos = self.peek()
        if kind == "num":
            self.i += 1
            try:
                return Node("const", value=parse_literal(tok))
            except ValueError as exc:
                raise ParseError(str(exc), pos) from None
        if kind == "word":
            self.i += 1
            if tok in ("t", "y"):
                return Node(tok)
            self.take("(")
            inner = self.expr()
            self.take(")")
            return Node(tok, (inner,))
        if (kind, tok) == ("sym", "("):
            self.i += 1
            inner = self.expr()
            self.take(")")
            return inner
        raise ParseError(f"unexpected {tok or 'end of input'!r}", pos)


def parse_expr(text: str) -> Node:
    node = _Parser(text).parse()
    bounds(node)  # rejects exp01 arguments that can leave [0, 1]
    return node


# -- bounds ---------------------------------------------------------------------


@dataclass(frozen=True)
class Bounds:
    lo: Fraction
    hi: Fraction
    lip_t: Fraction  # Lipschitz bound in t
    lip_y: Fraction  # Lipschitz bound in y

    @property
    def magnitude(self) -> Fraction:
        return max(abs(self.lo), abs(self.hi))


def bounds(node: Node) -> Bounds:
    """Range and Lipschitz bounds over ``[0, 1] x [-1, 1]`` by interval rules."""
    op = node.op
    zero = Fraction(0)
    if op == "const":
        v = node.value.to_fraction()
        return Bounds(v, v, zero, zero)
    if op == "t":
        return Bounds(zero, Fraction(1), Fraction(1), zero)
    if op == "y":
        return Bounds(Fraction(-1), Fraction(1), zero, Fraction(1))
    parts = [bounds(a) for a in node.args]
    if op == "neg":
        a = parts[0]
        return Bounds(-a.hi, -a.lo, a.lip_t, a.lip_y)
    if op in ("add", "sub"):
        a, b = parts
        if op == "add":
            lo, hi = a.lo + b.lo, a.hi + b.hi
        else:
            lo, hi = a.lo - b.hi, a.hi - b.lo
        return Bounds(lo, hi, a.lip_t + b.lip_t, a.lip_y + b.lip_y)
    if op == "mul":
        a, b = parts
        corners = [a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi]
        ma, mb = a.magnitude, b.magnitude
        return Bounds(min(corners), max(corners),
                      a.lip_t * mb + b.lip_t * ma, a.lip_y * mb + b.lip_y * ma)
    if op == "sin":
        a = parts[0]
        return Bounds(Fraction(-1), Fraction(1), a.lip_t, a.lip_y)
    if op == "exp01":
        a = parts[0]
        if a.lo < 0 or a.hi > 1:
            raise ParseError(f"exp01 argument ranges over [{float(a.lo):g}, {float(a.hi):g}], "
                             "outside [0, 1]")
        # 1 + x <= e^x <= 1 + 2x on [0, 1]; the derivative is below 3
        return Bounds(1 + a.lo, 1 + 2 * a.hi, 3 * a.lip_t, 3 * a.lip_y)
    raise TypeError(f"unknown node {op!r}")


def modulus_for(lip: Fraction):
    """``mu(n) = n + ceil(log2 K)`` (at least ``n``) for a ``K``-Lipschitz function; 0 if ``K = 0``."""
    if lip == 0:
        return lambda n: 0
    extra = max(0, ceil_log2(lip))
    return lambda n: n + extra


def _magnitude_exponent(b: Bounds) -> int:
    """Smallest ``M`` with ``|f| < 2^M`` on the domain."""
    return (int(b.magnitude) + 1).bit_length()


# -- evaluation --------------------------------------------------------------------


def _exact(node: Node, env: dict[str, Dyadic]) -> Dyadic:
    op = node.op
    if op == "const":
        return node.value
    if op in ("t", "y"):
        return env[op]
    if op == "neg":
        return -_exact(node.args[0], env)
    a = _exact(node.args[0], env)
    b = _exact(node.args[1], env)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    return a * b


def evaluate(node: Node, env: dict[str, Dyadic], k: int) -> Dyadic:
    """A dyadic within ``2^-k`` of the expression at the point ``env``.

    Polynomial subtrees are evaluated exactly; precision is split through
    products using the interval bounds, so ``env`` must lie in the domain.
    """
    if node.polynomial:
        return _exact(node, env)
    op = node.op
    if op == "neg":
        return -evaluate(node.args[0], env, k)
    if op in ("add", "sub"):
        a = evaluate(node.args[0], env, k + 1)
        b = evaluate(node.args[1], env, k + 1)
        return a + b if op == "add" else a - b
    if op == "mul":
        ma = _magnitude_exponent(bounds(node.args[0]))
        mb = _magnitude_exponent(bounds(node.args[1]))
        # |a||b - b~| + |b~||a - a~| < 2^ma 2^-(k+ma+2) + 2^(mb+1) 2^-(k+mb+2)
        a = evaluate(node.args[0], env, k + mb + 2)
        b = evaluate(node.args[1], env, k + ma + 2)
        return a * b
    if op == "sin":
        a = evaluate(node.args[0], env, k + 1)
        return to_dyadic(real_sin(real_from_dyadic(a)), k + 1)
    if op == "exp01":
        # exp is below 3-Lipschitz on [0, 1]
        a = evaluate(node.args[0], env, k + 3)
        return to_dyadic(real_exp01(real_from_dyadic(a)), k + 1)
    raise TypeError(f"unknown node {op!r}")


# -- names --------------------------------------------------------------------------


def real_name_of(node: Node) -> RealName:
    """Assemble a real-number name from a constant expression via the name operators."""
    if node.variables:
        raise ValueError(f"expression depends on {', '.join(sorted(node.variables))}")
    op = node.op
    if op == "const":
        return real_from_dyadic(node.value)
    args = [real_name_of(a) for a in node.args]
    if op == "neg":
        return real_neg(args[0])
    if op == "add":
        return real_add(*args)
    if op == "sub":
        return real_add(args[0], real_neg(args[1]))
    if op == "mul":
        return real_mul(*args)
    if op == "sin":
        return real_sin(args[0])
    if op == "exp01":
        return real_exp01(args[0])
    raise TypeError(f"unknown node {op!r}")


def cfun_of(node: Node) -> CFunName:
    """Function name of an expression in ``t`` on ``[0, 1]``."""
    if "y" in node.variables:
        raise ValueError("a function of one variable may only use t")
    b = bounds(node)
    return make_cfun(modulus_for(b.lip_t), lambda pts, k: evaluate(node, {"t": pts[0]}, k),
                     magnitude=_magnitude_exponent(b), box=UNIT_BOX, label="expr")


def lip_of(node: Node, L: int) -> LipName:
    """Lipschitz name of an expression in ``t, y`` on ``[0, 1] x [-1, 1]``.

    The modulus is taken jointly in the max-metric: ``K = K_t + K_y``. ``L``
    must be at least the derived Lipschitz bound in ``y``.
    """
    b = bounds(node)
    if b.lip_y > L:
        raise ValueError(f"cannot certify Lipschitz constant {L} in y: the derived bound is {b.lip_y}")
    f = make_cfun(modulus_for(b.lip_t + b.lip_y),
                  lambda pts, k: evaluate(node, {"t": pts[0], "y": pts[1]}, k),
                  magnitude=_magnitude_exponent(b), box=LIP_BOX, label="rhs")
    return make_lip_name(f, L)
