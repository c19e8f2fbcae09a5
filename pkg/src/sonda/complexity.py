"""Brute-force deciders for the oracle problems EXIST2, SAT2, QBF2 and POWER2,
plus wiring combinators for reductions between operators on names.

Predicates are names with one-bit answers. Formulas use an ASCII syntax::

    formula  := prefix* or
    prefix   := ("A" | "E") var "."?        (also the symbols for all / exists)
    or       := and ("|" and)*
    and      := unary ("&" unary)*
    unary    := "!" unary | atom
    atom     := var | "p(" or ("," or)* ")" | "(" or ")" | "0" | "1"
    var      := "a" digits                  (index >= 1)

``p(f1, ..., fk)`` asks the predicate on the k-bit string of the arguments'
truth values, left to right. Unquantified variables of a QBF instance are
read as existentially quantified outermost.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Optional, Union

from ._parallel import parallel_map
from .encoding import tuple_strings, untuple_strings
from .errors import CapExceeded, MalformedName, MalformedTuple, NotLengthPreserving, ParseError
from .names import Name, pair
from .sopoly import CostMeter, MeteredOracle

__all__ = [
    "Var", "And", "Or", "Not", "PredApp", "Lit", "QBFormula",
    "parse_formula", "parse_qbf", "format_formula", "free_vars",
    "pred_name", "builtin_pred", "table_pred", "builtin_map", "table_map",
    "eval_formula", "exist2", "sat2", "qbf2", "power2",
    "reduce_m2", "reduce_mF2", "reduce_W2", "translate",
    "DEFAULT_CAP", "POWER_CAP",
]

DEFAULT_CAP = 20
POWER_CAP = 24


# -- formulas ---------------------------------------------------------------------


@dataclass(frozen=True)
class Var:
    index: int

    def __post_init__(self):
        if self.index < 1:
            raise ValueError("variable indices start at 1")


@dataclass(frozen=True)
class Lit:
    value: bool


@dataclass(frozen=True)
class Not:
    arg: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class PredApp:
    args: tuple

    def __post_init__(self):
        if not self.args:
            raise ValueError("a predicate application needs at least one argument")


Formula = Union[Var, Lit, Not, And, Or, PredApp]


@dataclass(frozen=True)
class QBFormula:
    prefix: tuple  # ((quantifier, index), ...) with quantifier "A" or "E"
    matrix: Formula

    def closed(self) -> "QBFormula":
        """Bind the free variables existentially, outside the given prefix."""
        bound = {i for _, i in self.prefix}
        extra = tuple(("E", i) for i in sorted(free_vars(self.matrix) - bound))
        return QBFormula(extra + self.prefix, self.matrix)


_SYMBOLS = {"∧": "&", "∨": "|", "¬": "!", "∀": "A", "∃": "E"}


class _FormulaParser:
    def __init__(self, text: str):
        self.text = "".join(_SYMBOLS.get(c, c) for c in text)
        self.pos = 0

    def peek(self) -> str:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, ch: str) -> None:
        if self.peek() != ch:
            raise ParseError(f"expected {ch!r}, got {self.peek() or 'end of input'!r}", self.pos)
        self.pos += 1

    def var(self) -> int:
        self.take("a")
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            raise ParseError("variable needs an index, e.g. a1", start)
        index = int(self.text[start:self.pos])
        if index < 1:
            raise ParseError("variable indices start at 1", start)
        return index

    def prefix(self) -> tuple:
        out = []
        while self.peek() in ("A", "E"):
            q = self.peek()
            self.pos += 1
            out.append((q, self.var()))
            if self.peek() == ".":
                self.pos += 1
        return tuple(out)

    def finish(self, node):
        if self.peek():
            raise ParseError(f"unexpected {self.peek()!r}", self.pos)
        return node

    def disj(self) -> Formula:
        node = self.conj()
        while self.peek() == "|":
            self.pos += 1
            node = Or(node, self.conj())
        return node

    def conj(self) -> Formula:
        node = self.unary()
        while self.peek() == "&":
            self.pos += 1
            node = And(node, self.unary())
        return node

    def unary(self) -> Formula:
        if self.peek() == "!":
            self.pos += 1
            return Not(self.unary())
        return self.atom()

    def atom(self) -> Formula:
        ch = self.peek()
        if ch == "a":
            return Var(self.var())
        if ch in ("0", "1"):
            self.pos += 1
            return Lit(ch == "1")
        if ch == "p":
            self.pos += 1
            self.take("(")
            args = [self.disj()]
            while self.peek() == ",":
                self.pos += 1
                args.append(self.disj())
            self.take(")")
            return PredApp(tuple(args))
        if ch == "(":
            self.pos += 1
            node = self.disj()
            self.take(")")
            return node
        raise ParseError(f"unexpected {ch or 'end of input'!r}", self.pos)


def parse_formula(text: str) -> Formula:
    p = _FormulaParser(text)
    return p.finish(p.disj())


def parse_qbf(text: str) -> QBFormula:
    p = _FormulaParser(text)
    prefix = p.prefix()
    return QBFormula(prefix, p.finish(p.disj()))


def format_formula(f) -> str:
    if isinstance(f, QBFormula):
        head = "".join(f"{q}a{i}." for q, i in f.prefix)
        return head + (" " if head else "") + format_formula(f.matrix)
    if isinstance(f, Var):
        return f"a{f.index}"
    if isinstance(f, Lit):
        return "1" if f.value else "0"
    if isinstance(f, Not):
        return "!" + _wrap(f.arg, (Var, Lit, Not, PredApp))
    if isinstance(f, And):
        return f"{_wrap(f.left, (Var, Lit, Not, PredApp, And))} & {_wrap(f.right, (Var, Lit, Not, PredApp))}"
    if isinstance(f, Or):
        return f"{format_formula(f.left)} | {_wrap(f.right, (Var, Lit, Not, PredApp, And))}"
    if isinstance(f, PredApp):
        return "p(" + ", ".join(format_formula(a) for a in f.args) + ")"
    raise TypeError(f"not a formula: {f!r}")


def _wrap(f, bare: tuple) -> str:
    text = format_formula(f)
    return text if isinstance(f, bare) else f"({text})"


def free_vars(f: Formula) -> set[int]:
    if isinstance(f, Var):
        return {f.index}
    if isinstance(f, Lit):
        return set()
    if isinstance(f, Not):
        return free_vars(f.arg)
    if isinstance(f, (And, Or)):
        return free_vars(f.left) | free_vars(f.right)
    if isinstance(f, PredApp):
        out: set[int] = set()
        for a in f.args:
            out |= free_vars(a)
        return out
    raise TypeError(f"not a formula: {f!r}")


# -- predicates and maps -----------------------------------------------------------


Pred = Callable[[str], str]


def pred_name(test: Callable[[str], bool], label: str = "p") -> Name:
    return Name(lambda u: "1" if test(u) else "0", size=lambda n: 1,
                regularity="trusted", label=label)


def _ask(p: Pred, query: str) -> bool:
    answer = p(query)
    if answer == "1":
        return True
    if answer == "0":
        return False
    raise MalformedName(f"predicate answered {answer!r}, expected a single bit")


def _parts(u: str, k: int) -> Optional[list[str]]:
    try:
        parts = untuple_strings(u)
    except MalformedTuple:
        return None
    return parts if len(parts) == k else None


def _eq(u: str) -> bool:
    parts = _parts(u, 2)
    return parts is not None and parts[0] == parts[1]


def _second_odd(u: str) -> bool:
    parts = _parts(u, 2)
    return parts is not None and parts[1].count("1") % 2 == 1


_BUILTIN_PREDS: dict[str, Callable[[str], bool]] = {
    "zero": lambda u: False,
    "one": lambda u: True,
    "id": lambda u: u[:1] == "1",
    "and": lambda u: bool(u) and "0" not in u,
    "or": lambda u: "1" in u,
    "xor": lambda u: u.count("1") % 2 == 1,
    "eq": _eq,
    "odd2": _second_odd,
}


def builtin_pred(name: str) -> Name:
    """Built-in predicates: zero, one, id (first bit), and, or, xor, eq, odd2.

    ``eq`` and ``odd2`` read a tupled pair ``(u, v)``: equality of the parts,
    and odd parity of ``v``.
    """
    try:
        return pred_name(_BUILTIN_PREDS[name], name)
    except KeyError:
        raise ValueError(f"unknown builtin predicate {name!r}; "
                         f"choose from {', '.join(sorted(_BUILTIN_PREDS))}") from None


def table_pred(text: str, label: str = "table") -> Name:
    """Predicate from ``bitstring bit`` lines; unlisted strings answer 0. ``-`` is the empty string."""
    ones: set[str] = set()
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) != 2 or fields[1] not in ("0", "1"):
            raise ValueError(f"line {lineno}: expected 'bitstring bit'")
        key = "" if fields[0] == "-" else fields[0]
        if key.strip("01"):
            raise ValueError(f"line {lineno}: {fields[0]!r} is not a bit string")
        if fields[1] == "1":
            ones.add(key)
        else:
            ones.discard(key)
    return pred_name(ones.__contains__, label)


def _increment(u: str) -> str:
    if not u:
        return u
    return format((int(u, 2) + 1) % (1 << len(u)), "b").zfill(len(u))


_BUILTIN_MAPS: dict[str, Callable[[str], str]] = {
    "id": lambda u: u,
    "inc": _increment,
    "not": lambda u: u.translate(str.maketrans("01", "10")),
    "zero": lambda u: "0" * len(u),
}


def builtin_map(name: str) -> Name:
    """Length-preserving maps: id, inc (binary increment mod 2^|u|), not, zero."""
    try:
        fn = _BUILTIN_MAPS[name]
    except KeyError:
        raise ValueError(f"unknown builtin map {name!r}; "
                         f"choose from {', '.join(sorted(_BUILTIN_MAPS))}") from None
    return Name(fn, size=lambda n: n, regularity="trusted", label=name)


def table_map(text: str, label: str = "table") -> Name:
    """Map from ``input output`` lines; unlisted inputs map to themselves."""
    table: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) != 2:
            raise ValueError(f"line {lineno}: expected 'input output'")
        table[fields[0]] = fields[1]
    return Name(lambda u: table.get(u, u), label=label)


# -- deciders ----------------------------------------------------------------------


def eval_formula(f: Formula, assignment: dict[int, bool], p: Pred) -> bool:
    if isinstance(f, Var):
        return assignment[f.index]
    if isinstance(f, Lit):
        return f.value
    if isinstance(f, Not):
        return not eval_formula(f.arg, assignment, p)
    if isinstance(f, And):
        return eval_formula(f.left, assignment, p) and eval_formula(f.right, assignment, p)
    if isinstance(f, Or):
        return eval_formula(f.left, assignment, p) or eval_formula(f.right, assignment, p)
    if isinstance(f, PredApp):
        bits = "".join("1" if eval_formula(a, assignment, p) else "0" for a in f.args)
        return _ask(p, bits)
    raise TypeError(f"not a formula: {f!r}")


def _check_cap(count: int, cap: int, what: str) -> None:
    if count > cap:
        raise CapExceeded(f"{what} {count} exceeds the cap {cap}")


def exist2(p: Pred, u: str, n: int, cap: int = DEFAULT_CAP, jobs: int = 1) -> int:
    """1 iff ``p(tuple(u, v)) = 1`` for some ``v`` in ``{0,1}^n``."""
    _check_cap(n, cap, "witness length")
    if n == 0:
        return int(_ask(p, tuple_strings((u, ""))))
    # split on the first few bits so workers get equal shares
    head = min(n, 4)

    def block(prefix: str) -> bool:
        for rest in itertools.product("01", repeat=n - head):
            if _ask(p, tuple_strings((u, prefix + "".join(rest)))):
                return True
        return False

    prefixes = ["".join(b) for b in itertools.product("01", repeat=head)]
    if jobs <= 1:
        return int(any(block(b) for b in prefixes))
    return int(any(parallel_map(block, prefixes, jobs)))


def _formula(f) -> Formula:
    return parse_formula(f) if isinstance(f, str) else f


def sat2(p: Pred, formula, cap: int = DEFAULT_CAP) -> int:
    """1 iff some assignment of the variables satisfies the formula, ``p`` fixed."""
    f = _formula(formula)
    names = sorted(free_vars(f))
    _check_cap(len(names), cap, "variable count")
    for values in itertools.product((False, True), repeat=len(names)):
        if eval_formula(f, dict(zip(names, values)), p):
            return 1
    return 0


def qbf2(p: Pred, formula, cap: int = DEFAULT_CAP) -> int:
    """Truth value of the (existentially closed) quantified formula under ``p``."""
    q = parse_qbf(formula) if isinstance(formula, str) else formula
    q = q.closed()
    _check_cap(len({i for _, i in q.prefix}), cap, "variable count")
    prefix = q.prefix

    def walk(level: int, assignment: dict[int, bool]) -> bool:
        if level == len(prefix):
            return eval_formula(q.matrix, assignment, p)
        quant, index = prefix[level]
        outcomes = (walk(level + 1, {**assignment, index: b}) for b in (False, True))
        return any(outcomes) if quant == "E" else all(outcomes)

    return int(walk(0, {}))


def power2(f: Callable[[str], str], u: str, cap: int = POWER_CAP) -> int:
    """1 iff ``f`` iterated ``2^|u|`` times on ``u`` gives ``0^|u|``.

    Only the current string is kept. Every answer must have the length of
    its input, otherwise NotLengthPreserving is raised.
    """
    k = len(u)
    _check_cap(k, cap, "input length")
    x = u
    for step in range(1 << k):
        y = f(x)
        if len(y) != k:
            raise NotLengthPreserving(
                f"step {step}: map sent a string of length {k} to one of length {len(y)}")
        x = y
    return int(x == "0" * k)


# -- reductions ---------------------------------------------------------------------


Operator = Callable[[Name], Callable[[str], str]]


def _metered(phi: Name, meter: Optional[CostMeter]) -> Name:
    if meter is None:
        return phi
    return Name(MeteredOracle(phi, meter), size=phi.size, regularity="trusted", label=phi.label)


def reduce_m2(s: Callable[[Name], Name], t: Callable[[Name], Callable[[str], str]],
              meter: Optional[CostMeter] = None) -> Callable[[Operator], Operator]:
    """From a solver of B, build a solver of A as ``x -> theta(t(phi)(x))``, ``theta = B(s(phi))``."""

    def wire(solve_b: Operator) -> Operator:
        def solve_a(phi: Name) -> Callable[[str], str]:
            phi = _metered(phi, meter)
            theta = _metered_fn(solve_b(s(phi)), meter)
            tx = t(phi)
            return lambda x: theta(tx(x))
        return solve_a

    return wire


def reduce_mF2(r: Callable[[Name], Callable[[str, str], str]], s: Callable[[Name], Name],
               t: Callable[[Name], Callable[[str], str]],
               meter: Optional[CostMeter] = None) -> Callable[[Operator], Operator]:
    """Like :func:`reduce_m2`, with the output converted: ``x -> r(phi)(x, theta(t(phi)(x)))``."""

    def wire(solve_b: Operator) -> Operator:
        def solve_a(phi: Name) -> Callable[[str], str]:
            phi = _metered(phi, meter)
            theta = _metered_fn(solve_b(s(phi)), meter)
            tx, rx = t(phi), r(phi)
            return lambda x: rx(x, theta(tx(x)))
        return solve_a

    return wire


def reduce_W2(r: Callable[[Name], Callable[[str], str]], s: Callable[[Name], Name],
              meter: Optional[CostMeter] = None) -> Callable[[Operator], Operator]:
    """Weihrauch-style wiring: A's answer is ``r(<phi, psi>)`` with ``psi = B(s(phi))``."""

    def wire(solve_b: Operator) -> Operator:
        def solve_a(phi: Name) -> Callable[[str], str]:
            phi = _metered(phi, meter)
            psi = solve_b(s(phi))
            if not isinstance(psi, Name):
                psi = Name(psi, regularity="trusted")
            return r(pair(phi, _metered(psi, meter)))
        return solve_a

    return wire


def _metered_fn(fn: Callable[[str], str], meter: Optional[CostMeter]) -> Callable[[str], str]:
    return fn if meter is None else MeteredOracle(fn, meter)


def translate(F: Callable[[Name], Name], name: Name) -> Name:
    """Apply a name-to-name translator."""
    return F(name)
