"""Second-order polynomials and the cost meter that enforces them.

A second-order polynomial is a term over a positive constant, the number
variable ``n``, ``+``, ``*`` and application of the function variable ``L``.
Evaluating one at a size function ``L`` and a length ``n`` gives a number;
the meter uses it as an online budget for a name-to-name computation.

Cost model: every oracle interaction costs ``|query| + |answer| + 1``, every
output symbol costs 1, and operations add documented unit charges for their
internal arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Union

from .errors import BoundExceeded, ParseError
from .names import Name

__all__ = [
    "Const", "Var", "Sum", "Prod", "ApplyL", "SecondOrderPolynomial",
    "eval_sopoly", "sopoly_parse", "sopoly_print",
    "CostMeter", "MeteredOracle", "metered_run", "MeteredOp",
    "size_function",
]


@dataclass(frozen=True)
class Const:
    value: int

    def __post_init__(self):
        if self.value < 1:
            raise ValueError("constants in a second-order polynomial are positive")


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Sum:
    left: "SecondOrderPolynomial"
    right: "SecondOrderPolynomial"


@dataclass(frozen=True)
class Prod:
    left: "SecondOrderPolynomial"
    right: "SecondOrderPolynomial"


@dataclass(frozen=True)
class ApplyL:
    arg: "SecondOrderPolynomial"


SecondOrderPolynomial = Union[Const, Var, Sum, Prod, ApplyL]
SizeFn = Callable[[int], int]


def eval_sopoly(p: SecondOrderPolynomial, L: SizeFn, n: int) -> int:
    if isinstance(p, Const):
        return p.value
    if isinstance(p, Var):
        return n
    if isinstance(p, Sum):
        return eval_sopoly(p.left, L, n) + eval_sopoly(p.right, L, n)
    if isinstance(p, Prod):
        return eval_sopoly(p.left, L, n) * eval_sopoly(p.right, L, n)
    if isinstance(p, ApplyL):
        return L(eval_sopoly(p.arg, L, n))
    raise TypeError(f"not a second-order polynomial: {p!r}")


# -- text form ---------------------------------------------------------------


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def peek(self) -> str:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str) -> None:
        if self.peek() != ch:
            got = self.peek() or "end of input"
            raise ParseError(f"expected {ch!r}, got {got!r}", self.pos)
        self.pos += 1

    def parse(self) -> SecondOrderPolynomial:
        node = self.sum()
        if self.peek():
            raise ParseError(f"unexpected {self.peek()!r}", self.pos)
        return node

    def sum(self):
        node = self.product()
        while self.peek() == "+":
            self.pos += 1
            node = Sum(node, self.product())
        return node

    def product(self):
        node = self.atom()
        while self.peek() == "*":
            self.pos += 1
            node = Prod(node, self.atom())
        return node

    def atom(self):
        ch = self.peek()
        start = self.pos
        if ch.isdigit():
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            value = int(self.text[start:self.pos])
            if value < 1:
                raise ParseError("constants must be positive integers", start)
            return Const(value)
        if ch == "n":
            self.pos += 1
            return Var()
        if ch == "L":
            self.pos += 1
            self.expect("(")
            node = self.sum()
            self.expect(")")
            return ApplyL(node)
        if ch == "(":
            self.pos += 1
            node = self.sum()
            self.expect(")")
            return node
        raise ParseError(f"unexpected {ch or 'end of input'!r}", start)


def sopoly_parse(text: str) -> SecondOrderPolynomial:
    """Parse ``P := int | n | P+P | P*P | L(P) | (P)``; ``+`` and ``*`` associate left."""
    return _Parser(text).parse()


def sopoly_print(p: SecondOrderPolynomial) -> str:
    if isinstance(p, Const):
        return str(p.value)
    if isinstance(p, Var):
        return "n"
    if isinstance(p, ApplyL):
        return f"L({sopoly_print(p.arg)})"
    if isinstance(p, Sum):
        right = sopoly_print(p.right)
        if isinstance(p.right, Sum):
            right = f"({right})"
        return f"{sopoly_print(p.left)}+{right}"
    if isinstance(p, Prod):
        left = sopoly_print(p.left)
        right = sopoly_print(p.right)
        if isinstance(p.left, Sum):
            left = f"({left})"
        if isinstance(p.right, (Sum, Prod)):
            right = f"({right})"
        return f"{left}*{right}"
    raise TypeError(f"not a second-order polynomial: {p!r}")


def size_function(spec: str) -> SizeFn:
    """Size functions for the CLI: ``id``, ``square``, ``const:k`` or ``table:FILE``.

    A table file holds ``n value`` lines; lengths past the last entry reuse
    the last value so the function stays non-decreasing.
    """
    if spec == "id":
        return lambda x: x
    if spec == "square":
        return lambda x: x * x
    if spec.startswith("const:"):
        k = int(spec[6:])
        return lambda x: k
    if spec.startswith("table:"):
        table: dict[int, int] = {}
        with open(spec[6:]) as fh:
            for line in fh:
                line = line.split("#", 1)[0].strip()
                if line:
                    a, b = line.split()
                    table[int(a)] = int(b)
        if not table:
            raise ValueError("empty size table")
        keys = sorted(table)
        values = [table[k] for k in keys]
        if any(a > b for a, b in zip(values, values[1:])):
            raise ValueError("size table is not non-decreasing")

        def lookup(x: int) -> int:
            best = 0
            for k, v in zip(keys, values):
                if k > x:
                    break
                best = v
            return best

        return lookup
    raise ValueError(f"unknown size function {spec!r}")


# -- metering ----------------------------------------------------------------


@dataclass
class CostMeter:
    """Accumulates the model cost of one computation against an optional bound."""

    oracle_size: SizeFn
    input_length: int
    bound: Optional[SecondOrderPolynomial] = None
    accumulated_cost: int = 0
    trace: list = field(default_factory=list)
    unit_charges: int = 0
    output_charges: int = 0

    def __post_init__(self):
        self.limit = (None if self.bound is None
                      else eval_sopoly(self.bound, self.oracle_size, self.input_length))

    def _check(self) -> None:
        if self.limit is not None and self.accumulated_cost > self.limit:
            raise BoundExceeded(self.accumulated_cost, self.limit)

    def record_query(self, query: str, answer: str) -> None:
        self.trace.append((len(query), len(answer)))
        self.accumulated_cost += len(query) + len(answer) + 1
        self._check()

    def charge(self, units: int) -> None:
        self.unit_charges += units
        self.accumulated_cost += units
        self._check()

    def charge_output(self, output: str) -> None:
        self.output_charges += len(output)
        self.accumulated_cost += len(output)
        self._check()


class MeteredOracle:
    """Callable view of a name that bills every query to a meter."""

    __slots__ = ("name", "meter")

    def __init__(self, name: Callable[[str], str], meter: Optional[CostMeter] = None):
        self.name = name
        self.meter = meter

    def __call__(self, query: str) -> str:
        answer = self.name(query)
        if self.meter is not None:
            self.meter.record_query(query, answer)
        return answer

    def charge(self, units: int) -> None:
        if self.meter is not None:
            self.meter.charge(units)


Step = Callable[[MeteredOracle, str], str]


def metered_run(computation: Step, phi: Name, u: str,
                bound: Optional[SecondOrderPolynomial] = None) -> tuple[str, int, CostMeter]:
    """Run ``computation(oracle, u)`` with all traffic to ``phi`` metered.

    Returns ``(output, cost, meter)``. Raises :class:`BoundExceeded` as soon as
    the running cost passes ``bound(|phi|)(|u|)``.
    """
    meter = CostMeter(oracle_size=phi.size, input_length=len(u), bound=bound)
    out = computation(MeteredOracle(phi, meter), u)
    meter.charge_output(out)
    return out, meter.accumulated_cost, meter


@dataclass(frozen=True)
class MeteredOp:
    """A name-level step function shipped together with its declared bound."""

    label: str
    step: Step
    bound_text: str

    @property
    def bound(self) -> SecondOrderPolynomial:
        return sopoly_parse(self.bound_text)

    def as_name(self, phi: Name, size: Optional[SizeFn] = None) -> Name:
        oracle = MeteredOracle(phi)
        return Name(lambda u: self.step(oracle, u), size=size, label=self.label)

    def run(self, phi: Name, u: str, check: bool = True):
        return metered_run(self.step, phi, u, self.bound if check else None)
