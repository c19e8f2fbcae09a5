"""Names of continuous functions on [0,1] (and Lipschitz ones on [0,1]x[-1,1]).

A function name is the pair ``<mu_bar, phi>``: ``mu_bar(u) = 0^mu(|u|)``
carries a modulus of continuity and ``phi`` answers the tupled query
``(0^n, u)`` with a dyadic within ``2^-n`` of ``f([[u]])``. Arguments outside
the domain are clamped onto it before evaluation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence, Union

from .encoding import Dyadic, round_fraction, tuple_strings, untuple_strings
from .errors import MalformedName, MalformedTuple, MalformedDyadic
from .encoding import parse_dyadic
from .names import Name, const_name, pad_to, pair, unary_name, unpair_answer
from .real import RealName, _level_name, decode_answer, schedule
from .sopoly import MeteredOp, MeteredOracle

__all__ = [
    "CFunName",
    "LipName",
    "make_cfun",
    "make_lip_name",
    "apply",
    "magnitude_bound",
    "check_cfun_wellformed",
    "WellformedReport",
    "APPLY",
    "UNIT_BOX",
    "LIP_BOX",
]

Number = Union[Dyadic, Fraction, int]
Evaluator = Callable[[tuple, int], Number]

UNIT_BOX = ((Dyadic(0), Dyadic(1)),)
LIP_BOX = ((Dyadic(0), Dyadic(1)), (Dyadic(-1), Dyadic(1)))

_ZERO_ANSWER = "+0/1"


def _clamp(d: Dyadic, lo: Dyadic, hi: Dyadic) -> Dyadic:
    # integer comparisons; this sits on the Euler hot path
    e = max(d.exp, lo.exp, hi.exp)
    x = d.num << (e - d.exp)
    if x < lo.num << (e - lo.exp):
        return lo
    if x > hi.num << (e - hi.exp):
        return hi
    return d


class CFunName:
    """A name ``<mu_bar, phi>`` of a continuous function on a box.

    ``direct``, when set, maps ``(n, *points)`` to the very Dyadic that
    decoding ``raw_query(n, ...)`` would give; hot loops use it to skip the
    string round trip.
    """

    __slots__ = ("name", "arity", "direct")

    def __init__(self, name: Name, arity: int = 1, direct: Optional[Callable] = None):
        self.name = name
        self.arity = arity
        self.direct = direct

    def modulus(self, n: int) -> int:
        return len(unpair_answer(self.name("0" + "0" * n)))

    def raw_query(self, n: int, *points: str) -> str:
        return unpair_answer(self.name("1" + tuple_strings(("0" * n,) + points)))

    def approx(self, n: int, *points: Dyadic) -> Dyadic:
        if len(points) != self.arity:
            raise ValueError(f"expected {self.arity} coordinates")
        return decode_answer(self.raw_query(n, *(p.encode() for p in points)))


def make_cfun(mu: Callable[[int], int], eval_at: Evaluator, magnitude: int,
              box: Sequence[tuple[Dyadic, Dyadic]] = UNIT_BOX, label: str = "f") -> CFunName:
    """Build a function name from a modulus and an evaluator.

    ``eval_at(points, k)`` must return a number within ``2^-k`` of ``f`` at the
    (already clamped) dyadic point. ``magnitude`` is any ``M`` with
    ``|f| < 2^M`` on the box; it fixes the padding schedule. The name answers
    ``(0^n, u)`` with ``eval_at(u, n+2)`` rounded to ``n+2`` fraction bits.
    """
    arity = len(box)
    int_bits = magnitude + 1

    def direct(n: int, *points: Dyadic) -> Dyadic:
        pts = tuple(_clamp(p, lo, hi) for p, (lo, hi) in zip(points, box))
        v = eval_at(pts, n + 2)
        if isinstance(v, Dyadic):
            return v.round_to(n + 2)
        return round_fraction(Fraction(v), n + 2)

    def query(w: str) -> str:
        # longest precision a tuple of this length can carry: every dyadic
        # coordinate is at least 3 symbols long
        n_max = max(0, (len(w) - 2 - 8 * arity) // 2)
        width = schedule(int_bits, n_max + 2)
        try:
            parts = untuple_strings(w)
            if len(parts) != arity + 1 or parts[0].strip("0"):
                raise MalformedTuple
            pts = [parse_dyadic(p) for p in parts[1:]]
        except (MalformedTuple, MalformedDyadic):
            return pad_to(_ZERO_ANSWER, width)
        return pad_to(direct(len(parts[0]), *pts).encode(), width)

    approx = Name(query, label=label)
    return CFunName(pair(unary_name(mu), approx), arity=arity, direct=direct)


class LipName:
    """A name ``<f, 0^L>`` of a function on [0,1]x[-1,1] that is L-Lipschitz in y."""

    __slots__ = ("name", "direct")

    def __init__(self, name: Name, direct: Optional[Callable] = None):
        self.name = name
        self.direct = direct

    @property
    def lipschitz(self) -> int:
        return len(unpair_answer(self.name("1")))

    def modulus(self, n: int) -> int:
        return len(unpair_answer(unpair_answer(self.name("00" + "0" * n))))

    def raw_query(self, n: int, u: str, v: str) -> str:
        return unpair_answer(unpair_answer(self.name("01" + tuple_strings(("0" * n, u, v)))))

    def approx(self, n: int, t: Dyadic, y: Dyadic) -> Dyadic:
        return decode_answer(self.raw_query(n, t.encode(), y.encode()))

    @property
    def cfun(self) -> CFunName:
        inner = self.name
        return CFunName(Name(lambda u: unpair_answer(inner("0" + u)), regularity="trusted"),
                        arity=2, direct=self.direct)


def make_lip_name(f: CFunName, L: int) -> LipName:
    if f.arity != 2:
        raise ValueError("a Lipschitz name wraps a function of (t, y)")
    return LipName(pair(f.name, const_name("0" * L)), direct=f.direct)


def magnitude_bound(f: CFunName) -> int:
    """``ceil(log2(|f(0)-approx| + 1 + 2^mu(0)))``; bounds ``|f|`` by ``2^M`` on the box.

    Moving across the (width at most 2) box in steps of ``2^-mu(0)`` changes
    ``f`` by at most 1 per step.
    """
    v0 = f.approx(0, *([Dyadic(0)] * f.arity))
    return ceil_log2(abs(v0.to_fraction()) + 1 + (1 << f.modulus(0)))


def ceil_log2(value: Fraction) -> int:
    """Exact ``ceil(log2(value))`` for a positive rational."""
    value = Fraction(value)
    if value <= 0:
        raise ValueError("log of a non-positive number")
    k = value.numerator.bit_length() - value.denominator.bit_length()
    while Fraction(2) ** k < value:
        k += 1
    while Fraction(2) ** (k - 1) >= value:
        k -= 1
    return k


def _apply_step(oracle: MeteredOracle, u: str) -> str:
    n = len(u)
    # everything about f goes through "0", the argument x through "1"
    mu = len(unpair_answer(unpair_answer(oracle("00" + "0" * (n + 2)))))
    mu0 = len(unpair_answer(unpair_answer(oracle("00"))))
    v0 = decode_answer(unpair_answer(unpair_answer(
        oracle("01" + tuple_strings(("", _ZERO_ANSWER))))))
    bits = ceil_log2(abs(v0.to_fraction()) + 1 + (1 << mu0))
    a = decode_answer(unpair_answer(oracle("1" + "0" * (mu + 1))))
    a = _clamp(a, Dyadic(0), Dyadic(1))
    raw = unpair_answer(unpair_answer(oracle("01" + tuple_strings(("0" * (n + 2), a.encode())))))
    oracle.charge(len(raw))
    out = decode_answer(raw).round_to(n + 2)
    return pad_to(out.encode(), schedule(bits + 1, n + 2))


# L = |<f, x>|; see _apply_step for the query pattern the bound follows
APPLY = MeteredOp(
    "apply", _apply_step,
    "8*(L(2*L(L(n+4)+2)+2*n+12)+L(L(n+4)+2)+L(n+4)+n+12)")


def apply(f: CFunName, x: RealName) -> RealName:
    """``f(x)`` for ``x`` in ``[0, 1]``.

    To answer at precision ``n``: read ``x`` at ``mu(n+2)+1``, clamp it into
    ``[0, 1]``, ask ``f``'s approximation at precision ``n+2`` and round the
    result to ``n+2`` fraction bits. The three errors are each at most
    ``2^-(n+2)``.
    """
    if f.arity != 1:
        raise ValueError("apply takes a function of one variable")
    oracle = MeteredOracle(pair(f.name, x.name))
    return _level_name(lambda n: _apply_step(oracle, "0" * n), f"apply({x.name.label})")


# -- well-formedness checks ---------------------------------------------------


@dataclass
class WellformedReport:
    checked: int = 0
    violations: list = field(default_factory=list)
    max_error: float = 0.0  # in units of 2^-n

    @property
    def ok(self) -> bool:
        return not self.violations


def abs_error(v: Dyadic, ref) -> Union[Fraction, float]:
    """``|v - ref|``: exact for rational references, mpmath otherwise."""
    if isinstance(ref, (int, Fraction, Dyadic)):
        return abs(v.to_fraction() - Fraction(ref if not isinstance(ref, Dyadic) else ref.to_fraction()))
    import mpmath
    return abs(mpmath.mpf(v.num) / mpmath.mpf(2) ** v.exp - ref)


def check_cfun_wellformed(f: CFunName, reference: Callable, samples: Sequence,
                          levels: Sequence[int], other: Optional[CFunName] = None) -> WellformedReport:
    """Test the modulus and approximation conditions of ``f`` on sample points.

    ``reference(*point)`` gives the true value (a rational, or an mpmath
    number precise enough for the levels checked). With ``other``, the two
    names are also required to agree within ``2^(2-n)`` at every sample.
    """
    report = WellformedReport()
    pts = [p if isinstance(p, tuple) else (p,) for p in samples]
    refs = [reference(*p) for p in pts]
    prev_mu = None
    for n in levels:
        mu = f.modulus(n)
        if prev_mu is not None and mu < prev_mu and n > prev_n:
            report.violations.append(("modulus not monotone", n, mu))
        prev_mu, prev_n = mu, n
        scale = 1 << n  # errors are compared as multiples of 2^-n
        for p, ref in zip(pts, refs):
            report.checked += 1
            v = f.approx(n, *p)
            err = abs_error(v, ref) * scale
            report.max_error = max(report.max_error, float(err))
            if not err < 1:
                report.violations.append(("approximation", n, p, float(err) / scale))
            if other is not None:
                w = other.approx(n, *p)
                if abs(v.to_fraction() - w.to_fraction()) * scale > 4:
                    report.violations.append(("disagreement", n, p))
        # modulus: any two samples within 2^-mu must have values within 2^-n
        step = Fraction(1, 1 << mu)
        for i, (p, rp) in enumerate(zip(pts, refs)):
            for q, rq in zip(pts[i + 1:], refs[i + 1:]):
                if max(abs(a.to_fraction() - b.to_fraction()) for a, b in zip(p, q)) <= step:
                    if abs(rp - rq) * scale > 1:
                        report.violations.append(("modulus", n, p, q))
    return report
