"""Real numbers as regular names and the arithmetic operators on them.

A name ``phi`` stands for the real ``x`` when ``phi(0^i)`` is a dyadic string
(possibly ``#``-padded) within ``2^-i`` of ``x`` for every ``i``. Any other
query ``u`` is answered like ``0^|u|``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Callable, Optional, Union

from .encoding import Dyadic, parse_dyadic
from .errors import MalformedDyadic, MalformedName
from .names import Name, pad_to, pair, strip_padding, unpair_answer
from .sopoly import MeteredOp, MeteredOracle

__all__ = [
    "RealName",
    "real_from_dyadic",
    "to_dyadic",
    "real_add",
    "real_neg",
    "real_sub",
    "real_mul",
    "real_exp01",
    "real_sin",
    "magnitude_exponent",
    "two_pi",
    "exp_terms",
    "sin_terms",
    "ADD", "NEG", "MUL",
]


def decode_answer(raw: str) -> Dyadic:
    """Parse a (possibly padded) oracle answer, reporting bad grammar as MalformedName."""
    try:
        return parse_dyadic(strip_padding(raw))
    except MalformedDyadic as exc:
        raise MalformedName(f"oracle answer is not a dyadic string: {raw!r}") from exc


def schedule(int_bits: int, frac_bits: int) -> int:
    """Length that fits any dyadic with ``|m| < 2^(int_bits + frac_bits)`` and ``frac_bits`` fraction digits."""
    return 3 + int_bits + 2 * frac_bits


class RealName:
    """A name of a real number."""

    __slots__ = ("name",)

    def __init__(self, name: Name):
        self.name = name

    def __repr__(self):
        return f"RealName({self.name.label})"

    def approx(self, n: int) -> Dyadic:
        return to_dyadic(self, n)

    def __add__(self, other: "RealName") -> "RealName":
        return real_add(self, other)

    def __sub__(self, other: "RealName") -> "RealName":
        return real_sub(self, other)

    def __mul__(self, other: "RealName") -> "RealName":
        return real_mul(self, other)

    def __neg__(self) -> "RealName":
        return real_neg(self)


def _level_name(level: Callable[[int], str], label: str,
                size: Optional[Callable[[int], int]] = None) -> RealName:
    """Real name answering every length-``n`` query with ``level(n)``, cached.

    ``size``, when known, is declared so that size lookups need no evaluation;
    the name still checks every answer against it.
    """
    cache: dict[int, str] = {}

    def query(u: str) -> str:
        n = len(u)
        out = cache.get(n)
        if out is None:
            out = cache[n] = level(n)
        return out

    return RealName(Name(query, size=size, label=label))


def real_from_dyadic(d: Union[Dyadic, str, int, Fraction]) -> RealName:
    """Canonical name of a dyadic: level ``i`` holds ``d`` rounded to ``i+2`` fraction bits."""
    if isinstance(d, str):
        d = parse_dyadic(d)
    elif not isinstance(d, Dyadic):
        d = Dyadic.from_fraction(d)
    int_bits = (abs(d).floor() + 1).bit_length()

    def level(i: int) -> str:
        return pad_to(d.round_to(i + 2).encode(), schedule(int_bits, i + 2))

    return _level_name(level, label=d.encode(), size=lambda i: schedule(int_bits, i + 2))


def to_dyadic(x: RealName, n: int) -> Dyadic:
    """A dyadic within ``2^-n`` of the real ``x`` names."""
    return decode_answer(x.name("0" * n))


def magnitude_exponent(x: RealName) -> int:
    """Some ``M`` with ``|x| < 2^M``, read off the length of the precision-0 answer.

    A dyadic string of length ``l`` encodes a number below ``2^l``, and the
    answer is within 1 of ``x``.
    """
    return len(x.name("")) + 1


# -- name-level steps (shared by the plain and the metered paths) ------------


def _add_step(oracle: MeteredOracle, u: str) -> str:
    w = "0" * (len(u) + 1)
    ra = unpair_answer(oracle("0" + w))
    rb = unpair_answer(oracle("1" + w))
    oracle.charge(len(ra) + len(rb))
    total = decode_answer(ra) + decode_answer(rb)
    return pad_to(total.encode(), 2 * (len(ra) + len(rb)) + 3)


def _neg_step(oracle: MeteredOracle, u: str) -> str:
    raw = oracle("0" * len(u))
    oracle.charge(len(raw))
    return pad_to((-decode_answer(raw)).encode(), len(raw))


def _mul_step(oracle: MeteredOracle, u: str) -> str:
    k = max(len(unpair_answer(oracle("0"))), len(unpair_answer(oracle("1"))))
    w = "0" * (len(u) + k + 1)
    ra = unpair_answer(oracle("0" + w))
    rb = unpair_answer(oracle("1" + w))
    oracle.charge(len(ra) * len(rb))
    product = decode_answer(ra) * decode_answer(rb)
    return pad_to(product.encode(), len(ra) + len(rb))


# Bounds are in terms of L = |input name| and n = |query|; for add and mul
# the input name is the pair <x, y>.
ADD = MeteredOp("add", _add_step, "6*(L(n+2)+n+2)")
NEG = MeteredOp("neg", _neg_step, "3*(L(n)+n+1)")
MUL = MeteredOp(
    "mul", _mul_step,
    "L(n+L(n+1)+2)*L(n+L(n+1)+2)+6*(L(n+L(n+1)+2)+n+L(n+1)+2)")


def _op_name(op: MeteredOp, phi: Name, label: str, size=None) -> RealName:
    oracle = MeteredOracle(phi)
    return _level_name(lambda n: op.step(oracle, "0" * n), label, size)


def real_add(x: RealName, y: RealName) -> RealName:
    """Level ``m`` is the exact sum of the operands' level ``m+1`` answers."""
    a, b = x.name, y.name
    return _op_name(ADD, pair(a, b), f"({a.label}+{b.label})",
                    size=lambda n: 2 * (a.size(n + 1) + b.size(n + 1)) + 3)


def real_neg(x: RealName) -> RealName:
    return _op_name(NEG, x.name, f"-{x.name.label}", size=x.name.size)


def real_sub(x: RealName, y: RealName) -> RealName:
    return real_add(x, real_neg(y))


def real_mul(x: RealName, y: RealName) -> RealName:
    """Level ``m`` is the exact product of the level ``m+k+1`` answers.

    ``k`` is the longer of the two precision-0 answer lengths, so both
    operands are below ``2^k`` in absolute value.
    """
    a, b = x.name, y.name

    def size(n: int) -> int:
        m = n + max(a.size(0), b.size(0)) + 1
        return a.size(m) + b.size(m)

    return _op_name(MUL, pair(a, b), f"({a.label}*{b.label})", size=size)


# -- elementary functions ----------------------------------------------------


def exp_terms(n: int) -> int:
    """Smallest ``N`` with ``3/(N+1)! < 2^-(n+2)``."""
    bound = 3 << (n + 2)
    N, fact = 0, 1  # fact == (N+1)!
    while fact <= bound:
        N += 1
        fact *= N + 1
    return N


def sin_terms(n: int) -> int:
    """Smallest ``N >= 2`` with ``2 * 4^(2N+3) / (2N+3)! < 2^-(n+3)``.

    That bounds the tail of the sine series on ``[-4, 4]`` after the term of
    degree ``2N+1``; ``N >= 2`` keeps consecutive tail terms shrinking by at
    least half.
    """
    N = 2
    while 2 * 4 ** (2 * N + 3) << (n + 3) >= factorial(2 * N + 3):
        N += 1
    return N


def _series(a: Dyadic, terms: int, odd: bool, bits: int) -> Dyadic:
    """Partial Taylor sum of exp (or, with ``odd``, sin) at ``a``, to about ``bits`` fraction bits.

    Terms are truncated independently in fixed point; with the guard bits
    added here the sum is within ``2^-(bits+4)`` of the exact partial sum.
    """
    A, e = a.num, a.exp
    W = bits + 4 + (terms + 2).bit_length()
    total = 0
    power, fact = 1, 1  # A^j and j!
    degree = 0
    for idx in range(terms + 1):
        j = 2 * idx + 1 if odd else idx
        while degree < j:
            degree += 1
            power *= A
            fact *= degree
        num = power << W
        den = fact << (e * j)
        term = num // den if num >= 0 else -((-num) // den)
        total += -term if odd and idx % 2 else term
    return Dyadic(total, W)


def real_exp01(x: RealName) -> RealName:
    """``exp`` on ``[0, 1]``.

    The argument is read at precision ``n+3`` and clamped into ``[0, 1]``;
    outside that interval the result carries no guarantee.
    """

    def level(n: int) -> str:
        a = to_dyadic(x, n + 3)
        if a < 0:
            a = Dyadic(0)
        elif a > 1:
            a = Dyadic(1)
        value = _series(a, exp_terms(n), odd=False, bits=n + 2).round_to(n + 2)
        return pad_to(value.encode(), schedule(3, n + 2))

    return _level_name(level, f"exp01({x.name.label})", size=lambda n: schedule(3, n + 2))


@lru_cache(maxsize=64)
def _atan_inv(x: int, bits: int) -> tuple[int, int]:
    """Fixed-point ``atan(1/x) * 2^bits``, truncated termwise; returns (value, terms)."""
    total, term, k, sign = 0, (1 << bits) // x, 1, 1
    x2 = x * x
    terms = 0
    while term:
        total += sign * (term // k)
        term //= x2
        k += 2
        sign = -sign
        terms += 1
    return total, terms


@lru_cache(maxsize=64)
def two_pi(prec: int) -> Dyadic:
    """A dyadic within ``2^-prec`` of ``2*pi`` (Machin's formula in fixed point)."""
    guard = 12
    while True:
        bits = prec + guard
        a, ta = _atan_inv(5, bits)
        b, tb = _atan_inv(239, bits)
        # each truncated term is off by < 2 ulps; the omitted tail by < 1 ulp
        err_ulps = 2 * (16 * (2 * ta + 1) + 4 * (2 * tb + 1))
        if err_ulps < 1 << (guard - 1):
            break
        guard += 4
    return Dyadic(2 * (16 * a - 4 * b), bits)


def real_sin(x: RealName) -> RealName:
    """``sin`` on the whole line via reduction modulo ``2*pi`` into ``[-4, 4]``."""
    mag: list[int] = []

    def level(n: int) -> str:
        if not mag:
            mag.append(magnitude_exponent(x))
        M = mag[0]
        a = to_dyadic(x, n + 4)
        P = two_pi(n + M + 8)
        q = a.to_fraction() / P.to_fraction()
        k = (2 * q.numerator + q.denominator) // (2 * q.denominator)
        r = a - P * k
        value = _series(r, sin_terms(n), odd=True, bits=n + 3).round_to(n + 3)
        return pad_to(value.encode(), schedule(2, n + 3))

    return _level_name(level, f"sin({x.name.label})", size=lambda n: schedule(2, n + 3))
