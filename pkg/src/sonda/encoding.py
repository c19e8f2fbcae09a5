"""Exact dyadic rationals, their ``s x / 1 0^k`` string codec, and string tupling.

A dyadic string is a sign, a binary numerator (leading zeros allowed) and a
denominator written as ``1`` followed by ``k`` zeros, e.g. ``-11/100`` is -3/4.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .errors import MalformedDyadic, MalformedTuple

__all__ = [
    "Dyadic",
    "encode_dyadic",
    "decode_dyadic",
    "parse_dyadic",
    "dyadic_arith",
    "round_fraction",
    "tuple_strings",
    "untuple_strings",
]

def _round_shift(num: int, shift: int) -> int:
    """Nearest integer to ``num / 2**shift``, ties toward -infinity."""
    if shift <= 0:
        return num << -shift
    # ceil((2*num - 2**shift) / 2**(shift+1))
    return -((-(2 * num - (1 << shift))) >> (shift + 1))


class Dyadic:
    """The number ``num / 2**exp`` with ``exp >= 0``.

    Instances are treated as immutable and are not normalized:
    ``Dyadic(2, 2)`` and ``Dyadic(1, 1)`` compare equal but encode to
    different strings.
    """

    __slots__ = ("num", "exp")

    def __init__(self, num: int, exp: int = 0):
        if exp < 0:
            raise ValueError("dyadic exponent must be non-negative")
        self.num = num
        self.exp = exp

    def __repr__(self):
        return f"Dyadic({self.num}, {self.exp})"

    def __reduce__(self):
        return (Dyadic, (self.num, self.exp))

    # construction -------------------------------------------------------

    @classmethod
    def from_fraction(cls, value: Fraction | int) -> "Dyadic":
        value = Fraction(value)
        den = value.denominator
        if den & (den - 1):
            raise ValueError(f"{value} is not a dyadic rational")
        return cls(value.numerator, den.bit_length() - 1)

    @classmethod
    def parse(cls, text: str) -> "Dyadic":
        return parse_dyadic(text)

    # conversion ---------------------------------------------------------

    def to_fraction(self) -> Fraction:
        return Fraction(self.num, 1 << self.exp)

    def __float__(self) -> float:
        return float(self.to_fraction())

    def encode(self, width: int | None = None) -> str:
        """Eq.-(1) string; ``width`` left-pads the numerator with zeros."""
        bits = format(abs(self.num), "b")
        if width is not None and width > len(bits):
            bits = bits.rjust(width, "0")
        return ("-" if self.num < 0 else "+") + bits + "/1" + "0" * self.exp

    def __str__(self) -> str:
        return self.encode()

    # arithmetic ---------------------------------------------------------

    def _aligned(self, other: "Dyadic") -> tuple[int, int, int]:
        if self.exp >= other.exp:
            return self.num, other.num << (self.exp - other.exp), self.exp
        return self.num << (other.exp - self.exp), other.num, other.exp

    def __add__(self, other):
        if isinstance(other, int):
            other = Dyadic(other)
        if not isinstance(other, Dyadic):
            return NotImplemented
        a, b, e = self._aligned(other)
        return Dyadic(a + b, e)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, int):
            other = Dyadic(other)
        if not isinstance(other, Dyadic):
            return NotImplemented
        a, b, e = self._aligned(other)
        return Dyadic(a - b, e)

    def __rsub__(self, other):
        if isinstance(other, int):
            return Dyadic(other) - self
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, int):
            return Dyadic(self.num * other, self.exp)
        if not isinstance(other, Dyadic):
            return NotImplemented
        return Dyadic(self.num * other.num, self.exp + other.exp)

    __rmul__ = __mul__

    def __neg__(self) -> "Dyadic":
        return Dyadic(-self.num, self.exp)

    def __abs__(self) -> "Dyadic":
        return Dyadic(abs(self.num), self.exp)

    def shift(self, k: int) -> "Dyadic":
        """Multiply by ``2**k``."""
        if k >= 0:
            if k <= self.exp:
                return Dyadic(self.num, self.exp - k)
            return Dyadic(self.num << (k - self.exp), 0)
        return Dyadic(self.num, self.exp - k)

    def round_to(self, k: int) -> "Dyadic":
        """Nearest ``m / 2**k``; ties go toward -infinity."""
        if self.exp <= k:
            return Dyadic(self.num << (k - self.exp), k)
        return Dyadic(_round_shift(self.num, self.exp - k), k)

    def floor(self) -> int:
        return self.num >> self.exp

    def reduced(self) -> "Dyadic":
        num, exp = self.num, self.exp
        if num == 0:
            return Dyadic(0, 0)
        tz = (num & -num).bit_length() - 1
        tz = min(tz, exp)
        return Dyadic(num >> tz, exp - tz)

    # comparison ---------------------------------------------------------

    def _cmp(self, other) -> int:
        if isinstance(other, int):
            other = Dyadic(other)
        elif isinstance(other, Fraction):
            lhs = self.num * other.denominator
            rhs = other.numerator << self.exp
            return (lhs > rhs) - (lhs < rhs)
        elif not isinstance(other, Dyadic):
            raise TypeError
        a, b, _ = self._aligned(other)
        return (a > b) - (a < b)

    def __eq__(self, other):
        if not isinstance(other, (Dyadic, int, Fraction)):
            return NotImplemented
        return self._cmp(other) == 0

    def __hash__(self):
        return hash(self.to_fraction())

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def sign(self) -> int:
        return (self.num > 0) - (self.num < 0)


ZERO = Dyadic(0)
ONE = Dyadic(1)


def encode_dyadic(sign: str, bits: str, exponent: int) -> str:
    """Bit-level encoder: ``sign + bits + '/1' + '0'*exponent``.

    ``bits`` is kept verbatim, so leading zeros survive.
    """
    if sign not in ("+", "-"):
        raise MalformedDyadic(f"sign must be '+' or '-', got {sign!r}")
    if not bits or bits.strip("01"):
        raise MalformedDyadic(f"numerator must be a nonempty binary string, got {bits!r}")
    if exponent < 0:
        raise MalformedDyadic("exponent must be non-negative")
    return sign + bits + "/1" + "0" * exponent


def parse_dyadic(text: str) -> Dyadic:
    slash = text.find("/")
    if (slash < 2 or text[0] not in "+-" or text[slash + 1:slash + 2] != "1"
            or text[1:slash].strip("01") or text[slash + 2:].strip("0")):
        raise MalformedDyadic(f"not a dyadic string: {text!r}")
    bits = text[1:slash]
    num = int(bits, 2)
    return Dyadic(-num if text[0] == "-" else num, len(text) - slash - 2)


def decode_dyadic(text: str) -> Fraction:
    """The exact number a dyadic string encodes."""
    return parse_dyadic(text).to_fraction()


def dyadic_arith(op: str, a: Dyadic, b: Dyadic | None = None, k: int | None = None):
    """Dispatch table over exact dyadic operations.

    ``op`` is one of add, sub, mul, neg, compare, round_to (the latter takes
    ``k``). ``compare`` returns -1, 0 or 1.
    """
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "neg":
        return -a
    if op == "compare":
        return a._cmp(b)
    if op == "round_to":
        if k is None:
            raise ValueError("round_to needs k")
        return a.round_to(k)
    raise ValueError(f"unknown dyadic operation {op!r}")


def round_fraction(value: Fraction, k: int) -> Dyadic:
    """Nearest ``m / 2**k`` to an arbitrary rational, ties toward -infinity."""
    num = value.numerator << (k + 1)
    den = value.denominator
    # nearest with ties down: ceil(value*2^k - 1/2) = ceil((2*num' - den) / (2*den))
    m = -((den - num) // (2 * den))
    return Dyadic(m, k)


# -- tupling ---------------------------------------------------------------


class _Doubler(dict):
    def __missing__(self, code):
        ch = chr(code)
        self[code] = ch + ch
        return ch + ch


_DOUBLE = _Doubler()


def _double(part: str) -> str:
    try:
        raw = part.encode("latin-1")
    except UnicodeEncodeError:
        return part.translate(_DOUBLE)
    buf = bytearray(2 * len(raw))
    buf[0::2] = raw
    buf[1::2] = raw
    return buf.decode("latin-1")


def tuple_strings(parts: Iterable[str]) -> str:
    """Self-delimiting tuple: every symbol doubled, each part closed by ``01``.

    The output length is ``2*sum(len(p)) + 2*len(parts)``; the empty list maps
    to the empty string.
    """
    return "".join([_double(p) + "01" for p in parts])


def untuple_strings(text: str) -> list[str]:
    if len(text) % 2:
        raise MalformedTuple("odd-length tuple string")
    # a part is a run of doubled symbols, so the first even-aligned "01" ends it
    parts = []
    pos, end = 0, len(text)
    find = text.find
    while pos < end:
        sep = find("01", pos)
        while sep >= 0 and (sep - pos) % 2:
            sep = find("01", sep + 1)
        if sep < 0:
            raise MalformedTuple(f"unterminated tuple part at position {pos}")
        body = text[pos:sep]
        half = body[::2]
        if half != body[1::2]:
            raise MalformedTuple(f"bad tuple encoding at position {pos}")
        parts.append(half)
        pos = sep + 2
    return parts


def tuple_length(lengths: Sequence[int]) -> int:
    return 2 * sum(lengths) + 2 * len(lengths)
