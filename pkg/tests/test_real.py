import math
import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from sonda.encoding import Dyadic
from sonda.errors import MalformedName
from sonda.names import Name, widen
from sonda.real import (RealName, decode_answer, exp_terms, magnitude_exponent, real_add,
                        real_exp01, real_from_dyadic, real_mul, real_neg, real_sin, sin_terms,
                        to_dyadic, two_pi)

mpmath.mp.dps = 60


def value(x: RealName, n: int) -> Fraction:
    return to_dyadic(x, n).to_fraction()


def close(x: RealName, target, n: int) -> bool:
    v = to_dyadic(x, n)
    if isinstance(target, Fraction):
        return abs(v.to_fraction() - target) < Fraction(1, 1 << n)
    return abs(mpmath.mpf(v.num) / mpmath.mpf(2) ** v.exp - target) < mpmath.mpf(2) ** -n


dyadics = st.builds(Dyadic, st.integers(-(1 << 20), 1 << 20), st.integers(0, 12))


def test_from_dyadic_examples():
    zero = real_from_dyadic(Dyadic(0))
    assert {value(zero, n) for n in range(10)} == {0}
    assert value(real_from_dyadic(Dyadic(1, 1)), 0) == Fraction(1, 2)
    assert close(real_from_dyadic("+11/100"), Fraction(3, 4), 10)


@given(dyadics)
def test_from_dyadic_validity(d):
    x = real_from_dyadic(d)
    for i in range(0, 41, 5):
        assert abs(value(x, i) - d.to_fraction()) < Fraction(1, 1 << i)


def test_malformed_answer():
    bad = RealName(Name(lambda u: "xyz"))
    with pytest.raises(MalformedName):
        to_dyadic(bad, 3)
    with pytest.raises(MalformedName):
        decode_answer("+1/2")


def test_add_examples():
    s = real_add(real_from_dyadic(Dyadic(1, 1)), real_from_dyadic(Dyadic(1, 2)))
    assert all(close(s, Fraction(3, 4), m) for m in range(20))
    x = real_from_dyadic(Dyadic(-45, 3))
    z = real_add(x, real_neg(x))
    assert all(close(z, Fraction(0), m) for m in range(20))


@given(dyadics, dyadics)
def test_add_mul_contract(a, b):
    x, y = real_from_dyadic(a), real_from_dyadic(b)
    s, p = real_add(x, y), real_mul(x, y)
    for m in range(0, 31, 3):
        assert abs(value(s, m) - (a + b).to_fraction()) < Fraction(1, 1 << m)
        assert abs(value(p, m) - (a * b).to_fraction()) < Fraction(1, 1 << m)


def test_mul_examples():
    three = real_from_dyadic(3)
    nine = real_mul(three, three)
    assert all(close(nine, Fraction(9), m) for m in range(31))
    zero = real_mul(real_from_dyadic(0), real_from_dyadic(Dyadic(-999, 2)))
    assert all(close(zero, Fraction(0), m) for m in range(20))


def test_operators_compose():
    x = real_from_dyadic(Dyadic(5, 2))
    y = real_from_dyadic(Dyadic(-3, 1))
    e = (x * y - x) + (-y)
    want = Fraction(5, 4) * Fraction(-3, 2) - Fraction(5, 4) + Fraction(3, 2)
    assert all(close(e, want, m) for m in range(25))


@pytest.mark.parametrize("d", [Dyadic(0), Dyadic(1 << 10), Dyadic(-77, 3), Dyadic(12345, 20)])
def test_magnitude_exponent(d):
    M = magnitude_exponent(real_from_dyadic(d))
    assert abs(d.to_fraction()) < 2 ** M
    if d.to_fraction() == 1 << 10:
        assert M >= 11


def test_term_counts():
    assert exp_terms(10) == 7
    for n in (0, 5, 30, 100):
        N = exp_terms(n)
        assert Fraction(3, math.factorial(N + 1)) < Fraction(1, 1 << (n + 2))
        assert N == 0 or Fraction(3, math.factorial(N)) >= Fraction(1, 1 << (n + 2))
        assert sin_terms(n) >= 2


def test_exp_examples():
    one = real_exp01(real_from_dyadic(0))
    assert all(close(one, Fraction(1), n) for n in range(30))
    e = real_exp01(real_from_dyadic(1))
    assert close(e, mpmath.e, 30)


def test_sin_examples():
    z = real_sin(real_from_dyadic(0))
    assert all(close(z, Fraction(0), n) for n in range(30))
    assert close(real_sin(real_from_dyadic(1)), mpmath.sin(1), 30)
    assert close(real_sin(real_from_dyadic(Dyadic(-1000, 0))), mpmath.sin(-1000), 25)


def test_sin_periodicity():
    rng = random.Random(5)
    tp = two_pi(60)
    assert abs(mpmath.mpf(tp.num) / mpmath.mpf(2) ** tp.exp - 2 * mpmath.pi) < mpmath.mpf(2) ** -60
    for _ in range(10):
        d = Dyadic(rng.randrange(-4000, 4000), 6)
        a = value(real_sin(real_from_dyadic(d)), 20)
        b = value(real_sin(real_from_dyadic(d + tp)), 20)
        # each within 2^-20 of its sine; the shift by 2pi is off by < 2^-60
        assert abs(a - b) < Fraction(2, 1 << 20) + Fraction(1, 1 << 59)


@given(st.integers(0, 1 << 16))
def test_exp01_grid(k):
    d = Dyadic(k, 16)
    assert close(real_exp01(real_from_dyadic(d)), mpmath.exp(mpmath.mpf(k) / 2 ** 16), 24)


def test_sin_of_real_expression():
    x = real_add(real_from_dyadic(Dyadic(3, 0)), real_sin(real_from_dyadic(Dyadic(1))))
    target = 3 + mpmath.sin(1)
    assert close(real_sin(x), mpmath.sin(target), 20)


def test_declared_sizes_hold():
    x = real_from_dyadic(Dyadic(-45, 4))
    y = real_from_dyadic(Dyadic(1000, 3))
    for r in (real_add(x, y), real_mul(x, y), real_neg(x), real_sin(y),
              real_exp01(real_from_dyadic(Dyadic(1, 1)))):
        for n in range(0, 25, 3):
            assert len(r.name("1" * n)) == r.name.size(n)


def test_widened_inputs_give_same_values():
    x = real_from_dyadic(Dyadic(7, 3))
    wide = RealName(widen(x.name, 4, 3))
    for m in range(15):
        assert value(real_mul(wide, wide), m) == value(real_mul(x, x), m)
