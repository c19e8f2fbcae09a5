from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from sonda.encoding import Dyadic
from sonda.errors import ParseError
from sonda.expr import (bounds, cfun_of, evaluate, lip_of, modulus_for, parse_expr,
                        parse_literal, real_name_of)
from sonda.real import to_dyadic


@pytest.mark.parametrize("text, want", [
    ("1/2", Fraction(1, 2)),
    ("3/8", Fraction(3, 8)),
    ("1/100", Fraction(1, 4)),       # binary string form
    ("11/100", Fraction(3, 4)),
    ("-11/100", Fraction(-3, 4)),
    ("+1/1", Fraction(1)),
    ("5", Fraction(5)),
    ("0.25", Fraction(1, 4)),
])
def test_literals(text, want):
    assert parse_literal(text).to_fraction() == want


@pytest.mark.parametrize("bad", ["1/3", "0.1", "2/10", "1/0"])
def test_bad_literals(bad):
    with pytest.raises(ValueError):
        parse_literal(bad)


def test_constant_expressions():
    x = real_name_of(parse_expr("1/2 + 1/4"))
    assert to_dyadic(x, 10).to_fraction() == Fraction(3, 4)
    y = real_name_of(parse_expr("-(3/8 - 1) * 2"))
    assert to_dyadic(y, 12).to_fraction() == Fraction(5, 4)
    z = to_dyadic(real_name_of(parse_expr("sin(1) * exp01(1/2) - 1")), 30)
    ref = mpmath.sin(1) * mpmath.exp(0.5) - 1
    assert abs(mpmath.mpf(z.num) / mpmath.mpf(2) ** z.exp - ref) < mpmath.mpf(2) ** -30


@pytest.mark.parametrize("bad", ["", "1 +", "(1", "sin 1", "t t", "cos(1)", "1 ** 2", "exp01(2)",
                                 "exp01(t - 1)"])
def test_parse_errors(bad):
    with pytest.raises(ParseError):
        parse_expr(bad)


def test_constant_name_rejects_variables():
    with pytest.raises(ValueError):
        real_name_of(parse_expr("t + 1"))
    with pytest.raises(ValueError):
        cfun_of(parse_expr("t * y"))


def test_bounds_and_modulus():
    b = bounds(parse_expr("3*t*t - y"))
    assert (b.lo, b.hi) == (-1, 4)
    assert b.lip_t == 6 and b.lip_y == 1
    assert modulus_for(Fraction(0))(9) == 0
    assert modulus_for(Fraction(6))(4) == 7
    assert modulus_for(Fraction(1, 2))(4) == 4


@given(st.integers(0, 1 << 10), st.integers(-(1 << 10), 1 << 10), st.integers(0, 30))
def test_evaluate_precision(ti, yi, k):
    node = parse_expr("sin(3*t - y) * t + exp01(t*t) * (y + 1/4)")
    t, y = Dyadic(ti, 10), Dyadic(yi, 10)
    v = evaluate(node, {"t": t, "y": y}, k)
    tm, ym = mpmath.mpf(ti) / 2 ** 10, mpmath.mpf(yi) / 2 ** 10
    ref = mpmath.sin(3 * tm - ym) * tm + mpmath.exp(tm * tm) * (ym + 0.25)
    assert abs(mpmath.mpf(v.num) / mpmath.mpf(2) ** v.exp - ref) < mpmath.mpf(2) ** -k


def test_cfun_of_is_wellformed():
    from sonda.cfun import check_cfun_wellformed
    f = cfun_of(parse_expr("sin(4*t) - t*t"))
    samples = [Dyadic(i, 6) for i in range(65)]
    with mpmath.workdps(50):
        r = check_cfun_wellformed(
            f, lambda t: mpmath.sin(4 * mpmath.mpf(t.num) / 2 ** t.exp) - (mpmath.mpf(t.num) / 2 ** t.exp) ** 2,
            samples, range(0, 12, 2))
    assert r.ok, r.violations[:3]


def test_lip_of_checks_constant():
    node = parse_expr("(y + 1) * 1/4")
    assert lip_of(node, 1).lipschitz == 1
    with pytest.raises(ValueError):
        lip_of(node, 0)
    with pytest.raises(ValueError):
        lip_of(parse_expr("4*y"), 3)
