from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from sonda.cfun import (LIP_BOX, apply, check_cfun_wellformed, magnitude_bound, make_cfun,
                        make_lip_name)
from sonda.encoding import Dyadic
from sonda.real import decode_answer, real_from_dyadic, real_sin, to_dyadic

grid = [Dyadic(i, 5) for i in range(33)]


def ident():
    return make_cfun(lambda n: n, lambda p, k: p[0], magnitude=1)


def square():
    return make_cfun(lambda n: n + 1, lambda p, k: p[0] * p[0], magnitude=1)


def test_zero_function():
    f = make_cfun(lambda n: 0, lambda p, k: 0, magnitude=0)
    for n in range(8):
        assert f.modulus(n) == 0
        assert all(f.approx(n, t).to_fraction() == 0 for t in grid[::4])


def test_identity_and_square_wellformed():
    r = check_cfun_wellformed(ident(), lambda t: t.to_fraction(), grid, range(10))
    assert r.ok and r.checked == 330
    r = check_cfun_wellformed(square(), lambda t: t.to_fraction() ** 2, grid, range(10))
    assert r.ok


def test_corrupted_answer_is_reported():
    def wrong(p, k):
        return p[0] + (1 if p[0] == Dyadic(1, 1) else 0)

    bad = make_cfun(lambda n: n, wrong, magnitude=2)
    r = check_cfun_wellformed(bad, lambda t: t.to_fraction(), grid, [4])
    assert not r.ok
    assert any(v[0] == "approximation" for v in r.violations)


def test_two_names_agree():
    other = make_cfun(lambda n: n + 3, lambda p, k: p[0] + Dyadic(1, k + 1), magnitude=2)
    r = check_cfun_wellformed(ident(), lambda t: t.to_fraction(), grid, range(8), other=other)
    assert r.ok


def test_inputs_are_clamped():
    f = ident()
    assert f.approx(6, Dyadic(3)).to_fraction() == 1
    assert f.approx(6, Dyadic(-3)).to_fraction() == 0


def test_direct_matches_strings():
    f = make_cfun(lambda n: n + 2, lambda p, k: p[0] * p[0] * 3 - p[0], magnitude=2)
    for n in range(12):
        for t in grid[::3] + [Dyadic(-1), Dyadic(5, 1)]:
            assert f.direct(n, t) == decode_answer(f.raw_query(n, t.encode()))


def test_malformed_function_query_answers_zero():
    f = ident()
    from sonda.names import unpair_answer
    for junk in ("0110", "", "00110011", "0000010101"):
        assert decode_answer(unpair_answer(f.name("1" + junk))).to_fraction() == 0


def test_apply_examples():
    x = real_from_dyadic(Dyadic(3, 3))
    ax = apply(ident(), x)
    assert all(abs(to_dyadic(ax, n).to_fraction() - Fraction(3, 8)) < Fraction(1, 1 << n)
               for n in range(20))
    sq = apply(square(), real_from_dyadic(Dyadic(1, 1)))
    assert abs(to_dyadic(sq, 20).to_fraction() - Fraction(1, 4)) < Fraction(1, 1 << 20)
    c = make_cfun(lambda n: 0, lambda p, k: Fraction(5, 8), magnitude=1)
    ac = apply(c, real_sin(real_from_dyadic(1)))
    assert all(abs(to_dyadic(ac, n).to_fraction() - Fraction(5, 8)) < Fraction(1, 1 << n)
               for n in range(15))
    assert all(to_dyadic(ac, n).to_fraction() == Fraction(5, 8) for n in range(1, 15))


@given(st.integers(0, 1 << 12))
def test_apply_irrational_argument(k):
    # x = sin(k / 2^12) lies in [0, 1]
    x = real_sin(real_from_dyadic(Dyadic(k, 12)))
    y = to_dyadic(apply(square(), x), 20)
    ref = mpmath.sin(mpmath.mpf(k) / 2 ** 12) ** 2
    assert abs(mpmath.mpf(y.num) / mpmath.mpf(2) ** y.exp - ref) < mpmath.mpf(2) ** -20


def test_apply_needs_one_variable():
    g = make_cfun(lambda n: n, lambda p, k: p[0], magnitude=1, box=LIP_BOX)
    with pytest.raises(ValueError):
        apply(g, real_from_dyadic(0))


def test_lip_names():
    zero = make_lip_name(make_cfun(lambda n: 0, lambda p, k: 0, magnitude=0, box=LIP_BOX), 0)
    assert zero.lipschitz == 0
    yy = make_lip_name(make_cfun(lambda n: n, lambda p, k: p[1], magnitude=1, box=LIP_BOX), 1)
    assert yy.lipschitz == 1
    assert yy.approx(5, Dyadic(1, 1), Dyadic(-3, 2)).to_fraction() == Fraction(-3, 4)
    assert yy.modulus(7) == 7
    assert yy.cfun.direct(5, Dyadic(0), Dyadic(1, 2)) == yy.approx(5, Dyadic(0), Dyadic(1, 2))
    two_t = make_lip_name(make_cfun(lambda n: n + 1, lambda p, k: 2 * p[0], magnitude=2,
                                    box=LIP_BOX), 0)
    for t in grid[::4]:
        for y in (Dyadic(-1), Dyadic(0), Dyadic(1)):
            assert two_t.approx(6, t, y).to_fraction() == 2 * t.to_fraction()
    with pytest.raises(ValueError):
        make_lip_name(ident(), 1)


def test_magnitude_bound():
    for f, top in ((ident(), 1), (square(), 1)):
        M = magnitude_bound(f)
        assert top < 2 ** M
