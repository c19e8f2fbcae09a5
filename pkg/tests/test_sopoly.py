import pytest
from hypothesis import given, strategies as st

from sonda.errors import BoundExceeded, ParseError
from sonda.names import Name, const_name
from sonda.sopoly import (ApplyL, Const, CostMeter, Prod, Sum, Var, eval_sopoly, metered_run,
                          size_function, sopoly_parse, sopoly_print)

EQ5 = "L(L(n*n))+L(L(n)*L(n))+L(n)+4"


def test_eq5_ast():
    n = Var()
    want = Sum(Sum(Sum(ApplyL(ApplyL(Prod(n, n))), ApplyL(Prod(ApplyL(n), ApplyL(n)))),
                   ApplyL(n)), Const(4))
    assert sopoly_parse(EQ5) == want


@pytest.mark.parametrize("x", range(11))
def test_eq5_closed_form(x):
    assert eval_sopoly(sopoly_parse(EQ5), lambda v: v * v, x) == 2 * x ** 8 + x ** 2 + 4


def test_eq5_spot_values():
    P = sopoly_parse(EQ5)
    assert eval_sopoly(P, lambda v: v * v, 1) == 7
    assert {eval_sopoly(P, lambda v: 0, x) for x in range(20)} == {4}


def test_parse_leaves():
    assert sopoly_parse("3") == Const(3)
    with pytest.raises(ParseError):
        sopoly_parse("n+0")
    for bad in ("", "n+", "L(n", "m", "L n", "2**n"):
        with pytest.raises(ParseError):
            sopoly_parse(bad)


def polys():
    leaf = st.one_of(st.builds(Const, st.integers(1, 9)), st.just(Var()))
    return st.recursive(leaf, lambda inner: st.one_of(
        st.builds(Sum, inner, inner), st.builds(Prod, inner, inner), st.builds(ApplyL, inner)),
        max_leaves=8)


@given(polys())
def test_print_parse_round_trip(p):
    assert sopoly_parse(sopoly_print(p)) == p


@given(polys(), st.integers(0, 6))
def test_monotone(p, n):
    small = lambda v: v  # noqa: E731
    big = lambda v: v * v + 1  # noqa: E731
    assert eval_sopoly(p, small, n) <= eval_sopoly(p, big, n)
    assert eval_sopoly(p, small, n) <= eval_sopoly(p, small, n + 1)


@given(polys(), polys(), st.integers(0, 5))
def test_sum_homomorphism(p, q, n):
    L = lambda v: 2 * v + 1  # noqa: E731
    assert eval_sopoly(Sum(p, q), L, n) == eval_sopoly(p, L, n) + eval_sopoly(q, L, n)
    assert eval_sopoly(Prod(p, q), L, n) == eval_sopoly(p, L, n) * eval_sopoly(q, L, n)


def test_meter_cost_examples():
    out, cost, _ = metered_run(lambda oracle, u: "0", const_name("ab"), "")
    assert (out, cost) == ("0", 1)

    def one_query(oracle, u):
        oracle("abc")
        return ""

    _, cost, meter = metered_run(one_query, const_name("xy"), "")
    assert cost == 6
    assert meter.trace == [(3, 2)]


def test_meter_invariant_and_bound():
    def work(oracle, u):
        for k in range(len(u)):
            oracle("0" * k)
        oracle.charge(7)
        return "101"

    phi = Name(lambda u: u + u)
    out, cost, meter = metered_run(work, phi, "0000")
    assert cost == sum(a + b + 1 for a, b in meter.trace) + 3 + 7
    assert meter.unit_charges == 7 and meter.output_charges == 3
    with pytest.raises(BoundExceeded):
        metered_run(work, phi, "0000", bound=sopoly_parse("n+L(n)"))
    again = metered_run(work, phi, "0000")
    assert (again[1], again[2].trace) == (cost, meter.trace)


def test_size_functions(tmp_path):
    assert size_function("id")(7) == 7
    assert size_function("square")(3) == 9
    assert size_function("const:5")(100) == 5
    table = tmp_path / "sizes.txt"
    table.write_text("# n value\n0 1\n2 4\n5 9\n")
    L = size_function(f"table:{table}")
    assert [L(n) for n in range(7)] == [1, 1, 4, 4, 4, 9, 9]
    table.write_text("0 5\n1 2\n")
    with pytest.raises(ValueError):
        size_function(f"table:{table}")
    with pytest.raises(ValueError):
        size_function("cube")
