import pytest
from hypothesis import given, strategies as st

from sonda.errors import DominationFault, RegularityFault
from sonda.names import (Name, check_regularity, const_name, pad, pad_to, pair, pair_many,
                         project, strip_padding, unary_name, unpair_answer, widen)


def ident():
    return Name(lambda u: u, label="id")


def test_sizes():
    assert [const_name("abc").size(n) for n in range(5)] == [3] * 5
    assert ident().size(5) == 5
    assert const_name("").size(7) == 0
    assert const_name("000")("anything") == "000"


def test_pair_example():
    p = pair(const_name("ab"), const_name("c"))
    assert p("0") == "ab10"
    assert p("1") == "c100"
    assert unpair_answer(p("0")) == "ab"
    assert unpair_answer(p("1")) == "c"


@pytest.mark.parametrize("n", range(9))
def test_pair_size_law(n):
    a, b = ident(), unary_name(lambda k: 2 * k + 1)
    p = pair(a, b)
    assert p.size(n + 1) == a.size(n) + b.size(n) + 1
    assert len(p("1" * (n + 1))) == p.size(n + 1)


def test_project_and_nesting():
    a, b, c = const_name("a"), const_name("bb"), ident()
    p = pair(a, b)
    left, right = project("left", p), project("right", p)
    for u in ("", "0", "0101"):
        assert left(u) == a(u)
        assert right(u) == b(u)
    nested = pair_many(a, b, c)
    flat = pair(pair(a, b), c)
    for u in ("", "1", "00", "0110"):
        assert nested(u) == flat(u)


def test_pad_examples():
    p = pad(lambda u: "x", const_name("000"))
    assert p("") == p("0101") == "x##"
    regular = ident()
    same = pad(regular, regular)
    assert same("0110") == "0110"
    with pytest.raises(DominationFault):
        pad(lambda u: "long", const_name("ab"))("")


@given(st.text("+-01/", max_size=20), st.integers(0, 10))
def test_pad_strip(value, extra):
    padded = pad_to(value, len(value) + extra)
    assert len(padded) == len(value) + extra
    assert strip_padding(padded) == value


def test_widen():
    phi = const_name("+1/10")
    w = widen(phi, 3, 2)
    assert w.size(4) == 17
    assert strip_padding(w("0000")) == "+1/10"
    with pytest.raises(ValueError):
        widen(phi, 0)


def test_regularity_checker():
    assert check_regularity(const_name("ab"), ["", "0", "000"]) is None
    bad = lambda u: "0" * max(0, 4 - len(u))  # noqa: E731
    assert check_regularity(bad, ["", "0000"]) == ("", "0000")
    p = pair(ident(), unary_name(lambda n: n * n))
    samples = ["0" * k for k in range(8)] + ["1" * k for k in range(8)]
    assert check_regularity(p, samples) is None


def test_sampled_regularity_fault():
    flaky = Name(lambda u: "0" * (5 - len(u)) if len(u) < 5 else "")
    flaky("")
    with pytest.raises(RegularityFault):
        flaky("00")
    inconsistent = Name(lambda u: u.replace("0", ""))
    inconsistent("11")
    with pytest.raises(RegularityFault):
        inconsistent("00")


def test_declared_size_is_enforced():
    liar = Name(lambda u: u, size=lambda n: n + 1)
    with pytest.raises(RegularityFault):
        liar("01")
