import random
from itertools import product

import pytest
from hypothesis import given, strategies as st

from sonda.encoding import tuple_strings, untuple_strings
from sonda.errors import CapExceeded, MalformedName, NotLengthPreserving, ParseError
from sonda.names import Name, widen
from sonda.complexity import (And, Not, Or, PredApp, Var, builtin_map, builtin_pred, eval_formula,
                              exist2, format_formula, free_vars, parse_formula, parse_qbf, power2,
                              pred_name, qbf2, reduce_m2, reduce_mF2, reduce_W2, sat2, table_map,
                              table_pred, translate)
from sonda.sopoly import CostMeter


def test_exist_examples():
    eq = builtin_pred("eq")
    assert exist2(eq, "0110", 4) == 1
    assert exist2(eq, "0110", 3) == 0
    assert exist2(builtin_pred("zero"), "1", 5) == 0
    assert exist2(builtin_pred("odd2"), "", 3) == 1
    witnesses = [v for v in ("".join(b) for b in product("01", repeat=3))
                 if builtin_pred("odd2")(tuple_strings(("", v))) == "1"]
    assert len(witnesses) == 4


def test_exist_parallel_matches_serial():
    odd = builtin_pred("odd2")
    for n in range(7):
        assert exist2(odd, "1", n, jobs=2) == exist2(odd, "1", n)


def test_sat_examples():
    assert all(sat2(builtin_pred(p), "a1 & !a1") == 0 for p in ("zero", "one", "and"))
    assert sat2(builtin_pred("id"), "p(a1)") == 1
    assert sat2(builtin_pred("and"), "p(a1, a2) & !a1") == 0
    assert sat2(builtin_pred("and"), "p(a1, a2) ∧ a1") == 1


def test_qbf_examples():
    xor = builtin_pred("xor")
    assert qbf2(xor, "∀a1.∃a2. p(a1,a2)") == 1
    assert qbf2(xor, "A a1 A a2 p(a1,a2)") == 0
    assert qbf2(builtin_pred("one"), "E a1 A a2 a1 & a2") == 0
    # free variables are closed existentially, so a prefix-free formula is plain sat
    for text in ("p(a1, a2) & !a1", "a1 | a2", "a1 & !a1"):
        assert qbf2(builtin_pred("and"), text) == sat2(builtin_pred("and"), text)
    assert qbf2(xor, "A a1 p(a1, a2)") == 0
    assert qbf2(builtin_pred("one"), "A a1 p(a1, a2) & a2") == 1


def test_parser():
    f = parse_formula("!(a1 | a2) & p(a1, 1)")
    assert free_vars(f) == {1, 2}
    assert parse_formula(format_formula(f)) == f
    q = parse_qbf("E a1 . A a2 p(a2) | a1")
    assert q.prefix == (("E", 1), ("A", 2))
    for bad in ("a0", "a", "p(a1", "a1 &", "a1 a2", "E a1", "x1"):
        with pytest.raises(ParseError):
            parse_qbf(bad)


def truth_table_mask(n_vars: int, expr) -> int:
    """Oracle: bitmask of satisfying assignments, assignment i sets a_k = bit k-1 of i."""
    mask = 0
    for i in range(1 << n_vars):
        if expr([(i >> k) & 1 == 1 for k in range(n_vars)]):
            mask |= 1 << i
    return mask


@given(st.integers(0, 1 << 30))
def test_sat_against_truth_table(seed):
    rng = random.Random(seed)
    # random CNF over 3 variables with one predicate clause
    table = {format(i, "02b"): rng.random() < 0.5 for i in range(4)}
    p = pred_name(lambda u: table.get(u, False))
    lits = [(rng.randrange(3), rng.random() < 0.5) for _ in range(4)]
    text = " & ".join(f"({'!' if n1 else ''}a{v1 + 1} | {'!' if n2 else ''}a{v2 + 1})"
                      for (v1, n1), (v2, n2) in zip(lits[::2], lits[1::2]))
    text += " & p(a1, a3)"

    def expr(a):
        ok = all((a[v1] != n1) or (a[v2] != n2) for (v1, n1), (v2, n2) in zip(lits[::2], lits[1::2]))
        return ok and table[("1" if a[0] else "0") + ("1" if a[2] else "0")]

    used = {v for v, _ in lits} | {0, 2}
    mask = truth_table_mask(3, expr)
    assert sat2(p, text) == int(mask != 0)
    if used == {0, 1, 2}:
        assert qbf2(p, "A a2 E a1 E a3 " + text) == int(all(
            any(mask >> i & 1 for i in range(8) if (i >> 1) & 1 == b) for b in (0, 1)))


def test_eval_formula_ast():
    f = Or(And(Var(1), Not(Var(2))), PredApp((Var(2),)))
    p = builtin_pred("id")
    assert eval_formula(f, {1: False, 2: True}, p)
    assert not eval_formula(f, {1: False, 2: False}, p)


def test_bad_predicate_answer():
    liar = Name(lambda u: "11")
    with pytest.raises(MalformedName):
        sat2(liar, "p(a1)")


def test_caps():
    with pytest.raises(CapExceeded):
        exist2(builtin_pred("zero"), "", 21)
    with pytest.raises(CapExceeded):
        sat2(builtin_pred("one"), "a1", cap=0)
    with pytest.raises(CapExceeded):
        power2(builtin_map("id"), "0" * 25)


def test_power_examples():
    ident = builtin_map("id")
    assert power2(ident, "000") == 1
    assert power2(ident, "01") == 0
    inc = builtin_map("inc")
    for k in range(1, 9):
        for i in range(1 << k):
            u = format(i, "b").zfill(k)
            assert power2(inc, u) == int(i == 0)
    assert power2(builtin_map("zero"), "1011") == 1
    with pytest.raises(NotLengthPreserving):
        power2(lambda u: u + "0", "01")


def test_tables(tmp_path):
    p = table_pred("# pairs\n- 1\n01 1\n01 0\n11 1\n")
    assert [p(u) for u in ("", "01", "11", "10")] == ["1", "0", "1", "0"]
    for bad in ("01\n", "01 2\n", "0a 1\n"):
        with pytest.raises(ValueError):
            table_pred(bad)
    m = table_map("00 01\n01 10\n10 11\n11 00\n")
    assert power2(m, "00") == 1
    assert power2(m, "10") == 0
    with pytest.raises(ValueError):
        builtin_pred("nand")
    with pytest.raises(ValueError):
        builtin_map("dec")


# -- reductions ----------------------------------------------------------------------


def exist_operator(phi: Name):
    """A: instance tuple(u, 0^n) -> '1' iff some v of length n has phi(tuple(u, v)) = 1."""
    def solve(x: str) -> str:
        u, zeros = untuple_strings(x)
        return str(exist2(phi, u, len(zeros)))
    return solve


def qbf_operator(psi: Name):
    """B: instance is a formula text."""
    return lambda x: str(qbf2(psi, x))


def to_qbf_pred(phi: Name) -> Name:
    # p(1^k, 0, u, v) with constants for u asks phi(tuple(u, v))
    def ask(w: str) -> bool:
        k = w.index("0") if "0" in w else len(w)
        rest = w[k + 1:]
        return phi(tuple_strings((rest[:k], rest[k:]))) == "1"
    return pred_name(ask)


def to_qbf_instance(phi: Name):
    def t(x: str) -> str:
        u, zeros = untuple_strings(x)
        n = len(zeros)
        consts = ["1"] * len(u) + ["0"] + list(u)
        args = ", ".join(consts + [f"a{i + 1}" for i in range(n)])
        prefix = " ".join(f"E a{i + 1}" for i in range(n))
        return f"{prefix} p({args})" if args else "p()"
    return t


def test_exist_reduces_to_qbf():
    wire = reduce_m2(to_qbf_pred, to_qbf_instance)
    solve = wire(qbf_operator)
    rng = random.Random(2)
    for _ in range(60):
        table = {}
        phi = pred_name(lambda w, table=table: table.setdefault(w, rng.random() < 0.3))
        u = "".join(rng.choice("01") for _ in range(rng.randint(1, 3)))
        x = tuple_strings((u, "0" * rng.randint(1, 4)))
        assert solve(phi)(x) == exist_operator(phi)(x)


def test_identity_reduction_and_meter():
    meter = CostMeter(oracle_size=lambda n: 1, input_length=0)
    wire = reduce_m2(lambda phi: phi, lambda phi: (lambda x: x), meter=meter)
    solve = wire(exist_operator)
    phi = builtin_pred("odd2")
    for u, n in (("1", 2), ("", 0), ("0", 3)):
        x = tuple_strings((u, "0" * n))
        assert solve(phi)(x) == exist_operator(phi)(x)
    assert meter.accumulated_cost > 0 and meter.trace


def test_mF_with_output_ignoring_theta():
    # r ignores the B answer, so A no longer depends on B
    wire = reduce_mF2(lambda phi: (lambda x, theta: "constant"), lambda phi: phi,
                      lambda phi: (lambda x: x))
    for solve_b in (lambda psi: (lambda x: "ignored"), lambda psi: psi):
        solve = wire(solve_b)
        assert solve(builtin_pred("one"))("0101") == "constant"
        assert solve(builtin_pred("zero"))("0101") == "constant"


def test_weihrauch_wiring():
    # A(phi)(x) = answer of B on s(phi), post-processed by r reading both phi and psi
    def r(paired: Name):
        return lambda x: paired("1" + x)[:1] + paired("0" + x)[:1]
    wire = reduce_W2(r, lambda phi: phi)
    solve = wire(lambda psi: Name(lambda x: "1" if x.count("1") % 2 else "0"))
    phi = builtin_pred("one")
    assert solve(phi)("1") == "11"
    assert solve(phi)("11") == "01"


def test_translate():
    phi = Name(lambda u: "+1/10", size=lambda n: 5)
    assert translate(lambda x: x, phi) is phi
    wider = translate(lambda x: widen(x, 2, 1), phi)
    assert wider.size(3) == 11
    both = translate(lambda x: widen(widen(x, 2), 3), phi)
    assert both("") == translate(lambda x: widen(x, 6), phi)("")
