"""The acceptance suite: eleven numbered checks, each with a time limit.

Every check compares the package against an oracle that does not share its
code path: closed forms, exact rational arithmetic, mpmath at 120 digits,
truth-table bitmasks, or modular arithmetic. Run it with ``sonda selftest``
or ``python -m sonda.selftest``.
"""

from __future__ import annotations

import hashlib
import itertools
import random
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

import mpmath

from . import complexity as cx
from .cfun import APPLY, LIP_BOX, apply, make_cfun, make_lip_name
from .encoding import Dyadic, decode_dyadic, encode_dyadic, parse_dyadic, tuple_strings
from .errors import BoundExceeded
from .ivp import check_euler_certificate, lip_ivp
from .names import Name, check_regularity, const_name, pad, pad_to, pair, strip_padding, widen
from .real import (ADD, MUL, NEG, RealName, real_add, real_exp01, real_from_dyadic, real_mul,
                   real_neg, real_sin, to_dyadic)
from .sets import ExactSet, convex_hull, exact_hull_distance, set_from_exact, set_query
from .sopoly import eval_sopoly, sopoly_parse

__all__ = ["Result", "CRITERIA", "run_all", "main"]

SEED = 20240601
REF_DPS = 120


@dataclass
class Result:
    number: int
    title: str
    passed: bool
    seconds: float
    limit: float
    detail: str = ""
    failures: list = field(default_factory=list)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"{status} {self.number:2d} {self.title} "
                f"[{self.seconds:.1f}s / {self.limit:g}s] {self.detail}").rstrip()


def _frac(d: Dyadic) -> Fraction:
    return Fraction(d.num, 1 << d.exp)


def _mp(d: Dyadic):
    return mpmath.mpf(d.num) / mpmath.mpf(2) ** d.exp


def _rand_dyadic(rng: random.Random, lo: int, hi: int, frac_bits: int) -> Dyadic:
    """Uniform on the grid of pitch ``2^-frac_bits`` inside ``[lo, hi]``."""
    span = (hi - lo) << frac_bits
    return Dyadic((lo << frac_bits) + rng.randrange(span + 1), frac_bits)


# -- 1 ---------------------------------------------------------------------------


def criterion_sopoly(rng: random.Random) -> tuple[bool, str, list]:
    p = sopoly_parse("L(L(n*n))+L(L(n)*L(n))+L(n)+4")
    bad = [x for x in range(11) if eval_sopoly(p, lambda v: v * v, x) != 2 * x ** 8 + x ** 2 + 4]
    return not bad, "x = 0..10 against 2x^8 + x^2 + 4", bad


# -- 2 ---------------------------------------------------------------------------


def criterion_codec(rng: random.Random) -> tuple[bool, str, list]:
    bad = []
    for _ in range(10_000):
        sign = rng.choice("+-")
        bits = "".join(rng.choice("01") for _ in range(rng.randint(1, 40)))
        k = rng.randint(0, 40)
        text = encode_dyadic(sign, bits, k)
        expected = Fraction(int(bits, 2), 2 ** k) * (-1 if sign == "-" else 1)
        d = parse_dyadic(text)
        if decode_dyadic(text) != expected or parse_dyadic(d.encode()) != d:
            bad.append(text)
        # the bit-level form comes back verbatim (a negative zero re-encodes as +)
        elif (d.num or sign == "+") and d.encode(width=len(bits)) != text:
            bad.append(text)
    for text in ("+1/10", "+10000/100000"):
        if decode_dyadic(text) != Fraction(1, 2):
            bad.append(text)
    return not bad, "10^4 round trips; +1/10 and +10000/100000 are 1/2", bad[:5]


# -- 3 ---------------------------------------------------------------------------


def criterion_arith(rng: random.Random) -> tuple[bool, str, list]:
    bad = []
    for _ in range(1000):
        s = _rand_dyadic(rng, -(1 << 10), 1 << 10, rng.randint(0, 24))
        t = _rand_dyadic(rng, -(1 << 10), 1 << 10, rng.randint(0, 24))
        x, y = real_from_dyadic(s), real_from_dyadic(t)
        total, product = real_add(x, y), real_mul(x, y)
        exact_sum, exact_product = _frac(s) + _frac(t), _frac(s) * _frac(t)
        for m in range(31):
            tol = Fraction(1, 1 << m)
            if not abs(_frac(to_dyadic(total, m)) - exact_sum) < tol:
                bad.append(("add", s.encode(), t.encode(), m))
            if not abs(_frac(to_dyadic(product, m)) - exact_product) < tol:
                bad.append(("mul", s.encode(), t.encode(), m))
    return not bad, "1000 pairs in [-2^10, 2^10], m = 0..30, exact", bad[:5]


# -- 4 ---------------------------------------------------------------------------


def criterion_elementary(rng: random.Random) -> tuple[bool, str, list]:
    bad = []
    worst = 0.0
    with mpmath.workdps(REF_DPS):
        tol = mpmath.mpf(2) ** -30
        for i in range(50):
            a = Dyadic(0) if i == 0 else Dyadic(1) if i == 1 else _rand_dyadic(rng, 0, 1, 40)
            err = abs(_mp(to_dyadic(real_exp01(real_from_dyadic(a)), 30)) - mpmath.exp(_mp(a)))
            worst = max(worst, float(err / tol))
            if not err < tol:
                bad.append(("exp01", a.encode(), float(err)))
        for i in range(50):
            a = _rand_dyadic(rng, -(1 << 12), 1 << 12, 30)
            err = abs(_mp(to_dyadic(real_sin(real_from_dyadic(a)), 30)) - mpmath.sin(_mp(a)))
            worst = max(worst, float(err / tol))
            if not err < tol:
                bad.append(("sin", a.encode(), float(err)))
    return not bad, f"max error {worst:.3f} * 2^-30", bad[:5]


# -- 5 ---------------------------------------------------------------------------


def _affine(x):
    one = Fraction(1) if isinstance(x, Fraction) else mpmath.mpf(1)
    return 3 * x / 4 + one / 8


def _test_functions():
    ident = make_cfun(lambda n: n, lambda p, k: p[0], magnitude=1, label="id")
    square = make_cfun(lambda n: n + 1, lambda p, k: p[0] * p[0], magnitude=1, label="sq")
    affine = make_cfun(lambda n: n, lambda p, k: p[0] * Dyadic(3, 2) + Dyadic(1, 3),
                       magnitude=1, label="affine")
    return [("id", ident, lambda x: x), ("t^2", square, lambda x: x * x),
            ("3t/4+1/8", affine, _affine)]


def criterion_apply(rng: random.Random) -> tuple[bool, str, list]:
    bad = []
    samples: list[tuple[RealName, object]] = []
    for i in range(70):
        d = Dyadic(i % 2, 0) if i < 2 else _rand_dyadic(rng, 0, 1, rng.randint(1, 30))
        samples.append((real_from_dyadic(d), _frac(d)))
    for _ in range(30):
        # sin(a)^2 lies in [0, 1] and is irrational for dyadic a != 0
        a = _rand_dyadic(rng, -4, 4, 20)
        s = real_sin(real_from_dyadic(a))
        with mpmath.workdps(REF_DPS):
            samples.append((real_mul(s, s), mpmath.sin(_mp(a)) ** 2))
    with mpmath.workdps(REF_DPS):
        for label, f, exact in _test_functions():
            for x, ref in samples:
                v = to_dyadic(apply(f, x), 20)
                want = exact(ref)
                if isinstance(want, Fraction):
                    err, tol = abs(_frac(v) - want), Fraction(1, 1 << 20)
                else:
                    err, tol = abs(_mp(v) - want), mpmath.mpf(2) ** -20
                if not err < tol:
                    bad.append((label, float(err)))
    return not bad, "3 functions x 100 reals (70 dyadic, 30 irrational) at 2^-20", bad[:5]


# -- 6, 7 -------------------------------------------------------------------------


def reference_odes():
    """The three reference equations as (label, LipName, exact solution h(t))."""
    zero = make_lip_name(make_cfun(lambda n: 0, lambda p, k: 0, magnitude=1, box=LIP_BOX), 0)
    two_t = make_lip_name(
        make_cfun(lambda n: n + 1, lambda p, k: p[0].shift(1), magnitude=2, box=LIP_BOX), 0)
    growth = make_lip_name(
        make_cfun(lambda n: max(0, n - 2), lambda p, k: (p[1] + 1).shift(-2), magnitude=1, box=LIP_BOX), 1)
    return [
        ("g=0", zero, lambda t: Fraction(0)),
        ("g=2t", two_t, lambda t: t * t),
        ("g=(y+1)/4", growth,
         lambda t: mpmath.exp(mpmath.mpf(t.numerator) / t.denominator / 4) - 1),
    ]


def ivp_grid() -> list[Dyadic]:
    """100 points from 0 to 1: ``i/99`` rounded to 16 fraction bits."""
    return [Dyadic(round(Fraction(i << 16, 99)), 16) for i in range(100)]


def criterion_ivp(rng: random.Random) -> tuple[bool, str, list]:
    bad = []
    grid = ivp_grid()
    total_steps = 0
    with mpmath.workdps(60):
        for label, g, h in reference_odes():
            sol = lip_ivp(g)
            refs = [h(_frac(u)) for u in grid]
            for n in range(11):
                values, sch, run = sol.answer_many(n, grid)
                total_steps += run.steps
                expected_p = max(g.modulus(n + 8 * g.lipschitz), n + 8 * g.lipschitz + sch.M)
                if sch.p != expected_p or sch.q != n + 8 * g.lipschitz or run.steps > 1 << sch.p:
                    bad.append((label, n, "schedule", sch))
                for u, v, ref in zip(grid, values, refs):
                    if isinstance(ref, Fraction):
                        err, tol = abs(_frac(v) - ref), Fraction(1, 1 << n)
                    else:
                        err, tol = abs(_mp(v) - ref), mpmath.mpf(2) ** -n
                    if not err < tol:
                        bad.append((label, n, u.encode(), float(err)))
                if n <= 3:
                    # the batched pass must agree with plain string queries
                    strings, _, _ = sol.answer_many(n, grid, via_strings=True)
                    if [(x.num, x.exp) for x in strings] != [(x.num, x.exp) for x in values]:
                        bad.append((label, n, "string path disagrees"))
                    for u in grid[::33]:
                        w = sol.approx(n, u)
                        if w != values[grid.index(u)]:
                            bad.append((label, n, "name query disagrees", u.encode()))
    return not bad, f"3 equations, n = 0..10, 100 points, {total_steps} Euler steps", bad[:5]


def criterion_certificate(rng: random.Random) -> tuple[bool, str, list]:
    bad = []
    worst = 0.0
    grid = ivp_grid()
    for label, g, h in reference_odes():
        report = check_euler_certificate(g, h, 8, grid)
        worst = max(worst, report.max_ratio)
        if not report.ok or report.checked != len(grid):
            bad.append((label, report.violations[:3]))
    return not bad, f"n = 8, worst error / bound = {worst:.3f}", bad


# -- 8 ---------------------------------------------------------------------------


def random_exact_set(rng: random.Random, max_points: int = 10, bits: int = 8) -> ExactSet:
    side = 1 << bits
    count = rng.randint(1, max_points)
    return ExactSet(tuple((Dyadic(rng.randrange(side + 1), bits), Dyadic(rng.randrange(side + 1), bits))
                          for _ in range(count)))


def criterion_hull(rng: random.Random, sets: int = 20, max_n: int = 6) -> tuple[bool, str, list]:
    bad = []
    checked = 0
    for _ in range(sets):
        E = random_exact_set(rng)
        H = convex_hull(set_from_exact(E), max_prec=max_n)
        for n in range(max_n + 1):
            # query grid of pitch 2^-(n+1) over the unit square
            k = n + 1
            for i in range((1 << k) + 1):
                for j in range((1 << k) + 1):
                    u, v = Dyadic(i, k), Dyadic(j, k)
                    cls = exact_hull_distance(E, u, v, n)
                    if cls == "band":
                        continue
                    checked += 1
                    bit = set_query(H, u, v, n)
                    if (cls == "near") != (bit == 1):
                        bad.append((E.dumps(), n, u.encode(), v.encode(), cls, bit))
    return not bad, f"{sets} sets, n = 0..{max_n}, {checked} decided queries", bad[:3]


# -- 9 ---------------------------------------------------------------------------


def _hashed_pred(seed: int):
    def test(u: str) -> bool:
        return hashlib.blake2b(f"{seed}:{u}".encode(), digest_size=1).digest()[0] & 1 == 1
    return test


def _random_formula(rng: random.Random, nvars: int, depth: int):
    if depth == 0 or rng.random() < 0.25:
        return cx.Var(rng.randint(1, nvars))
    kind = rng.choice(["and", "or", "not", "pred", "pred"])
    if kind == "not":
        return cx.Not(_random_formula(rng, nvars, depth - 1))
    if kind == "pred":
        return cx.PredApp(tuple(_random_formula(rng, nvars, depth - 1) for _ in range(rng.randint(1, 3))))
    make = cx.And if kind == "and" else cx.Or
    return make(_random_formula(rng, nvars, depth - 1), _random_formula(rng, nvars, depth - 1))


def _mask_table(f, nvars: int, test) -> list[bool]:
    """Truth table over all ``2^nvars`` assignments; bit ``i-1`` of the row index is ``a_i``."""
    rows = 1 << nvars
    if isinstance(f, cx.Var):
        return [bool(r >> (f.index - 1) & 1) for r in range(rows)]
    if isinstance(f, cx.Lit):
        return [f.value] * rows
    if isinstance(f, cx.Not):
        return [not b for b in _mask_table(f.arg, nvars, test)]
    if isinstance(f, (cx.And, cx.Or)):
        left, right = _mask_table(f.left, nvars, test), _mask_table(f.right, nvars, test)
        op = (lambda a, b: a and b) if isinstance(f, cx.And) else (lambda a, b: a or b)
        return [op(a, b) for a, b in zip(left, right)]
    cols = [_mask_table(a, nvars, test) for a in f.args]
    return [test("".join("1" if c[r] else "0" for c in cols)) for r in range(rows)]


def _fold_quantifiers(table: list[bool], prefix, nvars: int) -> bool:
    """Eliminate quantifiers innermost first; each pass halves the table."""
    live = list(range(1, nvars + 1))
    for quant, index in reversed(prefix):
        pos = live.index(index)
        out = []
        for r in range(len(table) >> 1):
            low = r & ((1 << pos) - 1)
            high = r >> pos
            r0 = (high << (pos + 1)) | low
            r1 = r0 | (1 << pos)
            pick = (table[r0] or table[r1]) if quant == "E" else (table[r0] and table[r1])
            out.append(pick)
        table = out
        live.pop(pos)
    return table[0]


def criterion_complete(rng: random.Random) -> tuple[bool, str, list]:
    bad = []
    tests = [_hashed_pred(rng.randrange(1 << 30)) for _ in range(8)]
    preds = [cx.pred_name(t, f"p{i}") for i, t in enumerate(tests)]
    counts = {"exist": 0, "sat": 0, "qbf": 0}
    for i in range(500):
        k = i % 8
        p, test = preds[k], tests[k]
        kind = ("exist", "sat", "qbf")[i % 3]
        counts[kind] += 1
        if kind == "exist":
            u = "".join(rng.choice("01") for _ in range(rng.randint(0, 4)))
            n = rng.randint(0, 4)
            def dbl(s: str) -> str:
                return "".join(c + c for c in s) + "01"
            witnesses = (format(x, "b").zfill(n) if n else "" for x in range(1 << n))
            want = any(test(dbl(u) + dbl(v)) for v in witnesses)
            got = cx.exist2(p, u, n)
        else:
            nvars = rng.randint(1, 4)
            matrix = _random_formula(rng, nvars, 4)
            table = _mask_table(matrix, nvars, test)
            if kind == "sat":
                want = any(table)
                got = cx.sat2(p, cx.format_formula(matrix))
                # unused variables do not matter to satisfiability
            else:
                order = list(range(1, nvars + 1))
                rng.shuffle(order)
                quantified = order[:rng.randint(0, min(3, nvars))]
                q = cx.QBFormula(tuple((rng.choice("AE"), v) for v in quantified), matrix)
                closed = q.closed()
                want = _fold_quantifiers(table, closed.prefix, nvars)
                got = cx.qbf2(p, cx.format_formula(q))
        if bool(got) != bool(want):
            bad.append((kind, i))
    # POWER2: f^(2^k)(u) = u for x -> x+1 and x -> 3x+1 (mod 2^k)
    power_checked = 0
    for k in range(17):
        inputs = [format(x, f"0{k}b") if k else "" for x in range(1 << k)] if k <= 8 else \
            ["0" * k, "1" * k] + [format(rng.randrange(1 << k), f"0{k}b")]
        for a, b in ((1, 1), (3, 1)):
            mod = 1 << k
            fmap = Name(lambda s, a=a, b=b, k=k: format((a * int(s, 2) + b) % (1 << k), f"0{k}b") if k else s,
                        size=lambda n: n, regularity="trusted")
            # the 2^k-fold composition of x -> a x + b, by repeated squaring
            A, B = a % mod if mod > 1 else 0, b % mod if mod > 1 else 0
            for _ in range(k):
                A, B = (A * A) % mod, (A * B + B) % mod
            for u in inputs:
                x = int(u, 2) if u else 0
                want = ((A * x + B) % mod if mod > 1 else 0) == 0
                power_checked += 1
                if bool(cx.power2(fmap, u)) != want:
                    bad.append(("power", a, b, u))
    detail = (f"exist {counts['exist']}, sat {counts['sat']}, qbf {counts['qbf']}, "
              f"power2 {power_checked} inputs")
    return not bad, detail, bad[:5]


# -- 10 --------------------------------------------------------------------------


def _structural_names(rng: random.Random) -> list[tuple[str, Name]]:
    x = real_from_dyadic(Dyadic(-45, 4))
    y = real_from_dyadic(Dyadic(1000, 3))
    small = real_from_dyadic(Dyadic(5, 3))
    square = make_cfun(lambda n: n + 1, lambda p, k: p[0] * p[0], magnitude=1)
    lip = make_lip_name(make_cfun(lambda n: n, lambda p, k: p[1] + p[0], magnitude=2, box=LIP_BOX), 1)
    E = random_exact_set(rng, 5, 6)
    return [
        ("real_from_dyadic", x.name), ("add", real_add(x, y).name), ("neg", real_neg(x).name),
        ("mul", real_mul(x, y).name), ("exp01", real_exp01(small).name),
        ("sin", real_sin(y).name), ("apply", apply(square, small).name),
        ("cfun", square.name), ("lipname", lip.name), ("set", set_from_exact(E).name),
        ("const", const_name("0101")), ("widen", widen(y.name, 3, 2)),
    ]


def _sample_strings(rng: random.Random, max_len: int) -> list[str]:
    out = []
    for n in range(max_len + 1):
        out.append("0" * n)
        out.append("1" * n)
        out.extend("".join(rng.choice("01") for _ in range(n)) for _ in range(2))
    return out


def criterion_structure(rng: random.Random) -> tuple[bool, str, list]:
    bad = []
    names = _structural_names(rng)
    samples = _sample_strings(rng, 32)
    for label, phi in names:
        witness = check_regularity(phi, samples)
        if witness is not None:
            bad.append(("regularity", label, witness))
    # pairing size law, measured by querying both halves
    for (la, a), (lb, b) in zip(names, names[1:] + names[:1]):
        p = pair(a, b)
        for n in range(33):
            want = len(a.fn("0" * n)) + len(b.fn("0" * n)) + 1
            if len(p("0" * (n + 1))) != want or len(p("1" * (n + 1))) != want:
                bad.append(("pair size", la, lb, n))
        witness = check_regularity(p, samples)
        if witness is not None:
            bad.append(("pair regularity", la, lb, witness))
    # pad / strip round trip
    for _ in range(200):
        value = "".join(rng.choice("+-01/") for _ in range(rng.randint(0, 20)))
        length = len(value) + rng.randint(0, 10)
        if strip_padding(pad_to(value, length)) != value or len(pad_to(value, length)) != length:
            bad.append(("pad", value, length))
    for label, phi in names[:7]:
        wide = pad(phi, Name(lambda u: "", size=lambda n, phi=phi: 2 * phi.size(n) + 1))
        if check_regularity(wide, samples) is not None:
            bad.append(("pad regularity", label))
        for n in range(0, 33, 4):
            if strip_padding(wide("0" * n)) != strip_padding(phi("0" * n)):
                bad.append(("pad value", label, n))
    return not bad, f"{len(names)} constructors, |u| <= 32", bad[:5]


# -- 11 --------------------------------------------------------------------------


def criterion_meter(rng: random.Random) -> tuple[bool, str, list]:
    bad = []
    corpus: list[RealName] = []
    for bits in (0, 4, 16, 40):
        d = Dyadic(rng.randrange(1 << (bits + 8)) - (1 << (bits + 7)), 8)
        corpus.append(real_from_dyadic(d))
    corpus.append(real_sin(real_from_dyadic(Dyadic(3, 0))))
    corpus.append(RealName(widen(corpus[0].name, 6, 10)))
    sizes = [r.name.size(0) for r in corpus]
    spread = max(sizes) / min(sizes)
    unit = [r for r in (real_from_dyadic(Dyadic(rng.randrange(257), 8)) for _ in range(3))]
    unit.append(RealName(widen(unit[0].name, 5, 8)))
    unit.append(real_mul(real_sin(real_from_dyadic(Dyadic(1))), real_sin(real_from_dyadic(Dyadic(1)))))
    square = make_cfun(lambda n: n + 1, lambda p, k: p[0] * p[0], magnitude=1)
    wide_square = make_cfun(lambda n: 3 * n + 5, lambda p, k: p[0] * p[0], magnitude=6)
    worst = 0.0
    runs = 0

    def check(op, phi, label):
        nonlocal worst, runs
        for n in range(0, 13):
            runs += 1
            try:
                _, cost, meter = op.run(phi, "0" * n)
            except BoundExceeded as exc:
                bad.append((op.label, label, n, str(exc)))
                return
            worst = max(worst, cost / meter.limit)

    for i, x in enumerate(corpus):
        check(NEG, x.name, f"x{i}")
        for j, y in enumerate(corpus):
            check(ADD, pair(x.name, y.name), f"x{i},x{j}")
            check(MUL, pair(x.name, y.name), f"x{i},x{j}")
    for f in (square, wide_square):
        for i, x in enumerate(unit):
            check(APPLY, pair(f.name, x.name), f"f,x{i}")
    return not bad, f"{runs} runs, size spread {spread:.1f}x, worst cost/bound {worst:.3f}", bad[:5]


CRITERIA: list[tuple[int, str, Callable, float]] = [
    (1, "second-order polynomial oracle", criterion_sopoly, 1),
    (2, "dyadic codec", criterion_codec, 1),
    (3, "real arithmetic validity", criterion_arith, 30),
    (4, "exp01/sin accuracy", criterion_elementary, 30),
    (5, "apply error budget", criterion_apply, 10),
    (6, "IVP endpoint contract", criterion_ivp, 60),
    (7, "Euler pointwise certificate", criterion_certificate, 30),
    (8, "hull gap soundness", criterion_hull, 300),
    (9, "complete-problem oracle equivalence", criterion_complete, 60),
    (10, "structural laws", criterion_structure, 10),
    (11, "meter bounds", criterion_meter, 60),
]


def run_one(number: int, seed: int = SEED) -> Result:
    for num, title, fn, limit in CRITERIA:
        if num == number:
            rng = random.Random(seed + num)
            start = time.perf_counter()
            try:
                ok, detail, failures = fn(rng)
            except Exception as exc:  # a crash is a failed criterion, not a crashed suite
                ok, detail, failures = False, f"raised {type(exc).__name__}: {exc}", [repr(exc)]
            elapsed = time.perf_counter() - start
            if elapsed >= limit:
                detail += f"; over the time limit"
            return Result(num, title, ok and elapsed < limit, elapsed, limit, detail, failures)
    raise ValueError(f"no criterion {number}")


def run_all(only: Optional[list[int]] = None, seed: int = SEED, out=sys.stdout) -> list[Result]:
    results = []
    for num, *_ in CRITERIA:
        if only and num not in only:
            continue
        r = run_one(num, seed)
        results.append(r)
        print(r.line(), file=out, flush=True)
        for failure in r.failures[:3]:
            print(f"      {failure}", file=out)
    return results


def main(argv: Optional[list[str]] = None) -> int:
    import argparse
    parser = argparse.ArgumentParser(prog="sonda selftest", description=__doc__)
    parser.add_argument("--only", type=int, nargs="*", help="criterion numbers to run")
    parser.add_argument("--seed", type=int, default=SEED)
    args = parser.parse_args(argv)
    results = run_all(args.only, args.seed)
    return 0 if all(r.passed for r in results) else 1


if __name__ == "__main__":
    sys.exit(main())
