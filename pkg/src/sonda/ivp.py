"""Certified forward Euler for ``h(0) = 0, h'(t) = g(t, h(t))`` on [0, 1].

Given a Lipschitz name ``<f, 0^L>`` of ``g`` (with modulus ``mu``), a
precision-``n`` answer is the Euler polygon with step ``2^-p`` driven by
``2^-q``-approximations of ``g``, where::

    M = ceil(log2(|f(eps, +0/1, +0/1)| + 1 + 2^mu(0)))
    p = max(mu(n + 8L), n + 8L + M)
    q = n + 8L

The polygon then stays within ``2^-n * exp(4L(t-1))`` of ``h``. Grid points
and increments are dyadic, so the polygon is evaluated exactly; only the
oracle's answers carry error.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .cfun import CFunName, LipName, abs_error, ceil_log2
from .encoding import Dyadic, parse_dyadic, tuple_strings, untuple_strings
from .errors import MalformedDyadic, MalformedTuple, TrajectoryEscape
from .names import Name, pad_to, pair, unary_name
from .real import decode_answer, schedule

__all__ = [
    "EulerSchedule",
    "compute_M",
    "euler_schedule",
    "euler_approx",
    "euler_approx_many",
    "EulerRun",
    "lip_ivp",
    "IVPName",
    "check_euler_certificate",
    "CertificateReport",
]

log = logging.getLogger(__name__)

_ZERO = "+0/1"


@dataclass(frozen=True)
class EulerSchedule:
    n: int
    L: int
    M: int
    mu: int  # mu(n + 8L)
    p: int
    q: int

    @property
    def steps(self) -> int:
        return 1 << self.p


def compute_M(g: LipName) -> int:
    """Exponent with ``|g| <= 2^M`` on the whole rectangle."""
    v = g.approx(0, Dyadic(0), Dyadic(0))
    return ceil_log2(abs(v.to_fraction()) + 1 + (1 << g.modulus(0)))


def euler_schedule(g: LipName, n: int, M: Optional[int] = None) -> EulerSchedule:
    L = g.lipschitz
    if M is None:
        M = compute_M(g)
    mu = g.modulus(n + 8 * L)
    return EulerSchedule(n=n, L=L, M=M, mu=mu, p=max(mu, n + 8 * L + M), q=n + 8 * L)


@dataclass
class EulerRun:
    values: list
    steps: int = 0  # oracle queries made, one per Euler step
    peak_state_bits: int = 0


def _split(t: Dyadic, p: int) -> int:
    """Index ``T`` of the Euler step whose closed interval ``[T, T+1] * 2^-p`` serves ``t``."""
    if t <= 0:
        return 0
    # ceil(t * 2^p) - 1
    shift = t.exp - p
    if shift <= 0:
        k = t.num << -shift
    else:
        k = -((-t.num) >> shift)
    return min(max(k - 1, 0), (1 << p) - 1)


def euler_approx_many(g: LipName, p: int, q: int, points: Sequence[Dyadic],
                      escape: Optional[Fraction] = None, via_strings: bool = False) -> EulerRun:
    """Evaluate the Euler polygon at several points in one streaming pass.

    State is the current step index and value plus the pending targets; the
    trajectory itself is never stored. Points are clamped into ``[0, 1]``.
    ``escape`` (if given) bounds ``|h|``; crossing it raises TrajectoryEscape.
    ``via_strings`` forces every slope through the string interface even when
    ``g`` offers a direct evaluator.
    """
    one = Dyadic(1)
    clamped = [min(max(t, Dyadic(0)), one) for t in points]
    steps_at = [_split(t, p) for t in clamped]
    order = sorted(range(len(points)), key=lambda i: steps_at[i])
    values: list = [None] * len(points)
    run = EulerRun(values)
    if not order:
        return run
    last_T = steps_at[order[-1]]
    if escape is not None:
        esc_num, esc_den = escape.numerator, escape.denominator
    raw_query = g.raw_query
    direct = None if via_strings else g.direct
    grid_tail = "/1" + "0" * p
    h_num, h_exp = 0, 0  # current value h~(T * 2^-p)
    pending = 0
    peak = 0
    for T in range(last_T + 1):
        if direct is not None:
            slope = direct(q, Dyadic(T, p), Dyadic(h_num, h_exp))
        else:
            v_str = ("-" if h_num < 0 else "+") + format(abs(h_num), "b") + "/1" + "0" * h_exp
            slope = decode_answer(raw_query(q, "+" + format(T, "b") + grid_tail, v_str))
        while pending < len(order) and steps_at[order[pending]] == T:
            i = order[pending]
            dt = clamped[i] - Dyadic(T, p)
            values[i] = Dyadic(h_num, h_exp) + dt * slope
            pending += 1
        se = slope.exp + p
        if se >= h_exp:
            h_num = (h_num << (se - h_exp)) + slope.num
            h_exp = se
        else:
            h_num += slope.num << (h_exp - se)
        bits = h_num.bit_length()
        if bits > peak:
            peak = bits
        if escape is not None and abs(h_num) * esc_den > esc_num << h_exp:
            raise TrajectoryEscape(
                f"Euler iterate {h_num / 2 ** h_exp:.6g} left [-{float(escape)}, {float(escape)}] "
                f"at t = {T + 1}/2^{p}")
    run.steps = last_T + 1
    run.peak_state_bits = peak
    return run


def euler_approx(g: LipName, p: int, q: int, u: Dyadic) -> Dyadic:
    """The Euler polygon with step ``2^-p`` and oracle precision ``2^-q``, at ``u``."""
    return euler_approx_many(g, p, q, [u]).values[0]


class IVPName(CFunName):
    """The solution name returned by :func:`lip_ivp`, with a batched evaluator."""

    __slots__ = ("lip", "M")

    def schedule(self, n: int) -> EulerSchedule:
        return euler_schedule(self.lip, n, self.M)

    def answer_many(self, n: int, points: Sequence[Dyadic],
                    via_strings: bool = False) -> tuple[list, EulerSchedule, EulerRun]:
        """Same values as querying the name at each point, in one Euler pass."""
        sch = self.schedule(n)
        run = euler_approx_many(self.lip, sch.p, sch.q, points,
                                escape=1 + Fraction(1, 1 << n), via_strings=via_strings)
        log.debug("n=%d p=%d q=%d steps=%d", n, sch.p, sch.q, run.steps)
        return run.values, sch, run


def lip_ivp(g: LipName) -> IVPName:
    """Solution operator: a function name ``<nu_bar, psi>`` with ``nu(n) = n + M``."""
    M = compute_M(g)

    def schedule_for(n: int) -> EulerSchedule:
        return euler_schedule(g, n, M)

    def query(w: str) -> str:
        n_max = max(0, (len(w) - 10) // 2)
        top = schedule_for(n_max)
        width = schedule(2, max(top.p, len(w)) + top.q + 2)
        try:
            parts = untuple_strings(w)
            if len(parts) != 2 or parts[0].strip("0"):
                raise MalformedTuple
            u = parse_dyadic(parts[1])
        except (MalformedTuple, MalformedDyadic):
            return pad_to(_ZERO, width)
        n = len(parts[0])
        sch = schedule_for(n)
        run = euler_approx_many(g, sch.p, sch.q, [u], escape=1 + Fraction(1, 1 << n))
        return pad_to(run.values[0].encode(), width)

    psi = Name(query, label="lipivp")
    out = IVPName(pair(unary_name(lambda n: n + M), psi), arity=1)
    out.lip = g
    out.M = M
    return out


@dataclass
class CertificateReport:
    n: int
    schedule: EulerSchedule
    checked: int = 0
    violations: list = field(default_factory=list)
    max_error: float = 0.0
    max_ratio: float = 0.0  # error / pointwise bound

    @property
    def ok(self) -> bool:
        return not self.violations


def check_euler_certificate(g: LipName, h: Callable, n: int, samples: Sequence[Dyadic],
                            dps: int = 60) -> CertificateReport:
    """Compare the Euler polygon with a closed-form solution ``h`` pointwise.

    Every sample must satisfy ``|h~(t) - h(t)| <= 2^-n * exp(4L(t-1))``.
    ``h(t)`` receives a Fraction and may return a Fraction or mpmath number.
    """
    import mpmath

    sch = euler_schedule(g, n)
    run = euler_approx_many(g, sch.p, sch.q, samples)
    report = CertificateReport(n=n, schedule=sch)
    with mpmath.workdps(dps):
        for t, value in zip(samples, run.values):
            tf = t.to_fraction()
            err = abs_error(value, h(tf))
            if isinstance(err, Fraction):
                err = mpmath.mpf(err.numerator) / err.denominator
            bound = mpmath.exp(4 * sch.L * (mpmath.mpf(tf.numerator) / tf.denominator - 1)) \
                / mpmath.mpf(2) ** n
            report.checked += 1
            report.max_error = max(report.max_error, float(err))
            report.max_ratio = max(report.max_ratio, float(err / bound))
            if err > bound:
                report.violations.append((t.encode(), float(err), float(bound)))
    return report
