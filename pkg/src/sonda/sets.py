"""Closed subsets of the unit square given by distance gap predicates.

A set name answers the tupled query ``(u, v, 0^n)`` with one bit: ``1``
whenever the point ``([[u]], [[v]])`` lies within ``2^-n`` of the set, ``0``
whenever it is farther than ``2 * 2^-n``; in between either bit is allowed.

All geometry here is exact: coordinates are scaled to a common power of two
and distances are compared through their squares in integer arithmetic.
"""

from __future__ import annotations

import os
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence, Union

from ._parallel import parallel_map
from .encoding import Dyadic, parse_dyadic, tuple_strings, untuple_strings
from .errors import CapExceeded, EmptySet, MalformedDyadic, MalformedName, MalformedTuple
from .names import Name

__all__ = [
    "ExactSet",
    "SetName",
    "set_from_exact",
    "set_query",
    "convex_hull",
    "hull_vertices",
    "exact_hull_distance",
    "exact_hull_dist_sq",
    "hull_candidates",
    "load_exact_set",
    "DEFAULT_MAX_PREC",
]

DEFAULT_MAX_PREC = 8

IntPoint = tuple[int, int]
Coord = Union[Dyadic, str]


# -- integer geometry ---------------------------------------------------------


def _cross(o: IntPoint, a: IntPoint, b: IntPoint) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _seg_dist_sq(p: IntPoint, a: IntPoint, b: IntPoint) -> Fraction:
    """Exact squared distance from ``p`` to the segment ``ab``."""
    dx, dy = b[0] - a[0], b[1] - a[1]
    px, py = p[0] - a[0], p[1] - a[1]
    dot = px * dx + py * dy
    length_sq = dx * dx + dy * dy
    if dot <= 0 or length_sq == 0:
        return Fraction(px * px + py * py)
    if dot >= length_sq:
        qx, qy = p[0] - b[0], p[1] - b[1]
        return Fraction(qx * qx + qy * qy)
    cross = px * dy - py * dx
    return Fraction(cross * cross, length_sq)


def _seg_within(p: IntPoint, a: IntPoint, b: IntPoint, thr: int) -> bool:
    """``dist(p, ab)^2 <= thr`` without division."""
    dx, dy = b[0] - a[0], b[1] - a[1]
    px, py = p[0] - a[0], p[1] - a[1]
    dot = px * dx + py * dy
    length_sq = dx * dx + dy * dy
    if dot <= 0 or length_sq == 0:
        return px * px + py * py <= thr
    if dot >= length_sq:
        qx, qy = p[0] - b[0], p[1] - b[1]
        return qx * qx + qy * qy <= thr
    cross = px * dy - py * dx
    return cross * cross <= thr * length_sq


def hull_vertices(points: Iterable[IntPoint]) -> list[IntPoint]:
    """Convex hull by monotone chain, counter-clockwise, collinear points dropped."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    lower: list[IntPoint] = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[IntPoint] = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    return hull if len(hull) >= 2 else pts[:1]


def _in_convex(hull: Sequence[IntPoint], p: IntPoint) -> bool:
    if len(hull) < 3:
        return False
    prev = hull[-1]
    for cur in hull:
        if _cross(prev, cur, p) < 0:
            return False
        prev = cur
    return True


def _hull_within(hull: Sequence[IntPoint], p: IntPoint, thr: int) -> bool:
    if len(hull) == 1:
        dx, dy = p[0] - hull[0][0], p[1] - hull[0][1]
        return dx * dx + dy * dy <= thr
    if _in_convex(hull, p):
        return True
    if len(hull) == 2:
        return _seg_within(p, hull[0], hull[1], thr)
    prev = hull[-1]
    for cur in hull:
        if _seg_within(p, prev, cur, thr):
            return True
        prev = cur
    return False


def _hull_dist_sq(hull: Sequence[IntPoint], p: IntPoint) -> Fraction:
    if len(hull) == 1:
        return _seg_dist_sq(p, hull[0], hull[0])
    if _in_convex(hull, p):
        return Fraction(0)
    if len(hull) == 2:
        return _seg_dist_sq(p, hull[0], hull[1])
    return min(_seg_dist_sq(p, hull[i - 1], hull[i]) for i in range(len(hull)))


def _in_polygon(poly: Sequence[IntPoint], p: IntPoint) -> bool:
    """Even-odd rule for a simple polygon; boundary points count as inside."""
    inside = False
    x, y = p
    n = len(poly)
    for i in range(n):
        a, b = poly[i - 1], poly[i]
        if _cross(a, b, p) == 0 and min(a[0], b[0]) <= x <= max(a[0], b[0]) \
                and min(a[1], b[1]) <= y <= max(a[1], b[1]):
            return True
        if (a[1] > y) != (b[1] > y):
            # x-coordinate of the crossing, compared without division
            lhs = (x - a[0]) * (b[1] - a[1])
            rhs = (y - a[1]) * (b[0] - a[0])
            if (b[1] - a[1] > 0 and lhs < rhs) or (b[1] - a[1] < 0 and lhs > rhs):
                inside = not inside
    return inside


def _lift(d: Dyadic, exp: int) -> int:
    return d.num << (exp - d.exp)


# -- exact sets ---------------------------------------------------------------


@dataclass(frozen=True)
class ExactSet:
    """A finite point set, or (``filled``) the region bounded by a simple polygon."""

    points: tuple
    filled: bool = False
    _scaled: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        pts = tuple((_as_dyadic(x), _as_dyadic(y)) for x, y in self.points)
        for x, y in pts:
            if not (0 <= x <= 1 and 0 <= y <= 1):
                raise ValueError(f"point ({x}, {y}) lies outside the unit square")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "_scaled", {})

    def __len__(self) -> int:
        return len(self.points)

    @property
    def exp(self) -> int:
        return max((max(x.exp, y.exp) for x, y in self.points), default=0)

    def scaled(self, exp: int) -> list[IntPoint]:
        """Integer coordinates at scale ``2^exp`` (``exp >= self.exp``)."""
        got = self._scaled.get(exp)
        if got is None:
            got = self._scaled[exp] = [(_lift(x, exp), _lift(y, exp)) for x, y in self.points]
        return got

    def dist_sq(self, px: Dyadic, py: Dyadic) -> Fraction:
        """Exact squared distance from a dyadic point to the set."""
        if not self.points:
            raise EmptySet("distance to the empty set")
        e = max(self.exp, px.exp, py.exp)
        pts = self.scaled(e)
        p = (_lift(px, e), _lift(py, e))
        if self.filled and len(pts) >= 3 and _in_polygon(pts, p):
            return Fraction(0)
        if self.filled and len(pts) >= 2:
            best = min(_seg_dist_sq(p, pts[i - 1], pts[i]) for i in range(len(pts)))
        else:
            best = min(_seg_dist_sq(p, a, a) for a in pts)
        return best / (1 << (2 * e))

    def within(self, px: Dyadic, py: Dyadic, radius_sq_num: int, radius_exp: int) -> bool:
        """``dist^2 <= radius_sq_num / 4^radius_exp``, in integers."""
        e = max(self.exp, px.exp, py.exp, radius_exp)
        thr = radius_sq_num << (2 * (e - radius_exp))
        pts = self.scaled(e)
        p = (_lift(px, e), _lift(py, e))
        if self.filled and len(pts) >= 3:
            if _in_polygon(pts, p):
                return True
            return any(_seg_within(p, pts[i - 1], pts[i], thr) for i in range(len(pts)))
        if self.filled and len(pts) == 2:
            return _seg_within(p, pts[0], pts[1], thr)
        return any(_seg_within(p, a, a, thr) for a in pts)

    def dumps(self) -> str:
        lines = ["polygon"] if self.filled else []
        lines += [f"{x.encode()} {y.encode()}" for x, y in self.points]
        return "\n".join(lines) + "\n"


def _as_dyadic(value) -> Dyadic:
    if isinstance(value, Dyadic):
        return value
    if isinstance(value, str):
        return parse_dyadic(value)
    return Dyadic.from_fraction(value)


def load_exact_set(text: str) -> ExactSet:
    """Parse the point-file format: ``x y`` dyadic strings per line, ``#`` comments.

    A line reading ``polygon`` (before the points) marks a filled polygon.
    """
    points = []
    filled = False
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if line == "polygon" and not points:
            filled = True
            continue
        fields = line.split()
        if len(fields) != 2:
            raise ValueError(f"line {lineno}: expected two dyadic strings")
        try:
            points.append((parse_dyadic(fields[0]), parse_dyadic(fields[1])))
        except MalformedDyadic as exc:
            raise ValueError(f"line {lineno}: {exc}") from exc
    return ExactSet(tuple(points), filled=filled)


# -- set names ----------------------------------------------------------------


class SetName:
    """A name of a closed subset of the unit square.

    ``direct(u, v, n)`` (optional) returns the same bit as the string query
    for dyadic ``u, v``; enumeration loops use it to skip the string layer.
    """

    __slots__ = ("name", "direct")

    def __init__(self, name: Name, direct: Optional[Callable[[Dyadic, Dyadic, int], int]] = None):
        self.name = name
        self.direct = direct

    def raw(self, u: str, v: str, n: int) -> str:
        return self.name(tuple_strings((u, v, "0" * n)))

    def query(self, u: Coord, v: Coord, n: int) -> int:
        return set_query(self, u, v, n)


def _parse_query(w: str) -> Optional[tuple[Dyadic, Dyadic, int]]:
    try:
        parts = untuple_strings(w)
        if len(parts) != 3 or parts[2].strip("0"):
            return None
        return parse_dyadic(parts[0]), parse_dyadic(parts[1]), len(parts[2])
    except (MalformedTuple, MalformedDyadic):
        return None


def _bit_name(decide: Callable[[Dyadic, Dyadic, int], int], label: str) -> Name:
    def query(w: str) -> str:
        parsed = _parse_query(w)
        if parsed is None:
            return "0"
        return "1" if decide(*parsed) else "0"

    return Name(query, size=lambda n: 1, regularity="trusted", label=label)


def set_from_exact(E: ExactSet) -> SetName:
    """Name of ``E``: answer 1 iff the exact distance is at most ``1.5 * 2^-n``."""
    if not len(E):
        raise EmptySet("a set name needs a nonempty set")

    def decide(u: Dyadic, v: Dyadic, n: int) -> int:
        # (1.5 * 2^-n)^2 = 9 / 4^(n+1)
        return 1 if E.within(u, v, 9, n + 1) else 0

    return SetName(_bit_name(decide, f"set[{len(E)}]"), direct=decide)


def set_query(S: SetName, u: Coord, v: Coord, n: int) -> int:
    """One bit from a set name, with the answer's grammar checked."""
    us = u if isinstance(u, str) else u.encode()
    vs = v if isinstance(v, str) else v.encode()
    answer = S.raw(us, vs, n)
    if answer not in ("0", "1"):
        raise MalformedName(f"set name answered {answer!r}, expected a single bit")
    return int(answer)


# -- convex hull ----------------------------------------------------------------


def _max_prec(max_prec: Optional[int]) -> int:
    if max_prec is not None:
        return max_prec
    env = os.environ.get("SONDA_MAX_PREC")
    return int(env) if env else DEFAULT_MAX_PREC


def hull_candidates(S: SetName, m: int, jobs: int = 1, via_strings: bool = False) -> list[IntPoint]:
    """Grid points ``(i, j) / 2^m`` of the unit square where ``S`` answers 1 at precision ``m``."""
    side = 1 << m
    ask = None if via_strings else S.direct

    def row(i: int) -> list[IntPoint]:
        x = Dyadic(i, m)
        if ask is not None:
            return [(i, j) for j in range(side + 1) if ask(x, Dyadic(j, m), m)]
        xs = x.encode()
        return [(i, j) for j in range(side + 1) if set_query(S, xs, Dyadic(j, m).encode(), m)]

    rows = parallel_map(row, range(side + 1), jobs)
    return [p for r in rows for p in r]


def _triangle_within(tri: tuple[IntPoint, IntPoint, IntPoint], p: IntPoint, thr: int) -> bool:
    a, b, c = tri
    if _cross(a, b, c):  # the sign test means nothing for a flat triangle
        d1, d2, d3 = _cross(a, b, p), _cross(b, c, p), _cross(c, a, p)
        if (d1 >= 0 and d2 >= 0 and d3 >= 0) or (d1 <= 0 and d2 <= 0 and d3 <= 0):
            return True
    return _seg_within(p, a, b, thr) or _seg_within(p, b, c, thr) or _seg_within(p, c, a, thr)


def convex_hull(S: SetName, max_prec: Optional[int] = None, method: str = "hull",
                jobs: int = 1) -> SetName:
    """Name of the convex hull of the set ``S`` names.

    A query at precision ``n`` collects the grid points of pitch
    ``2^-(n+3)`` that ``S`` accepts at precision ``n+3`` and answers 1 iff
    the query point lies within ``1.5 * 2^-n`` of their convex hull. With
    ``method="triangles"`` the same test runs as an exhaustive search over
    all candidate triangles (segments and points included); in the plane both
    give the same bit. Precisions above ``max_prec`` raise CapExceeded.
    """
    if method not in ("hull", "triangles"):
        raise ValueError("method must be 'hull' or 'triangles'")
    cap = _max_prec(max_prec)
    cache: dict[int, list[IntPoint]] = {}
    lock = threading.Lock()

    def prepared(n: int) -> list[IntPoint]:
        with lock:
            got = cache.get(n)
        if got is None:
            cands = hull_candidates(S, n + 3, jobs)
            got = hull_vertices(cands) if method == "hull" else sorted(cands)
            with lock:
                cache[n] = got
        return got

    def decide(u: Dyadic, v: Dyadic, n: int) -> int:
        if n > cap:
            raise CapExceeded(f"hull precision {n} exceeds the cap {cap}")
        pts = prepared(n)
        if not pts:
            return 0
        m = n + 3
        e = max(m, u.exp, v.exp)
        k = e - m
        p = (_lift(u, e), _lift(v, e))
        thr = 9 << (2 * (e - n - 1))
        if method == "hull":
            return 1 if _hull_within([(x << k, y << k) for x, y in pts], p, thr) else 0
        scaled = [(x << k, y << k) for x, y in pts]
        count = len(scaled)
        for i in range(count):
            for j in range(i, count):
                for l in range(j, count):
                    if _triangle_within((scaled[i], scaled[j], scaled[l]), p, thr):
                        return 1
        return 0

    return SetName(_bit_name(decide, "hull"), direct=decide)


# -- exact hull oracle ----------------------------------------------------------


def exact_hull_dist_sq(E: ExactSet, px: Dyadic, py: Dyadic) -> Fraction:
    """Exact squared distance from a point to the convex hull of ``E``."""
    if not len(E):
        raise EmptySet("hull of the empty set")
    e = max(E.exp, px.exp, py.exp)
    hull = hull_vertices(E.scaled(e))
    return _hull_dist_sq(hull, (_lift(px, e), _lift(py, e))) / (1 << (2 * e))


def exact_hull_distance(E: ExactSet, px: Dyadic, py: Dyadic, n: int) -> str:
    """Classify the point against the gap thresholds at precision ``n``.

    Returns ``"near"`` (distance below ``2^-n``), ``"far"`` (above
    ``2 * 2^-n``) or ``"band"``.
    """
    d = exact_hull_dist_sq(E, px, py)
    if d < Fraction(1, 1 << (2 * n)):
        return "near"
    if d > Fraction(4, 1 << (2 * n)):
        return "far"
    return "band"
