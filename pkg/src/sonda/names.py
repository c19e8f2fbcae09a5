"""Regular (length-monotone) string functions used as oracles.

Every object this package computes on -- a real number, a continuous
function, a closed planar set -- is handed around as a :class:`Name`: a total
map from strings to strings whose output length never decreases as the input
gets longer.
"""

from __future__ import annotations

import threading
from typing import Callable, Iterable, Optional

from .errors import DominationFault, MalformedName, RegularityFault

__all__ = [
    "Name",
    "size_of",
    "pair",
    "pair_many",
    "project",
    "unpair_answer",
    "pad",
    "pad_to",
    "widen",
    "strip_padding",
    "const_name",
    "unary_name",
    "check_regularity",
    "PAD",
]

PAD = "#"

Query = Callable[[str], str]


class Name:
    """A regular string function with an observed size.

    Parameters
    ----------
    fn : callable
        The underlying total map ``str -> str``.
    size : callable, optional
        Declared size function ``n -> |fn(u)|`` for ``|u| = n``. When given,
        ``size()`` answers from it without querying ``fn``.
    regularity : {"sampled", "trusted"}
        In sampled mode every answer length is recorded per input length and
        checked against previously seen lengths; a contradiction raises
        :class:`RegularityFault`.
    """

    __slots__ = ("fn", "_declared", "_mode", "_lengths", "_lock", "label")

    def __init__(self, fn: Query, size: Optional[Callable[[int], int]] = None,
                 regularity: str = "sampled", label: str = ""):
        if regularity not in ("sampled", "trusted"):
            raise ValueError("regularity must be 'sampled' or 'trusted'")
        self.fn = fn
        self._declared = size
        self._mode = regularity
        self._lengths: dict[int, int] = {}
        self._lock = threading.Lock()
        self.label = label

    def __repr__(self):
        return f"Name({self.label or self.fn!r})"

    def __call__(self, u: str) -> str:
        out = self.fn(u)
        if self._mode == "sampled":
            n, k = len(u), len(out)
            seen = self._lengths.get(n)
            if seen is None:
                self._record(n, k, u)
            elif seen != k:
                raise RegularityFault(
                    f"{self!r}: inputs of length {n} gave outputs of lengths {seen} and {k}")
        return out

    def _record(self, n: int, k: int, u: str) -> None:
        with self._lock:
            for m, j in self._lengths.items():
                if (m < n and j > k) or (m > n and j < k):
                    raise RegularityFault(
                        f"{self!r}: |input|={m} -> {j} but |input|={n} -> {k} (query {u!r})")
            if self._declared is not None and self._declared(n) != k:
                raise RegularityFault(
                    f"{self!r}: declared size {self._declared(n)} at {n}, observed {k}")
            self._lengths[n] = k

    def size(self, n: int) -> int:
        """``|phi|(n)``, i.e. the length of ``phi(0^n)``."""
        if self._declared is not None:
            return self._declared(n)
        k = self._lengths.get(n)
        if k is None:
            k = len(self("0" * n))
        return k


def size_of(phi: Name, n: int) -> int:
    return phi.size(n)


def unpair_answer(answer: str) -> str:
    """Strip the ``1 0^k`` tail that pairing appends to a component's value."""
    cut = answer.rfind("1")
    if cut < 0 or answer[cut + 1:].strip("0"):
        raise MalformedName(f"not a paired answer: {answer!r}")
    return answer[:cut]


def pair(phi: Name, psi: Name) -> Name:
    """``<phi, psi>``: ``0u -> phi(u) 1 0^|psi(u)|`` and ``1u -> psi(u) 1 0^|phi(u)|``.

    The empty input is answered like ``0`` with an empty tail, which keeps
    the result regular.
    """

    # trusted components need no length bookkeeping, so call them directly
    left = phi.fn if phi._mode == "trusted" else phi
    right = psi.fn if psi._mode == "trusted" else psi

    def query(u: str) -> str:
        if not u:
            return left("") + "1" + "0" * psi.size(0)
        rest = u[1:]
        if u[0] == "0":
            return left(rest) + "1" + "0" * psi.size(len(rest))
        return right(rest) + "1" + "0" * phi.size(len(rest))

    def size(n: int) -> int:
        m = max(n - 1, 0)
        return phi.size(m) + psi.size(m) + 1

    return Name(query, size=size, regularity="trusted",
                label=f"<{phi.label or '?'},{psi.label or '?'}>")


def pair_many(*names: Name) -> Name:
    """Left-nested pairing: ``<a, b, c> = <<a, b>, c>``."""
    if len(names) < 2:
        raise ValueError("need at least two names")
    out = names[0]
    for nm in names[1:]:
        out = pair(out, nm)
    return out


def project(side: str, paired: Name) -> Name:
    """Recover a component of a paired name, extensionally."""
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    prefix = "0" if side == "left" else "1"

    def query(u: str) -> str:
        return unpair_answer(paired(prefix + u))

    def size(n: int) -> int:
        # |<a,b>|(n+1) = |a|(n) + |b|(n) + 1; the other component's share is
        # only observable by querying, so read it off the answer
        return len(query("0" * n))

    return Name(query, regularity="trusted", label=f"{side}({paired.label})")


def pad(phi_prime: Query, psi: Name) -> Name:
    """Make ``phi_prime`` regular by ``#``-padding each value to ``|psi|``."""

    def query(u: str) -> str:
        v = phi_prime(u)
        target = psi.size(len(u))
        if len(v) > target:
            raise DominationFault(
                f"value of length {len(v)} exceeds dominating size {target} at |u|={len(u)}")
        return v + PAD * (target - len(v))

    return Name(query, size=psi.size, regularity="trusted", label="pad")


def widen(phi: Name, factor: int, extra: int = 0) -> Name:
    """Re-pad every answer of ``phi`` to ``factor * |phi| + extra`` symbols.

    Decoders strip ``#`` padding, so the widened name carries the same
    object with a larger size function.
    """
    if factor < 1 or extra < 0:
        raise ValueError("widening needs factor >= 1 and extra >= 0")
    target = lambda n: factor * phi.size(n) + extra  # noqa: E731
    return pad(phi, Name(lambda u: "", size=target, regularity="trusted"))


def pad_to(value: str, length: int) -> str:
    if len(value) > length:
        raise DominationFault(f"value of length {len(value)} exceeds schedule {length}")
    return value + PAD * (length - len(value))


def strip_padding(value: str) -> str:
    return value.rstrip(PAD)


def const_name(u: str) -> Name:
    k = len(u)
    return Name(lambda _v: u, size=lambda _n: k, regularity="trusted",
                label=repr(u) if k <= 12 else f"const[{k}]")


def unary_name(mu: Callable[[int], int]) -> Name:
    """``u -> 0^mu(|u|)`` for a non-decreasing ``mu``."""
    return Name(lambda u: "0" * mu(len(u)), size=mu, label="mu")


def check_regularity(phi, samples: Iterable[str]) -> Optional[tuple[str, str]]:
    """Search ``samples`` for a witness ``(u, v)`` with ``|u| <= |v|`` but ``|phi(u)| > |phi(v)|``.

    Returns ``None`` when no witness exists among the samples. Queries bypass
    the name's own regularity bookkeeping.
    """
    fn = phi.fn if isinstance(phi, Name) else phi
    by_len: dict[int, tuple[str, int, str, int]] = {}
    for u in samples:
        k = len(fn(u))
        lo = by_len.get(len(u))
        if lo is None:
            by_len[len(u)] = (u, k, u, k)
            continue
        umin, kmin, umax, kmax = lo
        if k < kmin:
            umin, kmin = u, k
        if k > kmax:
            umax, kmax = u, k
        by_len[len(u)] = (umin, kmin, umax, kmax)
    # same-length inputs with different output lengths are a witness too
    for umin, kmin, umax, kmax in by_len.values():
        if kmax > kmin:
            return umax, umin
    best = None  # (longest output so far, its input)
    for n in sorted(by_len):
        umin, kmin, umax, kmax = by_len[n]
        if best is not None and best[0] > kmin:
            return best[1], umin
        if best is None or kmax > best[0]:
            best = (kmax, umax)
    return None
