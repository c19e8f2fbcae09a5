"""Order-preserving map over worker processes.

Names are closures and do not pickle, so workers are forked after the
function is stashed in a module global; only the items and results cross the
process boundary. Results come back in input order, so output does not depend
on the worker count.
"""

from __future__ import annotations

import multiprocessing as mp
from typing import Callable, Iterable, Sequence

_FN: Callable | None = None


def _call(item):
    return _FN(item)


def parallel_map(fn: Callable, items: Iterable, jobs: int = 1) -> list:
    items = list(items)
    if jobs <= 1 or len(items) < 2 or "fork" not in mp.get_all_start_methods():
        return [fn(x) for x in items]
    global _FN
    _FN = fn
    try:
        with mp.get_context("fork").Pool(min(jobs, len(items))) as pool:
            return pool.map(_call, items, chunksize=max(1, len(items) // (4 * jobs)))
    finally:
        _FN = None


def chunks(seq: Sequence, size: int) -> list:
    return [seq[i:i + size] for i in range(0, len(seq), size)]
