"""Backend dispatch for the bit-parallel subset kernels.

The numba backend is used when numba imports and ``STOPRED_NO_NUMBA`` is unset
(or "0"). Otherwise the pure-numpy backend in ``_vec`` runs. Both produce
identical results; ``benchmarks/bench_kernels.py`` times them side by side.

Subset spaces are split into contiguous colex rank ranges so counts can be
summed over chunks in any order. ``STOPRED_THREADS`` caps the worker count
(the numba kernels release the GIL).
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from functools import lru_cache
from math import comb

import numpy as np

from . import _vec

MAX_BITS = 62

try:
    from . import _jit
except ImportError:  # pragma: no cover - numba missing
    _jit = None

_BACKENDS = {"numpy": _vec}
if _jit is not None:
    _BACKENDS["numba"] = _jit


def _default_backend() -> str:
    flag = os.environ.get("STOPRED_NO_NUMBA", "").strip().lower()
    if flag not in ("", "0", "false", "no") or _jit is None:
        return "numpy"
    return "numba"


_active = _default_backend()


def backend() -> str:
    return _active


def set_backend(name: str) -> str:
    """Switch backend at runtime; returns the previous name."""
    global _active
    if name not in _BACKENDS:
        raise ValueError(f"unknown or unavailable backend {name!r}")
    prev, _active = _active, name
    return prev


def _impl():
    return _BACKENDS[_active]


def threads() -> int:
    raw = os.environ.get("STOPRED_THREADS")
    if raw:
        return max(1, int(raw))
    return os.cpu_count() or 1


@lru_cache(maxsize=None)
def binom_table(n: int) -> np.ndarray:
    t = np.zeros((n + 1, n + 1), dtype=np.int64)
    for a in range(n + 1):
        for b in range(a + 1):
            t[a, b] = comb(a, b)
    return t


def _check_n(n: int) -> None:
    if n > MAX_BITS:
        raise ValueError(f"subset kernels support n <= {MAX_BITS}, got {n}")


def as_masks(values) -> np.ndarray:
    return np.ascontiguousarray(np.asarray(list(values), dtype=np.int64).reshape(-1))


def _chunks(total: int, parts: int, min_size: int = 1 << 15):
    parts = max(1, min(parts, total // min_size or 1))
    step = -(-total // parts) if total else 0
    return [(a, min(total, a + step)) for a in range(0, total, step)] if total else []


def _map_ranges(fn, total, *args):
    ranges = _chunks(total, threads())
    if len(ranges) <= 1:
        return [fn(*args, a, b) for a, b in ranges]
    with ThreadPoolExecutor(max_workers=len(ranges)) as pool:
        return list(pool.map(lambda ab: fn(*args, ab[0], ab[1]), ranges))


def unrank_masks(n: int, w: int, start: int = 0, count: int | None = None) -> np.ndarray:
    """Masks of the size-w subsets of range(n) with colex ranks [start, start+count)."""
    _check_n(n)
    total = comb(n, w)
    if count is None:
        count = total - start
    if start < 0 or start + count > total:
        raise ValueError("rank range out of bounds")
    return _impl().unrank_masks(w, start, count, binom_table(n))


def first_uncovered(rows: np.ndarray, n: int, w: int) -> int:
    """Smallest (colex) size-w subset met exactly once by no row, or -1."""
    _check_n(n)
    table = binom_table(n)
    for m in _map_ranges(lambda a, b: _impl().first_uncovered(rows, w, a, b, table), comb(n, w)):
        if m >= 0:
            return int(m)
    return -1


def first_uncontaining(blocks: np.ndarray, n: int, w: int) -> int:
    _check_n(n)
    table = binom_table(n)
    for m in _map_ranges(lambda a, b: _impl().first_uncontaining(blocks, w, a, b, table), comb(n, w)):
        if m >= 0:
            return int(m)
    return -1


def count_peel_failures(rows: np.ndarray, n: int, w: int) -> int:
    _check_n(n)
    table = binom_table(n)
    return sum(int(x) for x in _map_ranges(lambda a, b: _impl().count_peel_failures(rows, w, a, b, table), comb(n, w)))


def count_dependent(cols: np.ndarray, n: int, w: int) -> int:
    """Size-w column subsets that are linearly dependent over GF(2); one mask per column."""
    _check_n(n)
    if len(cols) != n:
        raise ValueError(f"need one column mask per coordinate, got {len(cols)} for n={n}")
    table = binom_table(n)
    return sum(int(x) for x in _map_ranges(lambda a, b: _impl().count_dependent(cols, w, a, b, table), comb(n, w)))


def count_containing(supports: np.ndarray, n: int, w: int) -> int:
    _check_n(n)
    table = binom_table(n)
    return sum(int(x) for x in _map_ranges(lambda a, b: _impl().count_containing(supports, w, a, b, table), comb(n, w)))


def cover_bits(cands: np.ndarray, sets: np.ndarray) -> np.ndarray:
    return _impl().cover_bits(cands, sets)


def popcount(words: np.ndarray) -> int:
    """Total set bits of an int64 word array, sign bit included."""
    return int(np.bitwise_count(np.ascontiguousarray(words).view(np.uint64)).sum())


def and_popcounts(bits: np.ndarray, vec: np.ndarray) -> np.ndarray:
    return _impl().and_popcounts(bits, vec)


def peel_residual(rows, mask: int) -> int:
    """Peeling on one erasure mask; plain Python, used for single patterns."""
    e = int(mask)
    rows = [int(r) for r in rows]
    changed = True
    while changed and e:
        changed = False
        for r in rows:
            x = r & e
            if x and not x & (x - 1):
                e &= ~x
                changed = True
    return e
