"""numba kernels over int64 support masks (bit i set = coordinate i in the set).

All masks fit in 62 bits; callers guarantee n <= 62. Subsets of a fixed size
are walked in colexicographic order, which for bitmasks is plain numeric
order, so a rank range [start, stop) is a contiguous chunk.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def _popcount(x):
    # unsigned shifts; a signed shift would smear the sign bit
    x = np.uint64(x)
    x = x - ((x >> np.uint64(1)) & np.uint64(0x5555555555555555))
    x = (x & np.uint64(0x3333333333333333)) + ((x >> np.uint64(2)) & np.uint64(0x3333333333333333))
    x = (x + (x >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
    return np.int64((x * np.uint64(0x0101010101010101)) >> np.uint64(56))


@njit(cache=True, nogil=True)
def _next_comb(x):
    if x == 0:
        return x
    c = x & -x
    r = x + c
    return (((r ^ x) >> 2) // c) | r


@njit(cache=True, nogil=True)
def _unrank(rank, w, table):
    mask = np.int64(0)
    for i in range(w, 0, -1):
        c = i - 1
        while table[c + 1, i] <= rank:
            c += 1
        mask |= np.int64(1) << c
        rank -= table[c, i]
    return mask


@njit(cache=True, nogil=True)
def unrank_masks(w, start, count, table):
    out = np.empty(count, dtype=np.int64)
    if count == 0:
        return out
    m = _unrank(start, w, table)
    for idx in range(count):
        out[idx] = m
        if idx + 1 < count:
            m = _next_comb(m)
    return out


@njit(cache=True, nogil=True)
def _is_covered(rows, m):
    for r in rows:
        x = r & m
        if x != 0 and (x & (x - 1)) == 0:
            return True
    return False


@njit(cache=True, nogil=True)
def first_uncovered(rows, w, start, stop, table):
    """First size-w set in the rank range that no row meets exactly once; -1 if none."""
    if stop <= start:
        return np.int64(-1)
    m = _unrank(start, w, table)
    for _ in range(start, stop):
        if not _is_covered(rows, m):
            return m
        m = _next_comb(m)
    return np.int64(-1)


@njit(cache=True, nogil=True)
def first_uncontaining(blocks, w, start, stop, table):
    """First size-w set in the rank range containing no block; -1 if none."""
    if stop <= start:
        return np.int64(-1)
    m = _unrank(start, w, table)
    for _ in range(start, stop):
        hit = False
        for b in blocks:
            if b & ~m == 0:
                hit = True
                break
        if not hit:
            return m
        m = _next_comb(m)
    return np.int64(-1)


@njit(cache=True, nogil=True)
def _peel(rows, e):
    changed = True
    while changed and e != 0:
        changed = False
        for r in rows:
            x = r & e
            if x != 0 and (x & (x - 1)) == 0:
                e &= ~x
                changed = True
    return e


@njit(cache=True, nogil=True)
def count_peel_failures(rows, w, start, stop, table):
    if stop <= start:
        return 0
    m = _unrank(start, w, table)
    fails = 0
    for _ in range(start, stop):
        if _peel(rows, m) != 0:
            fails += 1
        m = _next_comb(m)
    return fails


@njit(cache=True, nogil=True)
def _dependent(cols, m):
    # xor basis keyed by leading bit; columns are GF(2) vectors of height <= 62
    basis = np.zeros(64, dtype=np.int64)
    j = 0
    while m != 0:
        if m & 1:
            v = cols[j]
            while v != 0:
                lead = 63
                while (v >> lead) & 1 == 0:
                    lead -= 1
                if basis[lead] == 0:
                    basis[lead] = v
                    break
                v ^= basis[lead]
            if v == 0:
                return True
        m >>= 1
        j += 1
    return False


@njit(cache=True, nogil=True)
def count_dependent(cols, w, start, stop, table):
    if stop <= start:
        return 0
    m = _unrank(start, w, table)
    fails = 0
    for _ in range(start, stop):
        if _dependent(cols, m):
            fails += 1
        m = _next_comb(m)
    return fails


@njit(cache=True, nogil=True)
def count_containing(supports, w, start, stop, table):
    if stop <= start:
        return 0
    m = _unrank(start, w, table)
    fails = 0
    for _ in range(start, stop):
        for s in supports:
            if s & ~m == 0:
                fails += 1
                break
        m = _next_comb(m)
    return fails


@njit(cache=True, nogil=True)
def cover_bits(cands, sets):
    """Packed (len(cands), ceil(len(sets)/64)) matrix: bit j of row c is 1 iff cands[c] meets sets[j] once."""
    nwords = (sets.shape[0] + 63) // 64
    out = np.zeros((cands.shape[0], nwords), dtype=np.int64)
    for c in range(cands.shape[0]):
        r = cands[c]
        for j in range(sets.shape[0]):
            x = r & sets[j]
            if x != 0 and (x & (x - 1)) == 0:
                out[c, j >> 6] |= np.int64(1) << (j & 63)
    return out


@njit(cache=True, nogil=True)
def and_popcounts(bits, vec):
    out = np.zeros(bits.shape[0], dtype=np.int64)
    for c in range(bits.shape[0]):
        s = 0
        for k in range(bits.shape[1]):
            s += _popcount(bits[c, k] & vec[k])
        out[c] = s
    return out
