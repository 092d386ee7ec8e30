"""Pure-numpy versions of the kernels in ``_jit``; identical signatures and results.

Work is vectorized across a chunk of subsets instead of looping per subset.
"""

from __future__ import annotations

import numpy as np

_BATCH = 1 << 16


def unrank_masks(w, start, count, table):
    ranks = np.arange(start, start + count, dtype=np.int64)
    masks = np.zeros(count, dtype=np.int64)
    n = table.shape[0] - 1
    for i in range(w, 0, -1):
        col = table[:n, i]
        c = np.searchsorted(col, ranks, side="right") - 1
        masks |= np.left_shift(np.int64(1), c.astype(np.int64))
        ranks -= col[c]
    return masks


def _weight_one(x):
    return (x != 0) & ((x & (x - 1)) == 0)


def _covered(rows, masks):
    hit = np.zeros(masks.shape[0], dtype=bool)
    for r in rows:
        hit |= _weight_one(masks & r)
    return hit


def _batches(start, stop):
    for a in range(start, stop, _BATCH):
        yield a, min(stop, a + _BATCH)


def first_uncovered(rows, w, start, stop, table):
    for a, b in _batches(start, stop):
        masks = unrank_masks(w, a, b - a, table)
        bad = np.flatnonzero(~_covered(rows, masks))
        if bad.size:
            return np.int64(masks[bad[0]])
    return np.int64(-1)


def first_uncontaining(blocks, w, start, stop, table):
    for a, b in _batches(start, stop):
        masks = unrank_masks(w, a, b - a, table)
        hit = np.zeros(masks.shape[0], dtype=bool)
        for blk in blocks:
            hit |= (blk & ~masks) == 0
        bad = np.flatnonzero(~hit)
        if bad.size:
            return np.int64(masks[bad[0]])
    return np.int64(-1)


def peel_all(rows, masks):
    e = masks.copy()
    while True:
        before = e.copy()
        for r in rows:
            x = e & r
            e = np.where(_weight_one(x), e & ~x, e)
        if np.array_equal(before, e):
            return e


def count_peel_failures(rows, w, start, stop, table):
    fails = 0
    for a, b in _batches(start, stop):
        masks = unrank_masks(w, a, b - a, table)
        fails += int(np.count_nonzero(peel_all(rows, masks)))
    return fails


def count_dependent(cols, w, start, stop, table):
    fails = 0
    height = int(np.max(cols)).bit_length() if cols.size else 0
    for a, b in _batches(start, stop):
        masks = unrank_masks(w, a, b - a, table)
        m = masks.shape[0]
        basis = np.zeros((m, max(height, 1)), dtype=np.int64)
        dep = np.zeros(m, dtype=bool)
        for j in range(cols.shape[0]):
            sel = ((masks >> j) & 1).astype(bool) & ~dep
            if not sel.any():
                continue
            idx = np.flatnonzero(sel)
            v = np.full(idx.shape[0], cols[j], dtype=np.int64)
            placed = np.zeros(idx.shape[0], dtype=bool)
            for lead in range(height - 1, -1, -1):
                has = ((v >> lead) & 1).astype(bool) & ~placed
                if not has.any():
                    continue
                cur = basis[idx, lead]
                empty = has & (cur == 0)
                basis[idx[empty], lead] = v[empty]
                placed |= empty
                red = has & ~empty
                v[red] ^= cur[red]
            dep[idx[(v == 0) & ~placed]] = True
        fails += int(np.count_nonzero(dep))
    return fails


def count_containing(supports, w, start, stop, table):
    fails = 0
    for a, b in _batches(start, stop):
        masks = unrank_masks(w, a, b - a, table)
        hit = np.zeros(masks.shape[0], dtype=bool)
        for s in supports:
            hit |= (s & ~masks) == 0
        fails += int(np.count_nonzero(hit))
    return fails


def cover_bits(cands, sets):
    nsets = sets.shape[0]
    nwords = (nsets + 63) // 64
    out = np.zeros((cands.shape[0], nwords), dtype=np.int64)
    for c, r in enumerate(cands):
        bits = _weight_one(sets & r)
        packed = np.packbits(bits, bitorder="little")
        buf = np.zeros(nwords * 8, dtype=np.uint8)
        buf[: packed.shape[0]] = packed
        out[c] = buf.view(np.int64)
    return out


def and_popcounts(bits, vec):
    out = np.empty(bits.shape[0], dtype=np.int64)
    step = max(1, (1 << 22) // max(1, bits.shape[1]))
    for a in range(0, bits.shape[0], step):
        blk = bits[a : a + step] & vec
        # unsigned view: bitwise_count on signed ints counts |x|
        out[a : a + step] = np.bitwise_count(blk.view(np.uint64)).sum(axis=1, dtype=np.int64)
    return out
