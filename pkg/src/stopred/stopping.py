"""Stopping sets, peeling and ML erasure decoding, and exhaustive failure counts.

A row *covers* a coordinate set when its restriction to the set has exactly
one nonzero symbol. A nonempty set is a stopping set when no row covers it.
Everything below works on supports only, so q-ary rows need no special case
except for ML decoding, which is a rank question over GF(q).
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from math import comb
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .codes import LinearCode, ParityCheckMatrix, codeword_supports, parity_check
from .errors import BudgetExceeded, EmptySet, PreconditionViolated
from .fieldcore import rank, row_reduce

COUNT_BUDGET = 10**8


def _mask(indices: Iterable[int], n: int | None = None) -> int:
    m = 0
    for i in indices:
        i = int(i)
        if i < 0 or (n is not None and i >= n):
            raise PreconditionViolated(f"index {i} out of range")
        m |= 1 << i
    return m


def _indices(mask: int) -> tuple[int, ...]:
    return tuple(i for i in range(mask.bit_length()) if mask >> i & 1)


def covers(row: Sequence[int], iota: Iterable[int]) -> bool:
    """True iff ``row`` restricted to ``iota`` has Hamming weight exactly one."""
    return sum(1 for i in set(iota) if row[i] != 0) == 1


def is_stopping_set(h: ParityCheckMatrix, s: Iterable[int]) -> bool:
    m = _mask(s, h.n)
    if m == 0:
        raise EmptySet("stopping sets are nonempty by definition")
    for r in h.matrix.row_supports():
        x = r & m
        if x and not x & (x - 1):
            return False
    return True


def first_uncovered_set(h: ParityCheckMatrix, size: int) -> tuple[int, ...] | None:
    """Colex-first ``size``-set no row covers, or None."""
    m = kernels.first_uncovered(h.row_masks, h.n, size)
    return None if m < 0 else _indices(m)


def covers_all_isets(h: ParityCheckMatrix, up_to: int) -> tuple[bool, tuple[int, ...] | None]:
    """Whether every i-set, 1 <= i <= up_to, is covered; else the first uncovered one."""
    if up_to > h.n:
        raise PreconditionViolated("up_to exceeds the code length")
    for i in range(1, up_to + 1):
        w = first_uncovered_set(h, i)
        if w is not None:
            return False, w
    return True, None


def stopping_distance(h: ParityCheckMatrix, max_size: int | None = None) -> int | None:
    """Size of the smallest nonempty stopping set; None when no stopping set exists.

    Subsets are scanned by increasing size with early exit. ``max_size`` caps
    the scan and raises BudgetExceeded when reached without an answer.
    """
    n = h.n
    cap = n if max_size is None else min(max_size, n)
    for i in range(1, cap + 1):
        if first_uncovered_set(h, i) is not None:
            return i
    if cap < n:
        raise BudgetExceeded(f"no stopping set up to size {cap}")
    return None


def stopping_set_witness(h: ParityCheckMatrix) -> tuple[int, ...] | None:
    s = stopping_distance(h)
    return None if s is None else first_uncovered_set(h, s)


@dataclass(frozen=True)
class PeelResult:
    resolved: bool
    residual: frozenset[int] = field(default_factory=frozenset)


def peel_decode(h: ParityCheckMatrix, erased: Iterable[int]) -> PeelResult:
    """Iterative erasure decoding; the residual is the largest stopping set inside ``erased``."""
    e = kernels.peel_residual(h.matrix.row_supports(), _mask(erased, h.n))
    return PeelResult(e == 0, frozenset(_indices(e)))


def ml_decodable(h: ParityCheckMatrix, erased: Iterable[int]) -> bool:
    """True iff the erased columns of ``h`` are linearly independent over GF(q)."""
    cols = sorted(set(int(i) for i in erased))
    if not cols:
        return True
    return rank(h.matrix.take_columns(cols)) == len(cols)


# -- exhaustive counting -----------------------------------------------------------


def minimal_supports(code: LinearCode) -> np.ndarray:
    """Inclusion-minimal supports of nonzero codewords."""
    sup = np.unique(codeword_supports(code))
    sup = sup[sup != 0]
    order = np.argsort(np.bitwise_count(sup), kind="stable")
    keep: list[int] = []
    for s in sup[order]:
        s = int(s)
        if not any(k & ~s == 0 for k in keep):
            keep.append(s)
    return kernels.as_masks(keep)


def _column_masks(h: ParityCheckMatrix) -> np.ndarray:
    # column dependencies depend only on the row space, so pack a basis
    red, rk, _ = row_reduce(h.matrix)
    bits = np.int64(1) << np.arange(rk, dtype=np.int64)
    return kernels.as_masks(red.data[:rk].T @ bits)


def count_undecodable(
    code: LinearCode,
    h: ParityCheckMatrix | None,
    w: int,
    decoder: str,
    budget: int = COUNT_BUDGET,
    ml_method: str = "rank",
) -> int:
    """Number of weight-w erasure patterns the chosen decoder cannot resolve.

    ``decoder`` is "iterative" (needs ``h``) or "ml". ML counting defaults to a
    GF(2) column-rank test; ``ml_method="support"`` instead checks containment
    of a minimal codeword support and works over any field.
    """
    n = code.n
    if not 0 <= w <= n:
        raise PreconditionViolated(f"weight {w} outside [0, {n}]")
    if comb(n, w) > budget:
        raise BudgetExceeded(f"C({n},{w}) patterns exceed the budget {budget}")
    if decoder == "iterative":
        if h is None:
            raise PreconditionViolated("iterative decoding needs a parity-check matrix")
        return kernels.count_peel_failures(h.row_masks, n, w)
    if decoder != "ml":
        raise PreconditionViolated(f"unknown decoder {decoder!r}")
    if ml_method == "rank" and code.q == 2:
        return kernels.count_dependent(_column_masks(h or parity_check(code)), n, w)
    return kernels.count_containing(minimal_supports(code), n, w)


@dataclass
class ErasureProfile:
    n: int
    decoder: str
    matrix_id: str
    weights: dict[int, int]

    def rows(self):
        for w in sorted(self.weights):
            total = comb(self.n, w)
            yield w, self.weights[w], total, self.weights[w] / total

    def to_csv(self) -> str:
        buf = io.StringIO()
        out = csv.writer(buf, lineterminator="\n")
        out.writerow(["w", "count", "binom", "fraction"])
        for w, c, b, f in self.rows():
            out.writerow([w, c, b, repr(f)])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, n: int, decoder: str = "", matrix_id: str = "") -> "ErasureProfile":
        rd = csv.DictReader(io.StringIO(text))
        weights = {}
        for row in rd:
            w, c = int(row["w"]), int(row["count"])
            if int(row["binom"]) != comb(n, w):
                raise ValueError("binom column does not match n")
            weights[w] = c
        return cls(n, decoder, matrix_id, weights)


def erasure_profile(
    code: LinearCode,
    h: ParityCheckMatrix | None,
    weights: Iterable[int],
    decoder: str,
    budget: int = COUNT_BUDGET,
) -> ErasureProfile:
    label = (h.label if h is not None and h.label else code.name) or "matrix"
    counts = {w: count_undecodable(code, h, w, decoder, budget) for w in weights}
    return ErasureProfile(code.n, decoder, label, counts)
