"""Turan systems, covering designs and single-exclusion systems.

Ground sets are 0-based. A Turan (v, k, t)-system is a family of t-subsets of
[v] such that every k-subset contains a member. A single-exclusion (v, r)-system
is a family of r-subsets such that every i-subset, 1 <= i <= r + 1, has a block
missing exactly one of its points. The second condition is a coverage test on
complements: |iota \\ beta| = 1 iff the complement of beta meets iota once, so
the stopping-set kernels verify it directly.

Text format::

    v r count
    b0 b1 ...      (one sorted block per line)
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Iterable

import numpy as np

from . import kernels
from .codes import LinearCode, ParityCheckMatrix, codeword_with_support, dual
from .errors import BudgetExceeded, PreconditionViolated
from .fieldcore import FieldMatrix
from .setcover import min_cover

VERIFY_BUDGET = 10**8


def _need(cond: bool, msg: str) -> None:
    if not cond:
        raise PreconditionViolated(msg)


def _indices(mask: int) -> tuple[int, ...]:
    return tuple(i for i in range(mask.bit_length()) if mask >> i & 1)


@dataclass(frozen=True)
class BlockSystem:
    v: int
    r: int
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        norm = set()
        for b in self.blocks:
            t = tuple(sorted(int(x) for x in b))
            if len(set(t)) != self.r or len(t) != self.r:
                raise PreconditionViolated(f"block {b} does not have {self.r} distinct points")
            if t and not (0 <= t[0] and t[-1] < self.v):
                raise PreconditionViolated(f"block {b} leaves the ground set [0, {self.v})")
            norm.add(t)
        object.__setattr__(self, "blocks", tuple(sorted(norm)))

    def __len__(self) -> int:
        return len(self.blocks)

    @classmethod
    def from_masks(cls, v: int, r: int, masks: Iterable[int]) -> "BlockSystem":
        return cls(v, r, tuple(_indices(int(m)) for m in masks))

    def masks(self) -> np.ndarray:
        return kernels.as_masks([sum(1 << i for i in b) for b in self.blocks])

    def complement_masks(self) -> np.ndarray:
        full = (1 << self.v) - 1
        return kernels.as_masks([full ^ sum(1 << i for i in b) for b in self.blocks])

    def union(self, other: "BlockSystem") -> "BlockSystem":
        _need(self.v == other.v and self.r == other.r, "systems differ in v or r")
        return BlockSystem(self.v, self.r, self.blocks + other.blocks)

    def to_text(self) -> str:
        lines = [f"{self.v} {self.r} {len(self.blocks)}"]
        lines += [" ".join(map(str, b)) for b in self.blocks]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "BlockSystem":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise ValueError("empty block-system text")
        v, r, count = (int(x) for x in lines[0].split())
        body = [tuple(int(x) for x in ln.split()) for ln in lines[1:]]
        if len(body) != count:
            raise ValueError(f"header promises {count} blocks, found {len(body)}")
        return cls(v, r, tuple(body))


@dataclass(frozen=True)
class PartitionScheme:
    """Column partition N_0..N_{l-1} and, optionally, row partition M_0..M_{h-1}."""

    v: int
    l: int
    parts: tuple[tuple[int, ...], ...]
    rows: tuple[tuple[int, ...], ...] | None = None

    def __post_init__(self):
        _need(len(self.parts) == self.l, "need exactly l parts")
        flat = sorted(x for p in self.parts for x in p)
        _need(flat == list(range(self.v)), "parts must partition the ground set")
        sizes = [len(p) for p in self.parts]
        _need(max(sizes) - min(sizes) <= 1, "part sizes must differ by at most one")
        if self.rows is not None:
            flat = sorted(x for p in self.rows for x in p)
            _need(flat == list(range(self.v)), "rows must partition the ground set")
            for p in self.parts:
                _need(all(set(p) & set(m) for m in self.rows), "every part must meet every row")

    @classmethod
    def default(cls, v: int, l: int, with_rows: bool = False) -> "PartitionScheme":
        """N_i = {k : k = i mod l}; row m holds k with k // l = m, extras in the last row."""
        _need(1 <= l <= v, f"need 1 <= l <= v, got l={l}")
        parts = tuple(tuple(range(i, v, l)) for i in range(l))
        rows = None
        if with_rows:
            h = v // l
            rows = tuple(tuple(k for k in range(v) if min(k // l, h - 1) == m) for m in range(h))
        return cls(v, l, parts, rows)

    def part_index(self) -> np.ndarray:
        out = np.empty(self.v, dtype=np.int64)
        for i, p in enumerate(self.parts):
            out[list(p)] = i
        return out

    def row_index(self) -> np.ndarray:
        if self.rows is None:
            raise PreconditionViolated("scheme has no row partition")
        out = np.empty(self.v, dtype=np.int64)
        for i, p in enumerate(self.rows):
            out[list(p)] = i
        return out


# -- verification ---------------------------------------------------------------


def verify_turan(s: BlockSystem, k: int, budget: int = VERIFY_BUDGET) -> tuple[bool, tuple[int, ...] | None]:
    """Whether every k-subset of [v] contains a block; else the colex-first one that does not."""
    _need(s.r <= k <= s.v, f"need r <= k <= v, got r={s.r}, k={k}, v={s.v}")
    if comb(s.v, k) > budget:
        raise BudgetExceeded(f"C({s.v},{k}) exceeds the verification budget")
    m = kernels.first_uncontaining(s.masks(), s.v, k)
    return (True, None) if m < 0 else (False, _indices(m))


def verify_single_exclusion(s: BlockSystem, budget: int = VERIFY_BUDGET) -> tuple[bool, tuple[int, ...] | None]:
    """Whether every i-set, i <= r + 1, has a block missing exactly one of its points."""
    _need(s.r <= s.v - 1, "need r <= v - 1")
    if sum(comb(s.v, i) for i in range(1, s.r + 2)) > budget:
        raise BudgetExceeded("single-exclusion check exceeds the verification budget")
    comp = s.complement_masks()
    for i in range(1, s.r + 2):
        m = kernels.first_uncovered(comp, s.v, i)
        if m >= 0:
            return False, _indices(m)
    return True, None


# -- closed forms -----------------------------------------------------------------


def mantel_t_n32(n: int) -> int:
    _need(n >= 2, "needs n >= 2")
    return (n // 2) * ((n + 1) // 2 - 1)


def turan_t_n21(n: int) -> int:
    _need(n >= 3, "needs n >= 3")
    return n - 1


def ringel_t_n43(n: int) -> int:
    """Exact T(n, 4, 3) for n <= 13 and an upper bound beyond."""
    _need(n >= 4, "needs n >= 4")
    return (n // 3) * ((n - 1) // 3) * (2 * ((n - 2) // 3) + 1)


def covering_to_turan(v: int, k: int, t: int) -> tuple[int, int, int]:
    """C(v, k, t) = T(v, v - t, v - k): translate the parameter triple."""
    _need(0 <= t <= k <= v, "needs t <= k <= v")
    return v, v - t, v - k


# -- constructions ------------------------------------------------------------------


def _all_subsets(n: int, r: int) -> tuple[np.ndarray, np.ndarray]:
    masks = kernels.unrank_masks(n, r)
    bits = (masks[:, None] >> np.arange(n, dtype=np.int64)) & 1
    return masks, bits


def _pick(n: int, r: int, masks: np.ndarray, keep: np.ndarray) -> BlockSystem:
    return BlockSystem.from_masks(n, r, masks[keep])


def lemma14_construction(n: int) -> BlockSystem:
    """[L]^2 together with [R]^2 for L = {0, 1, 2} and R the rest."""
    _need(n >= 4, "needs n >= 4")
    blocks = list(itertools.combinations(range(3), 2)) + list(itertools.combinations(range(3, n), 2))
    return BlockSystem(n, 2, tuple(blocks))


def _check_crl(n: int, r: int, l: int, j: int) -> None:
    _need(1 <= r <= n - 1, f"need 1 <= r <= n - 1, got r={r}")
    _need(1 <= l <= n, f"need 1 <= l <= n, got l={l}")
    _need(0 <= j < l, f"need 0 <= j < l, got j={j}")


def _weights(bits: np.ndarray, scheme: PartitionScheme) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    idx = scheme.part_index()
    w = bits @ idx
    onehot = np.zeros((scheme.v, scheme.l), dtype=np.int64)
    onehot[np.arange(scheme.v), idx] = 1
    hits = (bits @ onehot) > 0
    return w, hits.sum(axis=1), hits


def construction1(n: int, r: int, l: int, j: int, scheme: PartitionScheme | None = None) -> BlockSystem:
    """r-sets missing some part, plus r-sets of weight j mod l."""
    _check_crl(n, r, l, j)
    scheme = scheme or PartitionScheme.default(n, l)
    masks, bits = _all_subsets(n, r)
    w, s, _ = _weights(bits, scheme)
    return _pick(n, r, masks, (s < l) | (w % l == j))


def construction2(n: int, r: int, l: int, j: int, scheme: PartitionScheme | None = None) -> BlockSystem:
    """r-sets B with (w(B) + j) mod l <= l - s(B), s(B) the number of parts B meets."""
    _check_crl(n, r, l, j)
    scheme = scheme or PartitionScheme.default(n, l)
    masks, bits = _all_subsets(n, r)
    w, s, _ = _weights(bits, scheme)
    return _pick(n, r, masks, (w + j) % l <= l - s)


def row_family(n: int, r: int, l: int, t: int, scheme: PartitionScheme | None = None) -> BlockSystem:
    """r-sets whose row weight sum_m m|B & M_m| is t modulo the number of rows."""
    scheme = scheme or PartitionScheme.default(n, l, with_rows=True)
    h = len(scheme.rows)
    _need(0 <= t < h, f"need 0 <= t < {h}, got t={t}")
    masks, bits = _all_subsets(n, r)
    return _pick(n, r, masks, (bits @ scheme.row_index()) % h == t)


def construction3(n: int, r: int, l: int, j: int, t: int, scheme: PartitionScheme | None = None) -> BlockSystem:
    """The construction-2 family united with a row-residue family."""
    _check_crl(n, r, l, j)
    _need(l >= 2, "needs l >= 2")
    scheme = scheme or PartitionScheme.default(n, l, with_rows=True)
    return construction2(n, r, l, j, scheme).union(row_family(n, r, l, t, scheme))


def construction2_sum_identity(n: int, r: int, l: int) -> int:
    """C(n, r) + l C(n - floor(n/l), r): the closed-form total over j."""
    return comb(n, r) + l * comb(n - n // l, r)


def construction2_sum_general(n: int, r: int, scheme: PartitionScheme) -> int:
    """Exact total over j for any partition: C(n, r) + sum_k C(n - |N_k|, r)."""
    return comb(n, r) + sum(comb(n - len(p), r) for p in scheme.parts)


def best_construction(method: str, n: int, r: int, l: int) -> tuple[BlockSystem, dict]:
    """Smallest family over all j (and t) for "c1", "c2" or "c3"; ties go to the smallest index."""
    if method == "c1":
        opts = ((construction1(n, r, l, j), {"j": j}) for j in range(l))
    elif method == "c2":
        opts = ((construction2(n, r, l, j), {"j": j}) for j in range(l))
    elif method == "c3":
        opts = (
            (construction3(n, r, l, j, t), {"j": j, "t": t})
            for j in range(l)
            for t in range(n // l)
        )
    else:
        raise PreconditionViolated(f"unknown construction {method!r}")
    return min(opts, key=lambda p: len(p[0]))


def lemma35_residues(l: int, k: int) -> frozenset[int]:
    """Residues mod l of the element sums of all k-subsets of {0, .., l-1}."""
    _need(l >= 2 and 1 <= k <= l - 1, "needs l >= 2 and 1 <= k <= l - 1")
    return frozenset(sum(c) % l for c in itertools.combinations(range(l), k))


def eq39_size(n: int, d: int) -> int:
    return sum(comb(d - 2, d - 2 - m) * comb(n - d + 2, m) for m in range(d - 2))


def theorem20_patch(n: int, d: int) -> BlockSystem:
    """All (d-2)-sets meeting L = {0, .., d-3}."""
    _need(4 <= d <= n, "needs 4 <= d <= n")
    low = (1 << (d - 2)) - 1
    masks = kernels.unrank_masks(n, d - 2)
    return BlockSystem.from_masks(n, d - 2, masks[(masks & low) != 0])


def theorem27_k2_construction(n: int) -> BlockSystem:
    """Single-exclusion (n, n-3)-system as complements of triples in 3-point bins.

    Point (x, i), x in 1..t+1, i in 0..2, is flattened to 3(x-1) + i.
    """
    _need(n >= 6, "needs n >= 6")
    t, extra = divmod(n, 3)

    def pt(x, i):
        return 3 * (x - 1) + i

    def exists(x, i):
        return x <= t or (x == t + 1 and i < extra)

    triples = []
    for x in range(1, t + 1):
        triples.append((pt(x, 0), pt(x, 1), pt(x, 2)))
    for x in range(1, t + 2):
        for y in range(x + 1, t + 2):
            for i in range(3):
                i1 = (i + 1) % 3
                for tri in (((x, i), (y, i), (y, i1)), ((x, i), (x, i1), (y, i))):
                    if all(exists(*p) for p in tri):
                        triples.append(tuple(pt(*p) for p in tri))
    if extra > 0:
        for x in range(1, t + 1):
            triples.append((pt(x, 0), pt(x, 2), pt(t + 1, 0)))
    full = set(range(n))
    return BlockSystem(n, n - 3, tuple(tuple(full - set(tr)) for tr in triples))


# -- exact search --------------------------------------------------------------------


def _packed(rel: np.ndarray) -> list[int]:
    """Rows of a boolean matrix as little-endian Python ints."""
    packed = np.packbits(rel, axis=1, bitorder="little")
    return [int.from_bytes(row.tobytes(), "little") for row in packed]


def _solve(v: int, r: int, cands: np.ndarray, rel: np.ndarray, lower: int) -> BlockSystem:
    universe = (1 << rel.shape[1]) - 1
    sol = min_cover(_packed(rel), universe, symmetric_root=True, lower=lower)
    if sol is None:
        raise PreconditionViolated("no system exists for these parameters")
    return BlockSystem.from_masks(v, r, cands[sol])


@lru_cache(maxsize=None)
def exact_turan_system(v: int, k: int, t: int) -> BlockSystem:
    """A minimum Turan (v, k, t)-system.

    Pruning uses the counting bound C(v,t)/C(k,t) inside the search, and the
    point-deletion bound T(v,k,t) >= v T(v-1,k,t) / (v-t) as a stopping rule.
    """
    _need(1 <= t <= k <= v, "needs 1 <= t <= k <= v")
    lower = -(-comb(v, t) // comb(k, t))
    if k < v:
        prev = len(exact_turan_system(v - 1, k, t))
        lower = max(lower, -(-v * prev // (v - t)))
    cands = kernels.unrank_masks(v, t)
    targets = kernels.unrank_masks(v, k)
    rel = (cands[:, None] & ~targets[None, :]) == 0
    return _solve(v, t, cands, rel, lower)


def exact_turan_search(v: int, k: int, t: int) -> int:
    return len(exact_turan_system(v, k, t))


@lru_cache(maxsize=None)
def exact_single_exclusion_system(v: int, r: int) -> BlockSystem:
    """A minimum single-exclusion (v, r)-system; every such system is Turan (v, r+1, r)."""
    _need(1 <= r <= v - 1, "needs 1 <= r <= v - 1")
    lower = exact_turan_search(v, r + 1, r)
    cands = kernels.unrank_masks(v, r)
    targets = np.concatenate([kernels.unrank_masks(v, i) for i in range(1, r + 2)])
    left = targets[None, :] & ~cands[:, None]
    rel = (left != 0) & ((left & (left - 1)) == 0)
    return _solve(v, r, cands, rel, lower)


def exact_single_exclusion_search(v: int, r: int) -> int:
    return len(exact_single_exclusion_system(v, r))


def exact_covering_number(v: int, k: int, t: int) -> int:
    """Minimum number of k-subsets of [v] covering every t-subset."""
    _need(1 <= t <= k <= v, "needs 1 <= t <= k <= v")
    cands = kernels.unrank_masks(v, k)
    targets = kernels.unrank_masks(v, t)
    rel = (targets[None, :] & ~cands[:, None]) == 0
    return len(_solve(v, k, cands, rel, -(-comb(v, t) // comb(k, t))))


# -- bridge to parity-check matrices --------------------------------------------------


def se_system_to_pcm(s: BlockSystem, code: LinearCode, check: bool = True) -> ParityCheckMatrix:
    """One dual codeword per block, supported on the block's complement."""
    _need(code.mds, "needs an MDS code")
    _need(code.n == s.v and code.d - 2 == s.r, "needs n = v and d - 2 = r")
    if check:
        ok, wit = verify_single_exclusion(s)
        _need(ok, f"not a single-exclusion system; uncovered set {wit}")
    dc = dual(code)
    full = set(range(s.v))
    rows = [codeword_with_support(dc, sorted(full - set(b))) for b in s.blocks]
    mat = FieldMatrix.from_rows(rows, code.q, cols=code.n)
    return ParityCheckMatrix(mat, code, "se-system")
