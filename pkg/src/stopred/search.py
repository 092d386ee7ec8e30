"""Searching for small parity-check matrices with full stopping distance.

``greedy_pcm_search`` keeps a selection of dual codewords and tracks which
target i-sets (by default only the (s-1)-sets) no selected row covers. Each
step tries to swap one selected row for the candidate with the best net
coverage change, accepting strict improvements only; when no row admits one,
the candidate covering the most uncovered sets is added. Coverage is scored
with packed per-candidate bitmaps, so one swap evaluation over the whole pool
is two AND-popcount passes.

``exact_stopping_redundancy`` enumerates covers of all i-sets, i < d, by
candidate projective points of the dual, and charges each cover its rank
deficit.
"""

from __future__ import annotations

import itertools
import json
import logging
import warnings
from dataclasses import dataclass, field
from math import comb

import numpy as np

from . import kernels
from .bounds import mds_lower_eq24
from .codes import LinearCode, ParityCheckMatrix, codewords, dual, parity_check
from .errors import BudgetExceeded, PreconditionViolated, RowCapExceeded, SearchExhausted
from .fieldcore import FieldMatrix, rank
from .setcover import _bits, greedy_cover
from .stopping import stopping_distance

log = logging.getLogger(__name__)

POOL_ENUM_LIMIT = 1 << 16


@dataclass(frozen=True)
class SearchConfig:
    seed: int = 0
    max_rows: int | None = None
    max_stall_iterations: int = 200
    coverage_target: tuple[int, ...] | None = None
    restarts: int = 1
    pool_size: int = 4096
    shrink: bool = True
    shrink_iterations: int = 400

    def validate(self, code: LinearCode) -> None:
        if self.restarts < 1:
            raise PreconditionViolated("restarts must be at least 1")
        if self.max_rows is not None and self.max_rows < code.r:
            raise PreconditionViolated(f"max_rows must be at least n - k = {code.r}")


@dataclass
class SearchResult:
    matrix: ParityCheckMatrix
    rows: int
    stopping_distance: int | None
    iterations: int
    seed: int
    log: list[dict] = field(default_factory=list)

    def log_jsonl(self) -> str:
        return "".join(json.dumps(e, sort_keys=True) + "\n" for e in self.log)


# -- candidate pool ---------------------------------------------------------------------


def _sorted_pool(words: np.ndarray) -> np.ndarray:
    """Nonzero rows, one per support, ordered by weight then lexicographically."""
    words = words[np.any(words != 0, axis=1)]
    weight = np.count_nonzero(words, axis=1)
    keys = tuple(words[:, c] for c in range(words.shape[1] - 1, -1, -1)) + (weight,)
    words = words[np.lexsort(keys)]
    bits = np.int64(1) << np.arange(words.shape[1], dtype=np.int64)
    masks = (words != 0).astype(np.int64) @ bits
    _, first = np.unique(masks, return_index=True)
    return words[np.sort(first)]


def candidate_pool(code: LinearCode, size: int = 4096, rng: np.random.Generator | None = None) -> np.ndarray:
    """All dual codewords when there are at most max(size, 2^16), else a random sample."""
    dc = dual(code)
    if dc.q**dc.k <= max(size, POOL_ENUM_LIMIT):
        return _sorted_pool(codewords(dc))
    rng = rng or np.random.default_rng(0)
    info = rng.integers(0, dc.q, size=(size, dc.k))
    return _sorted_pool((info @ dc.generator.data) % dc.q)


def _targets(n: int, sizes) -> np.ndarray:
    return np.concatenate([kernels.unrank_masks(n, i) for i in sorted(set(sizes))])


# -- greedy search ---------------------------------------------------------------------


class _Cover:
    """Coverage bookkeeping for one selection."""

    def __init__(self, bits: np.ndarray, n_targets: int):
        self.bits = bits
        self.t = n_targets
        self.cnt = np.zeros(n_targets, dtype=np.int32)
        self.sel: list[int] = []

    def _unpack(self, c: int) -> np.ndarray:
        return np.unpackbits(self.bits[c].view(np.uint8), bitorder="little")[: self.t]

    def _pack(self, flags: np.ndarray) -> np.ndarray:
        out = np.zeros(self.bits.shape[1] * 8, dtype=np.uint8)
        raw = np.packbits(flags, bitorder="little")
        out[: raw.size] = raw
        return out.view(np.int64)

    def add(self, c: int) -> None:
        self.sel.append(c)
        self.cnt += self._unpack(c)

    def remove(self, pos: int) -> int:
        c = self.sel.pop(pos)
        self.cnt -= self._unpack(c)
        return c

    def uncovered(self) -> int:
        return int(np.count_nonzero(self.cnt == 0))

    def packed_uncovered(self) -> np.ndarray:
        return self._pack(self.cnt == 0)

    def packed_once(self) -> np.ndarray:
        return self._pack(self.cnt == 1)


def _best_swap(cov: _Cover, pos: int, gain_u: np.ndarray, once: np.ndarray, in_sel: np.ndarray):
    a = cov.sel[pos]
    crit = cov.bits[a] & once
    ncrit = kernels.popcount(crit)
    score = gain_u - ncrit + kernels.and_popcounts(cov.bits, crit)
    score[in_sel] = np.iinfo(np.int64).min
    b = int(np.argmax(score))
    return b, int(score[b])


def _local_search(cov: _Cover, rng, cfg: SearchConfig, cap: int, grow: bool, trail: list, it0: int) -> int:
    """Swap moves, plus additions when ``grow``; returns the iteration counter."""
    it = it0
    n_cand = cov.bits.shape[0]
    stall = 0
    while cov.uncovered():
        in_sel = np.zeros(n_cand, dtype=bool)
        in_sel[cov.sel] = True
        gain_u = kernels.and_popcounts(cov.bits, cov.packed_uncovered())
        once = cov.packed_once()
        improved = False
        for pos in rng.permutation(len(cov.sel)):
            it += 1
            b, score = _best_swap(cov, int(pos), gain_u, once, in_sel)
            if score > 0:
                cov.remove(int(pos))
                cov.add(b)
                improved = True
                stall = 0
                break
            stall += 1
            if stall >= cfg.max_stall_iterations:
                break
        if improved:
            trail.append({"iteration": it, "rows": len(cov.sel), "uncovered": cov.uncovered()})
            continue
        if not grow:
            return it
        if len(cov.sel) >= cap:
            raise RowCapExceeded(f"row cap {cap} reached with {cov.uncovered()} sets uncovered")
        gain_u[in_sel] = -1
        cov.add(int(np.argmax(gain_u)))
        stall = 0
        trail.append({"iteration": it, "rows": len(cov.sel), "uncovered": cov.uncovered()})
    return it


def _shrink(cov: _Cover, rng, cfg: SearchConfig, trail: list, it: int) -> int:
    """Drop the row with the fewest sole-covered sets and try to repair by swaps."""
    while len(cov.sel) > 1:
        saved = list(cov.sel)
        once = cov.packed_once()
        crit = [kernels.popcount(cov.bits[c] & once) for c in cov.sel]
        cov.remove(int(np.argmin(crit)))
        budget = SearchConfig(max_stall_iterations=cfg.shrink_iterations)
        it = _local_search(cov, rng, budget, len(cov.sel), False, trail, it)
        if cov.uncovered():
            while cov.sel:
                cov.remove(0)
            for c in saved:
                cov.add(c)
            return it
        trail.append({"iteration": it, "rows": len(cov.sel), "uncovered": 0})
    return it


def _complete_rank(code: LinearCode, rows: np.ndarray) -> np.ndarray:
    """Append basis rows of the dual until the rank is n - k."""
    q = code.q
    out = rows
    for extra in parity_check(code).matrix.data:
        if rank(FieldMatrix.from_rows(out, q, cols=code.n)) == code.r:
            break
        trial = np.vstack([out, extra[None, :]])
        if rank(FieldMatrix.from_rows(trial, q, cols=code.n)) > rank(FieldMatrix.from_rows(out, q, cols=code.n)):
            out = trial
    return out


def _prune(code: LinearCode, words: np.ndarray, cov: _Cover) -> None:
    """Remove rows that cover nothing alone while the rank stays n - k."""
    pos = len(cov.sel) - 1
    while pos >= 0:
        c = cov.sel[pos]
        once = cov.packed_once()
        alone = kernels.popcount(cov.bits[c] & once)
        if alone == 0:
            rest = [x for i, x in enumerate(cov.sel) if i != pos]
            if rank(FieldMatrix.from_rows(words[rest], code.q, cols=code.n)) == code.r:
                cov.remove(pos)
        pos -= 1


def _single_run(code, target_s, cfg, words, masks, seed) -> SearchResult:
    n = code.n
    rng = np.random.default_rng(seed)
    cap = cfg.max_rows if cfg.max_rows is not None else max(4 * code.r, code.r + 64)
    sizes = set(cfg.coverage_target or (target_s - 1,))
    trail: list[dict] = []
    it = 0
    picks = [int(x) for x in rng.choice(len(words), size=min(code.r, len(words)), replace=False)]
    while True:
        targets = _targets(n, sizes)
        bits = kernels.cover_bits(masks, targets)
        cov = _Cover(bits, len(targets))
        for c in picks:
            cov.add(c)
        it = _local_search(cov, rng, cfg, cap, True, trail, it)
        if cfg.shrink:
            it = _shrink(cov, rng, cfg, trail, it)
        _prune(code, words, cov)
        picks = list(cov.sel)
        mat = _complete_rank(code, words[picks])
        h = ParityCheckMatrix(FieldMatrix.from_rows(mat, code.q, cols=n), code, f"greedy-seed{seed}")
        if h.rows > cap:
            raise RowCapExceeded(f"row cap {cap} exceeded after rank completion")
        missing = [i for i in range(1, target_s) if i not in sizes and kernels.first_uncovered(h.row_masks, n, i) >= 0]
        if not missing:
            break
        log.info("final check found uncovered %s-sets; adding them to the objective", missing)
        sizes.update(missing)
    s = stopping_distance(h)
    if s is not None and s < target_s:
        raise SearchExhausted(f"verified stopping distance {s} is below the target {target_s}")
    return SearchResult(h, h.rows, s, it, seed, trail)


def greedy_pcm_search(code: LinearCode, target_s: int, cfg: SearchConfig | None = None) -> SearchResult:
    """Smallest verified matrix over ``cfg.restarts`` seeded runs."""
    cfg = cfg or SearchConfig()
    cfg.validate(code)
    if not 1 <= target_s <= code.d:
        raise PreconditionViolated(f"target stopping distance must lie in [1, d = {code.d}]")
    words = candidate_pool(code, cfg.pool_size, np.random.default_rng(cfg.seed))
    bitw = np.int64(1) << np.arange(code.n, dtype=np.int64)
    masks = (words != 0).astype(np.int64) @ bitw
    best, err = None, None
    for i in range(cfg.restarts):
        seed = cfg.seed + i
        try:
            res = _single_run(code, target_s, cfg, words, masks, seed)
        except RowCapExceeded as exc:
            err = exc
            continue
        log.info("seed %d: %d rows", seed, res.rows)
        if best is None or res.rows < best.rows:
            best = res
    if best is None:
        raise err
    return best


# -- explicit constructions -------------------------------------------------------------


def thm2_construction(code: LinearCode) -> ParityCheckMatrix:
    """Sums of every odd number i <= d - 1 of basis rows (binary codes)."""
    if code.q != 2:
        raise PreconditionViolated("needs a binary code")
    base = parity_check(code).matrix.data
    r, d = base.shape[0], code.d
    rows = [
        np.bitwise_xor.reduce(base[list(c)], axis=0)
        for i in range(1, d, 2)
        for c in itertools.combinations(range(r), i)
    ]
    return ParityCheckMatrix(FieldMatrix.from_rows(rows, 2, cols=code.n), code, "thm2")


def thm6_construction(code: LinearCode, budget: int = 10**6) -> ParityCheckMatrix:
    """Combinations of i <= d - 1 basis rows with nonzero coefficients, the first fixed at 1."""
    base = parity_check(code).matrix.data
    r, d, q = base.shape[0], code.d, code.q
    total = sum(comb(r, i) * (q - 1) ** (i - 1) for i in range(1, d))
    if total > budget:
        raise BudgetExceeded(f"{total} rows exceed the budget {budget}")
    rows = []
    for i in range(1, d):
        for c in itertools.combinations(range(r), i):
            for coeffs in itertools.product(range(1, q), repeat=i - 1):
                vec = np.asarray((1,) + coeffs, dtype=np.int64)
                rows.append((vec @ base[list(c)]) % q)
    return ParityCheckMatrix(FieldMatrix.from_rows(rows, q, cols=code.n), code, "thm6")


# -- exact stopping redundancy ------------------------------------------------------------


def _projective(words: np.ndarray, q: int) -> np.ndarray:
    """One representative per line: the first nonzero entry scaled to 1."""
    out = {}
    for w in words:
        nz = np.flatnonzero(w)
        if nz.size == 0:
            continue
        inv = pow(int(w[nz[0]]), q - 2, q)
        key = tuple(int(x) for x in (w * inv) % q)
        out[key] = True
    return np.array(sorted(out), dtype=np.int64)


def exact_stopping_redundancy(code: LinearCode, cap: int = 2_000_000, enum_limit: int = 10**4) -> int:
    """Minimum rows of a parity-check matrix with stopping distance d."""
    dc = dual(code)
    if dc.q**dc.k > enum_limit:
        raise BudgetExceeded(f"dual has {dc.q}^{dc.k} codewords, above {enum_limit}")
    n, d, q = code.n, code.d, code.q
    words = _projective(codewords(dc), q)
    bitw = np.int64(1) << np.arange(n, dtype=np.int64)
    masks = (words != 0).astype(np.int64) @ bitw
    targets = _targets(n, range(1, d))
    inter = masks[:, None] & targets[None, :]
    rel = (inter != 0) & ((inter & (inter - 1)) == 0)
    cov = [int.from_bytes(np.packbits(row, bitorder="little").tobytes(), "little") for row in rel]
    universe = (1 << len(targets)) - 1
    tc = [0] * len(targets)
    for c, m in enumerate(cov):
        for t in _bits(m):
            tc[t] |= 1 << c

    def cost(sel: list[int]) -> int:
        rk = rank(FieldMatrix.from_rows(words[sel], q, cols=n)) if sel else 0
        return len(sel) + code.r - rk

    start = greedy_cover(cov, universe)
    if start is None:
        raise PreconditionViolated("the dual cannot cover every small set")
    best = [cost(start)]
    floor = code.r
    nodes = [0]

    def dfs(left: int, avail: int, chosen: list[int]) -> None:
        nodes[0] += 1
        if nodes[0] > cap:
            raise SearchExhausted(f"exact search exceeded {cap} nodes")
        if best[0] == floor:
            return
        if not left:
            best[0] = min(best[0], cost(chosen))
            return
        used, pack = 0, 0
        for t in _bits(left):
            m = tc[t] & avail
            if not m & used:
                used |= m
                pack += 1
        if len(chosen) + pack >= best[0]:
            return
        pick = min(_bits(left), key=lambda t: (tc[t] & avail).bit_count())
        for c in _bits(tc[pick] & avail):
            dfs(left & ~cov[c], avail & ~(1 << c), chosen + [c])
            avail &= ~(1 << c)

    dfs(universe, (1 << len(cov)) - 1, [])
    return best[0]


def conjecture12_probe(codes: list[LinearCode]) -> list[dict]:
    """Compare exact stopping redundancy with the single-exclusion number for MDS codes.

    A mismatch is reported through ``warnings.warn`` and flagged in the result.
    """
    from .designs import exact_single_exclusion_search

    out = []
    for code in codes:
        if not code.mds:
            raise PreconditionViolated(f"{code!r} is not MDS")
        rho = exact_stopping_redundancy(code)
        gamma = exact_single_exclusion_search(code.n, code.d - 2) if code.d >= 3 else code.r
        row = {"code": code.name, "n": code.n, "d": code.d, "rho": rho, "gamma": gamma, "agree": rho == gamma}
        if not row["agree"]:
            warnings.warn(f"COUNTEREXAMPLE: rho={rho} but Gamma={gamma} for {code!r}", stacklevel=2)
        if code.d >= 3:
            row["eq24_lower"] = mds_lower_eq24(code.n, code.d)
        out.append(row)
    return out
