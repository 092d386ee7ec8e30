"""Exact minimum set cover by depth-first branch and bound on Python-int bitsets.

Candidates and targets are indexed 0..; ``cov[c]`` is the bitmask of targets
candidate ``c`` covers. The search branches on the uncovered target with the
fewest remaining candidates, excludes earlier siblings in later branches, and
prunes with the larger of a disjoint-target packing bound and a counting bound.
Everything is sequential and deterministic, so the optimum returned for a
given input is always the same one.
"""

from __future__ import annotations

from typing import Sequence

from .errors import SearchExhausted

NODE_BUDGET = 20_000_000


def _bits(x: int):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def greedy_cover(cov: Sequence[int], universe: int) -> list[int] | None:
    """Largest-gain greedy, ties to the lowest index; None if infeasible."""
    left, out = universe, []
    while left:
        best, gain = -1, 0
        for c, m in enumerate(cov):
            g = (m & left).bit_count()
            if g > gain:
                best, gain = c, g
        if best < 0:
            return None
        out.append(best)
        left &= ~cov[best]
    return sorted(out)


class _Done(Exception):
    pass


class _Solver:
    def __init__(self, cov, universe, budget, symmetric_root=False):
        self.cov = list(cov)
        self.symmetric_root = symmetric_root
        self.budget = budget
        self.nodes = 0
        n_t = universe.bit_length()
        tc = [0] * n_t
        for c, m in enumerate(self.cov):
            for t in _bits(m & universe):
                tc[t] |= 1 << c
        self.tc = tc

    def bound(self, left: int, avail: int) -> int:
        cmax = max(((self.cov[c] & left).bit_count() for c in _bits(avail)), default=0)
        if cmax == 0:
            return 1 << 30
        count = -(-left.bit_count() // cmax)
        used, pack = 0, 0
        for t in _bits(left):
            m = self.tc[t] & avail
            if not m & used:
                used |= m
                pack += 1
        return max(count, pack)

    def run(self, universe: int, upper: list[int], lower: int):
        self.best, self.best_len, self.lower = upper, len(upper), lower
        if self.best_len > lower:
            try:
                self._dfs(universe, (1 << len(self.cov)) - 1, [])
            except _Done:
                pass
        return self.best

    def _dfs(self, left: int, avail: int, chosen: list[int]):
        self.nodes += 1
        if self.nodes > self.budget:
            raise SearchExhausted(f"set cover search exceeded {self.budget} nodes")
        if not left:
            if len(chosen) < self.best_len:
                self.best, self.best_len = sorted(chosen), len(chosen)
                if self.best_len <= self.lower:
                    raise _Done
            return
        if len(chosen) + self.bound(left, avail) >= self.best_len:
            return
        pick, fewest = -1, 1 << 30
        for t in _bits(left):
            k = (self.tc[t] & avail).bit_count()
            if k < fewest:
                pick, fewest = t, k
                if k <= 1:
                    break
        if fewest == 0:
            return
        opts = list(_bits(self.tc[pick] & avail))
        opts.sort(key=lambda c: -(self.cov[c] & left).bit_count())
        if self.symmetric_root and not chosen:
            opts = opts[:1]
        for c in opts:
            self._dfs(left & ~self.cov[c], avail & ~(1 << c), chosen + [c])
            avail &= ~(1 << c)
            if len(chosen) + 1 >= self.best_len:
                return


def min_cover(
    cov: Sequence[int],
    universe: int,
    budget: int = NODE_BUDGET,
    symmetric_root: bool = False,
    lower: int = 0,
) -> list[int] | None:
    """Sorted candidate indices of a minimum cover of ``universe``; None if none exists.

    ``symmetric_root`` keeps only the first branch at the root. That is sound
    when the stabilizer of every target acts transitively on the candidates
    covering it, as for Turan and single-exclusion instances under the full
    symmetric group. ``lower`` is a known lower bound on the optimum; the
    search stops as soon as a cover of that size is found.
    """
    start = greedy_cover(cov, universe)
    if start is None:
        return None
    return _Solver(cov, universe, budget, symmetric_root).run(universe, start, lower)
