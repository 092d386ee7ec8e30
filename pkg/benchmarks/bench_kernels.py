"""Time the numba and numpy kernel backends on the same workloads.

    python benchmarks/bench_kernels.py --repeat 3 --weight 9

Every workload is run on both backends and the results are compared, so the
script doubles as a coarse equivalence check. The first numba call includes
JIT compilation (or a cache load); it is timed separately as "warmup".
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from stopred import kernels
from stopred.codes import golay24, parity_check
from stopred.stopping import _column_masks


def _workloads(weight: int):
    code = golay24()
    h = parity_check(code)
    rows = h.row_masks
    cols = _column_masks(h)
    cands = kernels.unrank_masks(24, 8)[:2048]
    sets = kernels.unrank_masks(24, 4)
    return {
        f"count_dependent golay w={weight}": lambda: kernels.count_dependent(cols, 24, weight),
        f"count_peel_failures golay w={weight}": lambda: kernels.count_peel_failures(rows, 24, weight),
        "first_uncovered golay w=5 (full scan)": lambda: kernels.first_uncovered(rows, 24, 5),
        "cover_bits 2048 x C(24,4)": lambda: int(kernels.popcount(kernels.cover_bits(cands, sets))),
    }


def _time(fn, repeat: int) -> tuple[float, object]:
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--weight", type=int, default=8, help="erasure weight for the counting kernels")
    a = ap.parse_args(argv)

    backends = [b for b in ("numba", "numpy") if b in kernels._BACKENDS]
    work = _workloads(a.weight)
    prev = kernels.backend()
    results: dict[str, dict[str, tuple[float, object]]] = {name: {} for name in work}
    try:
        for b in backends:
            kernels.set_backend(b)
            if b == "numba":
                t0 = time.perf_counter()
                for fn in work.values():
                    fn()
                print(f"numba warmup (compile or cache load): {time.perf_counter() - t0:.2f}s")
            for name, fn in work.items():
                results[name][b] = _time(fn, a.repeat)
    finally:
        kernels.set_backend(prev)

    print(f"{'workload':42s} " + " ".join(f"{b:>10s}" for b in backends) + "   speedup  match")
    ok = True
    for name, per in results.items():
        times = [per[b][0] for b in backends]
        vals = [per[b][1] for b in backends]
        same = all(np.array_equal(v, vals[0]) for v in vals)
        ok &= same
        speed = f"{times[1] / times[0]:8.1f}x" if len(times) == 2 and times[0] > 0 else "       -"
        print(f"{name:42s} " + " ".join(f"{t:9.3f}s" for t in times) + f"  {speed}  {same}")
    return 0 if ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
