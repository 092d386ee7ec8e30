"""Command-line front end.

Exit status: 0 on success, 1 when an input is outside an operation's domain
(including usage errors), 2 when a configured budget or cap is exhausted.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from . import bounds, designs
from .codes import LinearCode, ParityCheckMatrix, code_from_name, parity_check, validate_pcm, weight_enumerator, dual, same_codewords
from .errors import BudgetExceeded, PreconditionViolated
from .fieldcore import FieldMatrix, null_space
from .search import SearchConfig, greedy_pcm_search
from .stopping import COUNT_BUDGET, erasure_profile, first_uncovered_set, stopping_distance


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _write(text: str, path: str | None = None) -> None:
    if path:
        Path(path).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)


def _weights(spec: str) -> list[int]:
    a, sep, b = spec.partition("..")
    if not sep:
        return [int(a)]
    lo, hi = int(a), int(b)
    if hi < lo:
        raise PreconditionViolated(f"empty weight range {spec}")
    return list(range(lo, hi + 1))


def _table(rows: list[dict], cols: list[str]) -> str:
    cells = [[str(r.get(c, "")) for c in cols] for r in rows]
    width = [max([len(c)] + [len(x[i]) for x in cells]) for i, c in enumerate(cols)]
    fmt = "  ".join(f"{{:<{w}}}" for w in width)
    lines = [fmt.format(*cols).rstrip()] + [fmt.format(*x).rstrip() for x in cells]
    return "\n".join(lines) + "\n"


def _csv(rows: list[dict], cols: list[str]) -> str:
    buf = io.StringIO()
    wr = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n", extrasaction="ignore")
    wr.writeheader()
    wr.writerows(rows)
    return buf.getvalue()


def _emit(rows: list[dict], cols: list[str], fmt: str, path: str | None = None) -> None:
    if fmt == "json":
        text = json.dumps(rows, sort_keys=True, indent=1) + "\n"
    elif fmt == "csv":
        text = _csv(rows, cols)
    else:
        text = _table(rows, cols)
    _write(text, path)


def _matrix_for(path: str, code: LinearCode | None) -> ParityCheckMatrix:
    mat = FieldMatrix.from_text(Path(path).read_text(encoding="utf-8"))
    if code is None:
        code = LinearCode(null_space(mat), name=Path(path).stem)
    h = ParityCheckMatrix(mat, code, Path(path).stem)
    validate_pcm(h)
    return h


# -- subcommands ---------------------------------------------------------------------

BOUND_COLS = ["name", "n", "d", "q", "r", "l", "value_int", "value_real", "valid", "note"]


def cmd_bounds(a) -> None:
    reps = bounds.general_reports(a.n, a.d, a.q, a.r)
    if a.mds:
        reps += bounds.mds_upper_reports(a.n, a.d) + [bounds.best_mds_upper(a.n, a.d)]
    _emit([r.row() for r in reps], BOUND_COLS, a.format)


def cmd_curves(a) -> None:
    rows = bounds.emit_curves(a.scenario, range(a.n_min, a.n_max + 1, a.step), d=a.d, rate=a.rate, k=a.k)
    _write(bounds.curves_csv(rows), a.out)


def cmd_stopping(a) -> None:
    code = code_from_name(a.code) if a.code else None
    h = _matrix_for(a.matrix, code)
    s = stopping_distance(h)
    row = {"rows": h.rows, "n": h.n, "stopping_distance": "none" if s is None else s}
    if s is not None:
        row["witness"] = " ".join(map(str, first_uncovered_set(h, s)))
    _emit([row], list(row), a.format)


def cmd_enumerate(a) -> None:
    code = code_from_name(a.code)
    h = _matrix_for(a.matrix, code) if a.matrix else None
    if h is None and a.decoder == "iterative":
        h = parity_check(code)
    prof = erasure_profile(code, h, _weights(a.weights), a.decoder, a.budget)
    _write(prof.to_csv(), a.out)


def _report_row(s: designs.BlockSystem, **extra) -> dict:
    row = {**extra, "v": s.v, "r": s.r, "blocks": len(s)}
    row["turan"] = designs.verify_turan(s, s.r + 1)[0] if s.r < s.v else ""
    row["single_exclusion"] = designs.verify_single_exclusion(s)[0] if s.r < s.v else ""
    return row


DESIGN_COLS = ["method", "j", "t", "v", "r", "blocks", "turan", "single_exclusion", "file"]


def cmd_design(a) -> None:
    if a.action == "verify":
        s = designs.BlockSystem.from_text(Path(a.file).read_text(encoding="utf-8"))
        k = a.turan if a.turan is not None else s.r + 1
        ok_t, wit_t = designs.verify_turan(s, k)
        ok_s, wit_s = designs.verify_single_exclusion(s)
        row = {
            "v": s.v,
            "r": s.r,
            "blocks": len(s),
            "k": k,
            "turan": ok_t,
            "turan_witness": " ".join(map(str, wit_t or ())),
            "single_exclusion": ok_s,
            "se_witness": " ".join(map(str, wit_s or ())),
        }
        _emit([row], list(row), a.format)
        return
    if a.action == "search":
        if a.kind == "turan":
            s = designs.exact_turan_system(a.v, a.k, a.t)
        else:
            s = designs.exact_single_exclusion_system(a.v, a.r)
        _write(s.to_text(), a.out)
        return
    systems = _construct(a)
    out_dir = Path(a.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rows = []
    for s, idx in systems:
        tag = "_".join(f"{k}{v}" for k, v in idx.items())
        name = f"{a.method}_n{a.n}" + (f"_r{a.r}_l{a.l}" if a.method in ("c1", "c2", "c3") else "") + (f"_{tag}" if tag else "") + ".txt"
        (out_dir / name).write_text(s.to_text(), encoding="utf-8", newline="\n")
        rows.append(_report_row(s, method=a.method, file=str(out_dir / name), **idx))
    _emit(rows, DESIGN_COLS, a.format)


def _construct(a) -> list[tuple[designs.BlockSystem, dict]]:
    m = a.method
    if m == "lemma14":
        return [(designs.lemma14_construction(a.n), {})]
    if m == "thm20":
        return [(designs.theorem20_patch(a.n, a.d), {})]
    if m == "thm27":
        return [(designs.theorem27_k2_construction(a.n), {})]
    if m not in ("c1", "c2", "c3"):
        raise PreconditionViolated(f"unknown method {m!r}")
    js = range(a.l) if a.sweep_j else [a.j]
    ts = range(max(a.n // a.l, 1)) if a.sweep_j else [a.t]
    out = []
    for j in js:
        if m == "c1":
            out.append((designs.construction1(a.n, a.r, a.l, j), {"j": j}))
        elif m == "c2":
            out.append((designs.construction2(a.n, a.r, a.l, j), {"j": j}))
        else:
            out += [(designs.construction3(a.n, a.r, a.l, j, t), {"j": j, "t": t}) for t in ts]
    return out


def cmd_search(a) -> None:
    code = code_from_name(a.code)
    cov = tuple(int(x) for x in a.coverage.split(",")) if a.coverage else None
    cfg = SearchConfig(
        seed=a.seed,
        max_rows=a.max_rows,
        max_stall_iterations=a.max_stall,
        coverage_target=cov,
        restarts=a.restarts,
        pool_size=a.pool_size,
        shrink=not a.no_shrink,
    )
    res = greedy_pcm_search(code, a.target_s or code.d, cfg)
    _write(res.matrix.matrix.to_text(), a.out)
    if a.log:
        _write(res.log_jsonl(), a.log)
    summary = {"rows": res.rows, "stopping_distance": res.stopping_distance, "iterations": res.iterations, "seed": res.seed}
    sys.stderr.write(json.dumps(summary, sort_keys=True) + "\n")


def cmd_golay(a) -> None:
    from .codes import golay24

    g = golay24()
    enum = weight_enumerator(g)
    h = parity_check(g)
    row = {
        "n": g.n,
        "k": g.k,
        "d": g.d,
        "self_dual": same_codewords(g, dual(g)),
        "weights": " ".join(f"A{w}={c}" for w, c in enumerate(enum) if c),
        "basis_stopping_distance": stopping_distance(h),
    }
    _emit([row], list(row), a.format)


# -- parser ----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="stopred", description="Stopping redundancy toolkit.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def fmt(sp, default="table"):
        sp.add_argument("--format", choices=["table", "csv", "json"], default=default)

    b = sub.add_parser("bounds", help="evaluate stopping-redundancy bounds")
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--d", type=int, required=True)
    b.add_argument("--q", type=int, default=2)
    b.add_argument("--r", type=int, required=True)
    b.add_argument("--mds", action="store_true", help="include MDS upper bounds")
    fmt(b)
    b.set_defaults(func=cmd_bounds)

    c = sub.add_parser("curves", help="normalized MDS bound curves as CSV")
    c.add_argument("--scenario", choices=["fixed_d", "fixed_rate", "fixed_k"], required=True)
    c.add_argument("--n-min", type=int, required=True)
    c.add_argument("--n-max", type=int, required=True)
    c.add_argument("--step", type=int, default=1)
    c.add_argument("--d", type=int)
    c.add_argument("--rate", type=float)
    c.add_argument("--k", type=int)
    c.add_argument("--out")
    c.set_defaults(func=cmd_curves)

    s = sub.add_parser("stopping", help="stopping distance of a matrix file")
    s.add_argument("--matrix", required=True)
    s.add_argument("--code", help="code the matrix must be a parity-check matrix of")
    fmt(s)
    s.set_defaults(func=cmd_stopping)

    e = sub.add_parser("enumerate", help="exhaustive erasure failure counts")
    e.add_argument("--code", required=True)
    e.add_argument("--matrix")
    e.add_argument("--decoder", choices=["ml", "iterative"], required=True)
    e.add_argument("--weights", required=True, help="inclusive range a..b")
    e.add_argument("--budget", type=int, default=COUNT_BUDGET, help="max patterns per weight")
    e.add_argument("--out")
    e.set_defaults(func=cmd_enumerate)

    d = sub.add_parser("design", help="block-system operations")
    dsub = d.add_subparsers(dest="action", required=True, parser_class=_Parser)
    dv = dsub.add_parser("verify")
    dv.add_argument("file")
    dv.add_argument("--turan", type=int, help="k for the Turan check (default r + 1)")
    fmt(dv)
    dc = dsub.add_parser("construct")
    dc.add_argument("--method", choices=["c1", "c2", "c3", "lemma14", "thm20", "thm27"], required=True)
    dc.add_argument("--n", type=int, required=True)
    dc.add_argument("--r", type=int, default=1)
    dc.add_argument("--l", type=int, default=2)
    dc.add_argument("--j", type=int, default=0)
    dc.add_argument("--t", type=int, default=0)
    dc.add_argument("--d", type=int, default=4)
    dc.add_argument("--sweep-j", action="store_true", help="build every j (and t)")
    dc.add_argument("--out-dir", default=".")
    fmt(dc, "csv")
    ds = dsub.add_parser("search")
    ds.add_argument("--kind", choices=["turan", "se"], required=True)
    ds.add_argument("--v", type=int, required=True)
    ds.add_argument("--k", type=int)
    ds.add_argument("--t", type=int)
    ds.add_argument("--r", type=int)
    ds.add_argument("--out")
    d.set_defaults(func=cmd_design)

    g = sub.add_parser("search", help="greedy parity-check matrix search")
    g.add_argument("--code", required=True)
    g.add_argument("--target-s", type=int)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--restarts", type=int, default=1)
    g.add_argument("--max-rows", type=int)
    g.add_argument("--max-stall", type=int, default=200)
    g.add_argument("--coverage", help="comma-separated i-set sizes to track")
    g.add_argument("--pool-size", type=int, default=4096)
    g.add_argument("--no-shrink", action="store_true")
    g.add_argument("--out")
    g.add_argument("--log", help="JSON-lines progress log")
    g.set_defaults(func=cmd_search)

    gg = sub.add_parser("golay", help="build and check the extended Golay code")
    fmt(gg)
    gg.set_defaults(func=cmd_golay)
    return p


def run(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "action", None) == "search":
            need = ("k", "t") if args.kind == "turan" else ("r",)
            if any(getattr(args, x) is None for x in need):
                raise _UsageError(f"design search --kind {args.kind} needs " + ", ".join("--" + x for x in need))
        args.func(args)
    except _UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return 1
    except BudgetExceeded as exc:
        sys.stderr.write(f"budget exhausted: {exc}\n")
        return 2
    except (PreconditionViolated, ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    return 0


def main() -> None:
    sys.exit(run())
