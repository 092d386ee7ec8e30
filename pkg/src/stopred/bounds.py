"""Upper and lower bounds on stopping redundancy.

General-code bounds take the redundancy r = n - k, the minimum distance d and
the field size q. MDS bounds take (n, d) and, for the construction-based
ones, a partition count l.

Rounding: combinatorial sums are exact integers; the minimal integer rho* is
found by search; the closed-form corollaries floor their real-valued rho*
surrogate before adding r - d + 1; construction-size bounds are ceilings of
exact rationals. All logarithms are base 2.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Callable, Iterable

from .errors import PreconditionViolated

# Known bounds on lim T(n, r+1, r)/C(n, r), kept for report footnotes only.
TABLE_I = {
    2: ("1/2", "1/2"),
    3: ("(9-sqrt(17))/12", "4/9"),
    4: ("37/143", "5/16"),
    5: ("(37-sqrt(345))/80", "5/16"),
    6: ("1/6", "17/64"),
    "asympt": ("1/r", "(1/2 + o(1)) ln(r)/r"),
}


@dataclass(frozen=True)
class BoundReport:
    name: str
    params: dict
    value_int: int | None
    value_real: float | None = None
    valid: bool = True
    note: str = ""
    extra: dict = field(default_factory=dict)

    def row(self) -> dict:
        return {
            "name": self.name,
            **{k: self.params.get(k, "") for k in ("n", "d", "q", "r", "l")},
            "value_int": "" if self.value_int is None else self.value_int,
            "value_real": "" if self.value_real is None else repr(self.value_real),
            "valid": self.valid,
            "note": self.note,
        }


def _ceil(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def _need(cond: bool, msg: str) -> None:
    if not cond:
        raise PreconditionViolated(msg)


# -- general linear codes ------------------------------------------------------------


def thm1(r: int, d: int) -> int:
    _need(d >= 3, "needs d >= 3")
    return sum(comb(r, i) for i in range(1, d - 1))


def thm2(r: int, d: int) -> int:
    """Sum of C(r, i) over odd i <= d - 1."""
    _need(d >= 2, "needs d >= 2")
    return sum(comb(r, 2 * i - 1) for i in range(1, (d - 1 + 1) // 2 + 1))


def thm6(r: int, d: int, q: int) -> int:
    _need(d >= 2 and q >= 2, "needs d >= 2, q >= 2")
    return sum(comb(r, i) * (q - 1) ** (i - 1) for i in range(1, d))


def _miss_probs(d: int, q: int) -> list[Fraction]:
    # chance that a uniform dual codeword fails to cover a fixed i-set
    return [1 - Fraction((q - 1) * i, q**i) for i in range(1, d)]


def rho_sum_exact(n: int, d: int, q: int, rho: int) -> Fraction:
    return sum((comb(n, i) * a**rho for i, a in enumerate(_miss_probs(d, q), start=1)), Fraction(0))


def _log2_rho_sum(n: int, d: int, q: int, rho: int) -> float:
    terms = [
        math.log2(comb(n, i)) + rho * math.log2(1 - (q - 1) * i / q**i)
        for i in range(1, d)
    ]
    top = max(terms)
    return top + math.log2(math.fsum(2.0 ** (t - top) for t in terms))


def _smallest(pred: Callable[[int], bool]) -> int:
    """Smallest rho >= 1 with pred(rho), pred monotone."""
    hi = 1
    while not pred(hi):
        hi *= 2
    lo = hi // 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if pred(mid):
            hi = mid
        else:
            lo = mid
    return hi


def rho_star(n: int, d: int, q: int = 2) -> int:
    """Smallest integer rho with sum_{i<d} C(n,i) (1 - (q-1) i / q^i)^rho < 1.

    Evaluated in log space; values within 1e-9 of the threshold are settled
    with exact rationals.
    """
    _need(n >= d >= 2 and q >= 2, "needs n >= d >= 2 and q >= 2")

    def below(rho: int) -> bool:
        v = _log2_rho_sum(n, d, q, rho)
        if abs(v) < 1e-9:
            return rho_sum_exact(n, d, q, rho) < 1
        return v < 0

    return _smallest(below)


def rho_star_exact(n: int, d: int, q: int = 2) -> int:
    """Same quantity as ``rho_star`` using only rational arithmetic."""
    _need(n >= d >= 2 and q >= 2, "needs n >= d >= 2 and q >= 2")
    return _smallest(lambda rho: rho_sum_exact(n, d, q, rho) < 1)


def thm3(n: int, d: int, r: int) -> int:
    return thm7(n, d, 2, r)


def thm7(n: int, d: int, q: int, r: int) -> int:
    _need(r >= d - 1, "needs r >= d - 1")
    return rho_star(n, d, q) + r - d + 1


def _h2(x: float) -> float:
    return -x * math.log2(x) - (1 - x) * math.log2(1 - x)


def _denominator(d: int, q: int) -> float:
    return -math.log2(1 - (q - 1) * (d - 1) / q ** (d - 1))


def cor8_real(n: int, d: int, q: int, r: int) -> float:
    _need(0 < d < n / 2, "needs d < n/2")
    delta = d / n
    num = n * _h2(delta) + 0.5 * math.log2(delta / (2 * math.pi * n * (1 - delta) * (1 - 2 * delta) ** 2))
    return num / _denominator(d, q) + r - d + 1


def cor9_real(n: int, d: int, q: int, r: int) -> float:
    _need(d >= 2, "needs d >= 2")
    return n / _denominator(d, q) + r - d + 1


def cor8(n: int, d: int, q: int, r: int) -> int:
    return math.floor(cor8_real(n, d, q, r) - (r - d + 1)) + r - d + 1


def cor9(n: int, d: int, q: int, r: int) -> int:
    return math.floor(cor9_real(n, d, q, r) - (r - d + 1)) + r - d + 1


def cor4(n: int, d: int, r: int) -> int:
    return cor8(n, d, 2, r)


def cor5(n: int, d: int, r: int) -> int:
    return cor9(n, d, 2, r)


def general_reports(n: int, d: int, q: int, r: int) -> list[BoundReport]:
    """Every general-code bound that applies to (n, d, q, r)."""
    params = {"n": n, "d": d, "q": q, "r": r}
    out: list[BoundReport] = []

    def add(name, fn, real=None):
        try:
            v = fn()
        except PreconditionViolated as exc:
            out.append(BoundReport(name, params, None, None, False, str(exc)))
            return
        out.append(BoundReport(name, params, v, float(v) if real is None else real()))

    if q == 2:
        add("thm1", lambda: thm1(r, d))
        add("thm2", lambda: thm2(r, d))
        add("thm3", lambda: thm3(n, d, r))
        add("cor4", lambda: cor4(n, d, r), lambda: cor8_real(n, d, 2, r))
        add("cor5", lambda: cor5(n, d, r), lambda: cor9_real(n, d, 2, r))
    else:
        add("thm6", lambda: thm6(r, d, q))
        add("thm7", lambda: thm7(n, d, q, r))
        add("cor8", lambda: cor8(n, d, q, r), lambda: cor8_real(n, d, q, r))
        add("cor9", lambda: cor9(n, d, q, r), lambda: cor9_real(n, d, q, r))
    add("rho_star", lambda: rho_star(n, d, q))
    return out


# -- MDS codes -----------------------------------------------------------------


def _mds(n: int, d: int) -> None:
    _need(3 <= d <= n, "needs 3 <= d <= n")


def mds_lower_eq24(n: int, d: int) -> int:
    _mds(n, d)
    return _ceil(Fraction(comb(n, d - 2), d - 1))


def sv_mds_eq44(n: int, d: int) -> tuple[int, int]:
    """Earlier MDS bracket: C(n,d-2)/(d-1) below, max(n-d+2, d-1)/n * C(n,d-2) above."""
    _mds(n, d)
    c = comb(n, d - 2)
    return _ceil(Fraction(c, d - 1)), _ceil(Fraction(max(n - d + 2, d - 1) * c, n))


def _l_range(n: int, l: int) -> None:
    _need(1 <= l <= n, f"partition count l={l} must lie in [1, n]")


def thm25_real(n: int, r: int, l: int) -> Fraction:
    _l_range(n, l)
    _need(r <= n - 2 and l * (n - r - 1) >= n, f"needs l >= n/(n-r-1), got l={l}")
    return l * comb(n - n // l, r) + Fraction(comb(n, r), l)


def thm25_gamma(n: int, r: int, l: int) -> int:
    return _ceil(thm25_real(n, r, l))


def thm26_kim_roush(n: int, d: int, l: int) -> int:
    _mds(n, d)
    return thm25_gamma(n, d - 2, l)


def eq58_real(n: int, r: int, l: int) -> Fraction:
    thm25_real(n, r, l)
    big = n % l
    return (l - big) * comb(n - n // l, r) + big * comb(n - n // l - 1, r) + Fraction(comb(n, r), l)


def eq58_refined(n: int, r: int, l: int) -> int:
    return _ceil(eq58_real(n, r, l))


def thm34_real(n: int, d: int, l: int) -> Fraction:
    _mds(n, d)
    _l_range(n, l)
    _need(l * (d - 1) <= n, f"needs l <= n/(d-1), got l={l}")
    return Fraction(comb(n, d - 2), l) + comb(n - n // l, d - 2)


def thm34_frankl_rodl(n: int, d: int, l: int) -> int:
    return _ceil(thm34_real(n, d, l))


def thm38_real(n: int, d: int, l: int) -> Fraction:
    _mds(n, d)
    _need(2 <= l <= n, f"needs 2 <= l <= n, got l={l}")
    c = comb(n, d - 2)
    base = comb(n - n // l, d - 2) + Fraction(c, l)
    if l * (d - 1) <= n:
        return base
    return base + Fraction(c, n // l)


def thm38_piecewise(n: int, d: int, l: int) -> int:
    return _ceil(thm38_real(n, d, l))


def _sweep(fn, n: int, *args) -> tuple[int, int] | None:
    best = None
    for l in range(1, n + 1):
        try:
            v = fn(*args, l)
        except PreconditionViolated:
            continue
        if best is None or v < best[0]:
            best = (v, l)
    return best


_MDS_FORMULAS: list[tuple[str, Callable]] = [
    ("thm34", lambda n, d, l: thm34_frankl_rodl(n, d, l)),
    ("thm38", lambda n, d, l: thm38_piecewise(n, d, l)),
    ("thm26", lambda n, d, l: thm26_kim_roush(n, d, l)),
    ("eq58", lambda n, d, l: eq58_refined(n, d - 2, l)),
]


def mds_upper_reports(n: int, d: int) -> list[BoundReport]:
    """Best l for each construction-based formula, plus the earlier bracket."""
    _mds(n, d)
    out = []
    for name, fn in _MDS_FORMULAS:
        hit = _sweep(fn, n, n, d)
        if hit is None:
            out.append(BoundReport(name, {"n": n, "d": d}, None, None, False, "no admissible l"))
        else:
            v, l = hit
            out.append(BoundReport(name, {"n": n, "d": d, "l": l}, v, float(v)))
    lo, hi = sv_mds_eq44(n, d)
    out.append(BoundReport("eq44_upper", {"n": n, "d": d}, hi, float(Fraction(max(n - d + 2, d - 1) * comb(n, d - 2), n))))
    out.append(BoundReport("eq24_lower", {"n": n, "d": d}, lo, float(Fraction(comb(n, d - 2), d - 1)), note="lower bound"))
    return out


def best_mds_upper(n: int, d: int) -> BoundReport:
    """Smallest valid upper bound over the construction formulas and l, and the earlier upper bound."""
    cands = [b for b in mds_upper_reports(n, d) if b.valid and b.name != "eq24_lower"]
    best = min(cands, key=lambda b: b.value_int)
    return BoundReport("best_mds_upper", best.params, best.value_int, best.value_real, True, f"via {best.name}", {"formula": best.name})


# -- curves ------------------------------------------------------------------------

CURVE_FIELDS = ["n", "d", "k", "bound_name", "value", "normalized"]


def _scenario_points(scenario: str, n_values: Iterable[int], d=None, rate=None, k=None):
    for n in n_values:
        if scenario == "fixed_d":
            dd = d
        elif scenario == "fixed_k":
            dd = n - k + 1
        elif scenario == "fixed_rate":
            dd = n - int(round(rate * n)) + 1
        else:
            raise PreconditionViolated(f"unknown scenario {scenario!r}")
        if 3 <= dd <= n:
            yield n, dd


def emit_curves(scenario: str, n_values: Iterable[int], d: int | None = None, rate: float | None = None, k: int | None = None) -> list[dict]:
    """Rows (n, d, k, bound_name, value, value / C(n, d-2)) in a fixed order."""
    rows = []
    for n, dd in _scenario_points(scenario, n_values, d=d, rate=rate, k=k):
        norm = comb(n, dd - 2)
        for rep in mds_upper_reports(n, dd):
            if not rep.valid:
                continue
            rows.append(
                {
                    "n": n,
                    "d": dd,
                    "k": n - dd + 1,
                    "bound_name": rep.name,
                    "value": rep.value_int,
                    "normalized": float(Fraction(rep.value_int, norm)),
                }
            )
    return rows


def curves_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    wr = csv.DictWriter(buf, fieldnames=CURVE_FIELDS, lineterminator="\n")
    wr.writeheader()
    for row in rows:
        wr.writerow({**row, "normalized": repr(row["normalized"])})
    return buf.getvalue()
