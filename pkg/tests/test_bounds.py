from __future__ import annotations

import math
import random
from fractions import Fraction
from math import comb

import pytest

from stopred import bounds as B
from stopred.designs import best_construction
from stopred.errors import PreconditionViolated


def oracle_rho(n, d, q):
    """Linear scan with exact rationals."""
    rho = 0
    while True:
        total = sum(comb(n, i) * (1 - Fraction((q - 1) * i, q**i)) ** rho for i in range(1, d))
        if total < 1:
            return rho
        rho += 1


def test_example_values():
    assert B.thm1(12, 8) == 2509
    assert B.thm2(12, 8) == 1816
    assert B.thm3(24, 8, 12) == 232
    assert B.cor4(24, 8, 12) == 245
    assert B.cor5(24, 8, 12) == 300
    assert B.thm6(6, 6, 3) == 332
    assert B.thm7(12, 6, 3, 6) == 160
    assert B.rho_star(8, 2, 2) == 4
    assert B.thm2(9, 2) == 9


def test_rho_star_against_scan():
    for n, d, q in [(24, 8, 2), (12, 6, 3), (10, 4, 2), (15, 5, 5), (8, 2, 2), (20, 3, 3)]:
        assert B.rho_star(n, d, q) == oracle_rho(n, d, q) == B.rho_star_exact(n, d, q)


def test_rho_star_monotone_in_q():
    # a random row covers a fixed i-set with chance i(q-1)/q^i: rising in q for
    # i = 1, falling for i >= 2, so rho* falls with q only when d = 2
    for n in range(6, 20, 3):
        for d in range(2, 6):
            vals = [B.rho_star(n, d, q) for q in (2, 3, 5, 7)]
            assert vals == sorted(vals, reverse=(d == 2))
            assert B.thm3(n, d, d + 3) == B.thm7(n, d, 2, d + 3)
        assert B.thm3(n, 4, 3) == B.rho_star(n, 4, 2)


def test_odd_combination_bound_properties():
    for r in range(3, 31):
        for d in range(3, r + 1):
            assert B.thm2(r, d) <= 2 ** (r - 1)
            if d % 2:
                assert B.thm2(r, d) <= B.thm1(r, d)


def test_rounding_policy_recorded():
    rep = {b.name: b for b in B.general_reports(24, 8, 2, 12)}
    assert rep["cor4"].value_int == math.floor(rep["cor4"].value_real - 5) + 5
    assert rep["thm1"].value_real == rep["thm1"].value_int
    assert not {b.name: b for b in B.general_reports(24, 12, 2, 12)}["cor4"].valid
    with pytest.raises(PreconditionViolated):
        B.cor8(10, 5, 3, 6)


def test_relaxed_bound_dominates_probabilistic():
    rng = random.Random(0)
    for _ in range(40):
        n = rng.randint(8, 60)
        d = rng.randint(2, n // 2)
        r = rng.randint(d - 1, n - 1)
        assert B.cor5(n, d, r) >= B.thm3(n, d, r)


def test_mds_examples():
    assert B.mds_lower_eq24(10, 5) == 30
    assert B.sv_mds_eq44(10, 5) == (30, 84)
    assert B.thm26_kim_roush(10, 5, 2) == 80
    assert B.thm34_frankl_rodl(10, 5, 2) == 70
    assert B.thm38_piecewise(10, 5, 2) == 70
    best = B.best_mds_upper(10, 5)
    assert best.value_int == 70 and best.extra["formula"] == "thm34" and best.params["l"] == 2
    with pytest.raises(PreconditionViolated):
        B.thm26_kim_roush(10, 5, 1)
    with pytest.raises(PreconditionViolated):
        B.thm34_frankl_rodl(10, 5, 3)


def test_refined_sum_reduces_when_l_divides():
    for n in range(6, 30):
        for r in range(1, n - 2):
            for l in range(1, n + 1):
                if n % l or l * (n - r - 1) < n:
                    continue
                assert B.eq58_refined(n, r, l) == B.thm25_gamma(n, r, l)


def test_mds_bracket_grid():
    for n in range(5, 40):
        for d in range(3, n + 1):
            lo, hi = B.sv_mds_eq44(n, d)
            assert Fraction(max(n - d + 2, d - 1), n) > Fraction(1, 2)
            best = B.best_mds_upper(n, d)
            assert lo <= best.value_int <= hi


def test_second_branch_never_beats_two_over_sqrt_n():
    for n in range(16, 80, 7):
        for d in range(3, n // 2):
            c = comb(n, d - 2)
            for l in range(2, n + 1):
                if l * (d - 1) > n:
                    v = B.thm38_real(n, d, l)
                    # v >= (1/l + 1/floor(n/l)) c and that factor squared is >= 4/n
                    assert v >= 0 and (v / c) ** 2 >= Fraction(4, n)


def test_construction_sizes_under_formulas():
    for n in range(5, 13):
        for r in range(1, n - 1):
            for l in range(2, n + 1):
                if l * (n - r - 1) >= n:
                    size = len(best_construction("c1", n, r, l)[0])
                    assert size <= B.thm25_gamma(n, r, l)
                    assert size <= B.eq58_refined(n, r, l)
                if l > 6:
                    continue
                c = comb(n, r)
                branch2 = Fraction(c, l) + comb(n - n // l, r) + Fraction(c, n // l)
                assert len(best_construction("c3", n, r, l)[0]) <= math.ceil(branch2)
                if l * (r + 1) <= n:
                    assert len(best_construction("c2", n, r, l)[0]) <= B.thm38_piecewise(n, r + 2, l)


def test_curves():
    rows = B.emit_curves("fixed_d", range(60, 200, 20), d=50)
    for n in range(60, 200, 20):
        sub = {r["bound_name"]: r for r in rows if r["n"] == n}
        assert sub["eq44_upper"]["normalized"] > 0.5
        assert sub["eq24_lower"]["normalized"] == pytest.approx(1 / 49, abs=1e-3)
        best = min(r["value"] for k, r in sub.items() if k not in ("eq24_lower", "eq44_upper"))
        assert best < sub["eq44_upper"]["value"]
    text = B.curves_csv(rows)
    assert text.splitlines()[0] == "n,d,k,bound_name,value,normalized"
    assert B.curves_csv(B.emit_curves("fixed_d", range(60, 200, 20), d=50)) == text
    assert B.emit_curves("fixed_rate", range(10, 20), rate=0.5)
    assert B.emit_curves("fixed_k", range(60, 70), k=50)


def test_fixed_k_trend():
    k = 5
    prev = None
    for n in (40, 80, 160):
        d = n - k + 1
        v = B.best_mds_upper(n, d).value_int / comb(n, d - 2)
        if prev is not None:
            assert v <= prev + 1e-9
        prev = v
    assert prev < 1


def test_static_turan_constants():
    assert B.TABLE_I[2] == ("1/2", "1/2")
