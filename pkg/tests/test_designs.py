from __future__ import annotations

import itertools
from math import comb

import numpy as np
import pytest

from stopred import kernels
from stopred.codes import rs_code
from stopred.designs import (
    BlockSystem,
    PartitionScheme,
    best_construction,
    construction1,
    construction2,
    construction2_sum_general,
    construction3,
    covering_to_turan,
    eq39_size,
    exact_covering_number,
    exact_single_exclusion_search,
    exact_single_exclusion_system,
    exact_turan_search,
    exact_turan_system,
    lemma14_construction,
    lemma35_residues,
    mantel_t_n32,
    ringel_t_n43,
    row_family,
    se_system_to_pcm,
    theorem20_patch,
    theorem27_k2_construction,
    turan_t_n21,
    verify_single_exclusion,
    verify_turan,
)
from stopred.errors import PreconditionViolated
from stopred.fieldcore import rank
from stopred.stopping import stopping_distance


def brute_turan(s: BlockSystem, k: int) -> bool:
    return all(any(set(b) <= set(x) for b in s.blocks) for x in itertools.combinations(range(s.v), k))


def brute_se(s: BlockSystem) -> bool:
    return all(
        any(len(set(x) - set(b)) == 1 for b in s.blocks)
        for i in range(1, s.r + 2)
        for x in itertools.combinations(range(s.v), i)
    )


def milp_min_cover(rel: np.ndarray) -> int:
    """Independent optimum from an integer program (HiGHS)."""
    from scipy.optimize import Bounds, LinearConstraint, milp

    m = rel.shape[0]
    res = milp(
        np.ones(m),
        constraints=LinearConstraint(rel.T.astype(float), lb=1, ub=np.inf),
        integrality=np.ones(m),
        bounds=Bounds(0, 1),
    )
    assert res.success
    return round(res.fun)


def test_block_system_normalizes_and_round_trips():
    s = BlockSystem(5, 2, ((1, 0), (0, 1), (3, 2)))
    assert s.blocks == ((0, 1), (2, 3))
    assert BlockSystem.from_text(s.to_text()) == s
    assert s.to_text() == "5 2 2\n0 1\n2 3\n"
    with pytest.raises(PreconditionViolated):
        BlockSystem(3, 2, ((0, 3),))
    with pytest.raises(PreconditionViolated):
        BlockSystem(3, 2, ((0, 0),))


def test_partition_scheme():
    s = PartitionScheme.default(10, 3, with_rows=True)
    assert s.parts == ((0, 3, 6, 9), (1, 4, 7), (2, 5, 8))
    assert s.rows == ((0, 1, 2), (3, 4, 5), (6, 7, 8, 9))
    with pytest.raises(PreconditionViolated):
        PartitionScheme(4, 2, ((0,), (1, 2, 3)))


def test_verifiers_trivial_cases():
    full = BlockSystem(5, 2, tuple(itertools.combinations(range(5), 2)))
    assert verify_turan(full, 3) == (True, None)
    assert verify_turan(BlockSystem(5, 2, ()), 3)[0] is False
    all_minus = BlockSystem(6, 5, tuple(itertools.combinations(range(6), 5)))
    assert verify_single_exclusion(all_minus)[0] and len(all_minus) == 6
    with_zero = BlockSystem(5, 2, tuple(b for b in itertools.combinations(range(5), 2) if 0 in b))
    assert verify_single_exclusion(with_zero) == (False, (0,))


def test_verifiers_match_brute_force():
    rng = np.random.default_rng(0)
    for _ in range(80):
        v = int(rng.integers(4, 8))
        r = int(rng.integers(1, v - 1))
        pool = list(itertools.combinations(range(v), r))
        pick = rng.random(len(pool)) < rng.random()
        s = BlockSystem(v, r, tuple(b for b, keep in zip(pool, pick) if keep))
        assert verify_turan(s, r + 1)[0] == brute_turan(s, r + 1)
        assert verify_single_exclusion(s)[0] == brute_se(s)


def test_closed_forms():
    assert mantel_t_n32(6) == 6
    assert turan_t_n21(5) == 4
    assert ringel_t_n43(13) == 112
    assert covering_to_turan(7, 3, 2) == (7, 5, 4)
    assert covering_to_turan(*covering_to_turan(7, 3, 2)) == (7, 3, 2)


def test_two_clique_family():
    s = lemma14_construction(6)
    assert len(s) == 6 and verify_turan(s, 3)[0]
    assert len(lemma14_construction(5)) == 4
    assert len(lemma14_construction(10)) == 24 >= mantel_t_n32(10)
    with pytest.raises(PreconditionViolated):
        lemma14_construction(3)


def test_construction_examples():
    for j in range(2):
        s = construction1(10, 3, 2, j)
        assert verify_turan(s, 4)[0] and verify_single_exclusion(s)[0]
    assert len(best_construction("c1", 10, 3, 2)[0]) <= 80
    assert len(construction1(7, 3, 1, 0)) == comb(7, 3)
    for j in range(3):
        assert verify_turan(construction1(9, 2, 3, j), 3)[0]
    assert sum(len(construction2(9, 2, 3, j)) for j in range(3)) == 81
    assert verify_single_exclusion(construction2(12, 3, 3, 1))[0]
    assert len(construction2(7, 3, 1, 0)) == comb(7, 3)
    assert verify_single_exclusion(construction3(12, 8, 6, 0, 0))[0]
    assert sum(len(row_family(10, 4, 5, t)) for t in range(2)) == comb(10, 4)


def test_construction2_sum_general_identity():
    for n in range(4, 13):
        for r in range(1, n - 1):
            for l in range(2, min(n, 6) + 1):
                scheme = PartitionScheme.default(n, l)
                total = sum(len(construction2(n, r, l, j)) for j in range(l))
                assert total == construction2_sum_general(n, r, scheme)


def test_construction3_union_bound():
    for n, r, l in [(10, 4, 5), (9, 3, 2), (12, 5, 4)]:
        for j in range(l):
            for t in range(n // l):
                c3 = len(construction3(n, r, l, j, t))
                assert c3 <= len(construction2(n, r, l, j)) + len(row_family(n, r, l, t))


def test_alternative_partition():
    scheme = PartitionScheme(8, 2, ((0, 1, 2, 3), (4, 5, 6, 7)))
    for j in range(2):
        s = construction1(8, 2, 2, j, scheme)
        assert verify_turan(s, 3)[0] and verify_single_exclusion(s)[0]


def test_residue_coverage():
    assert lemma35_residues(4, 2) == frozenset(range(4))
    assert lemma35_residues(5, 1) == frozenset(range(5))
    assert lemma35_residues(7, 6) == frozenset(range(7))


def test_patch_family():
    t = theorem20_patch(8, 4)
    assert len(t) == eq39_size(8, 4) == 13
    for n, d in [(8, 4), (9, 5)]:
        comp = theorem20_patch(n, d).complement_masks()
        for i in range(1, d - 1):
            assert kernels.first_uncovered(comp, n, i) < 0
    for n, d in [(8, 4), (8, 5)]:
        patched = theorem20_patch(n, d).union(exact_turan_system(n, d - 1, d - 2))
        assert verify_single_exclusion(patched)[0]


def test_k2_bin_construction():
    for n in (6, 7, 9):
        s = theorem27_k2_construction(n)
        assert verify_single_exclusion(s)[0]
        assert len(s) < 2 * comb(n, 2) / 3


def test_exact_examples():
    assert exact_turan_search(4, 3, 2) == 2
    assert exact_turan_search(5, 3, 2) == 4
    assert exact_turan_search(5, 4, 3) == 3
    assert exact_single_exclusion_search(5, 3) == 4
    assert exact_single_exclusion_search(5, 2) == 5
    assert [exact_single_exclusion_search(n, 1) for n in range(3, 9)] == [n - 1 for n in range(3, 9)]
    assert exact_covering_number(5, 3, 2) == exact_turan_search(5, 3, 2) == 4


def test_exact_systems_verify():
    for v, k, t in [(6, 3, 2), (7, 4, 3), (6, 4, 2)]:
        s = exact_turan_system(v, k, t)
        assert verify_turan(s, k)[0]
    for v, r in [(6, 2), (6, 3), (7, 2)]:
        s = exact_single_exclusion_system(v, r)
        assert verify_single_exclusion(s)[0]
        assert verify_turan(s, r + 1)[0]
    assert verify_single_exclusion(exact_turan_system(6, 3, 2))[0]


@pytest.mark.parametrize("v,k,t", [(5, 3, 2), (6, 3, 2), (6, 4, 3), (7, 3, 2), (6, 4, 2)])
def test_exact_turan_against_milp(v, k, t):
    cands = list(itertools.combinations(range(v), t))
    targets = list(itertools.combinations(range(v), k))
    rel = np.array([[set(c) <= set(x) for x in targets] for c in cands])
    assert exact_turan_search(v, k, t) == milp_min_cover(rel)


@pytest.mark.parametrize("v,r", [(4, 2), (5, 2), (5, 3), (6, 2), (6, 3), (7, 2)])
def test_exact_gamma_against_milp(v, r):
    cands = list(itertools.combinations(range(v), r))
    targets = [x for i in range(1, r + 2) for x in itertools.combinations(range(v), i)]
    rel = np.array([[len(set(x) - set(c)) == 1 for x in targets] for c in cands])
    assert exact_single_exclusion_search(v, r) == milp_min_cover(rel)


def test_exact_agrees_with_formulas():
    for n in range(4, 10):
        assert exact_turan_search(n, 3, 2) == mantel_t_n32(n)
    for n in range(5, 8):
        assert exact_turan_search(n, 4, 3) == ringel_t_n43(n)
    for n in (6, 7, 8):
        assert exact_single_exclusion_search(n, 2) == mantel_t_n32(n)
    for n in (4, 5):
        assert exact_single_exclusion_search(n, 2) > mantel_t_n32(n)


def test_normalized_turan_monotone():
    for k, t, rng in [(3, 2, range(3, 10)), (4, 3, range(4, 9)), (4, 2, range(4, 9))]:
        vals = [exact_turan_search(n, k, t) / comb(n, t) for n in rng]
        assert all(a <= b + 1e-12 for a, b in zip(vals, vals[1:]))


def test_se_system_to_pcm():
    s = exact_single_exclusion_system(5, 2)
    h = se_system_to_pcm(s, rs_code(5, 5, 2))
    assert h.rows == 5 and stopping_distance(h) == 4 and rank(h.matrix) == 3
    c1, _ = best_construction("c1", 10, 3, 2)
    code = rs_code(11, 10, 6)
    h = se_system_to_pcm(c1, code)
    assert stopping_distance(h) == 5 and rank(h.matrix) == code.d - 1
    with pytest.raises(PreconditionViolated):
        se_system_to_pcm(BlockSystem(5, 2, ((0, 1),)), rs_code(5, 5, 2))
