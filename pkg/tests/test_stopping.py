from __future__ import annotations

import itertools
from math import comb

import numpy as np
import pytest

from stopred.codes import LinearCode, ParityCheckMatrix, codewords, hamming84, parity_check, rs_code
from stopred.errors import EmptySet
from stopred.fieldcore import FieldMatrix, null_space
from stopred.stopping import (
    ErasureProfile,
    count_undecodable,
    covers,
    covers_all_isets,
    erasure_profile,
    is_stopping_set,
    ml_decodable,
    peel_decode,
    stopping_distance,
)


def pcm(rows, p=2):
    m = FieldMatrix.from_rows(rows, p)
    return ParityCheckMatrix(m, LinearCode(null_space(m)) if null_space(m).rows else None)


def random_pcm(rng, n=10, rows=5):
    return pcm(rng.integers(0, 2, size=(rows, n)))


def brute_stopping(h, s):
    return all(sum(1 for i in s if row[i]) != 1 for row in h.matrix.data)


def test_covers_examples():
    assert covers((1, 0, 1, 1), {0, 1})
    assert not covers((1, 0, 1, 1), {0, 2})
    assert not covers((0, 0, 0), {0, 1})


def test_stopping_set_examples():
    ones = pcm([[1, 1, 1, 1]])
    assert is_stopping_set(ones, {0, 1})
    assert not any(is_stopping_set(pcm(np.eye(4, dtype=int)), s) for s in ({0}, {1, 2}, {0, 1, 2, 3}))
    with pytest.raises(EmptySet):
        is_stopping_set(ones, set())
    assert stopping_distance(ones) == 2
    assert stopping_distance(pcm(np.eye(4, dtype=int))) is None
    ok, wit = covers_all_isets(ones, 2)
    assert not ok and len(wit) == 2


def test_codeword_supports_are_stopping_sets(golay):
    h = parity_check(golay)
    words = codewords(golay)
    for w in words[np.count_nonzero(words, axis=1) == 8][:20]:
        assert is_stopping_set(h, np.flatnonzero(w))


def test_peeling_characterization():
    rng = np.random.default_rng(3)
    for _ in range(15):
        h = random_pcm(rng)
        n = h.n
        for e in range(1 << n):
            if rng.random() > 0.1:
                continue
            er = [i for i in range(n) if e >> i & 1]
            res = peel_decode(h, er)
            has = any(
                brute_stopping(h, s)
                for k in range(1, len(er) + 1)
                for s in itertools.combinations(er, k)
            )
            assert res.resolved == (not has)
            if res.residual:
                assert brute_stopping(h, res.residual)
            if res.resolved:
                assert ml_decodable(h, er)
    assert peel_decode(pcm([[1, 1, 1, 1]]), []).resolved
    stuck = peel_decode(pcm([[1, 1, 1, 1]]), [1, 3])
    assert not stuck.resolved and stuck.residual == {1, 3}


def test_stopping_distance_matches_brute_force():
    rng = np.random.default_rng(5)
    for _ in range(20):
        h = random_pcm(rng, n=8, rows=4)
        brute = next(
            (k for k in range(1, 9) if any(brute_stopping(h, s) for s in itertools.combinations(range(8), k))),
            None,
        )
        s = stopping_distance(h)
        assert s == brute
        if s is not None:
            assert covers_all_isets(h, s - 1)[0] and not covers_all_isets(h, s)[0]


def test_ml_decodable(golay):
    h = parity_check(golay)
    words = codewords(golay)
    w8 = words[np.count_nonzero(words, axis=1) == 8][0]
    assert not ml_decodable(h, np.flatnonzero(w8))
    assert ml_decodable(h, range(7))


def test_golay_ml_column_small_weights(golay):
    for w, expect in [(6, 0), (7, 0), (8, 759), (9, 12144)]:
        assert count_undecodable(golay, None, w, "ml") == expect
    assert count_undecodable(golay, None, 9, "ml", ml_method="support") == 12144
    assert count_undecodable(golay, None, 13, "ml") == comb(24, 13)


def test_iterative_dominates_ml():
    for code in (hamming84(), rs_code(5, 5, 2)):
        h = parity_check(code)
        for w in range(code.n + 1):
            it = count_undecodable(code, h, w, "iterative")
            ml = count_undecodable(code, h, w, "ml")
            assert 0 <= ml <= it <= comb(code.n, w)
        assert count_undecodable(code, h, code.n, "ml") == 1


def test_adding_rows_is_monotone():
    code = hamming84()
    h = parity_check(code)
    extra = (h.matrix.data[0] + h.matrix.data[1]) % 2
    h2 = ParityCheckMatrix(FieldMatrix.from_rows(list(h.matrix.data) + [extra], 2), code)
    assert stopping_distance(h2) >= stopping_distance(h)
    for w in range(9):
        assert count_undecodable(code, h2, w, "iterative") <= count_undecodable(code, h, w, "iterative")


def test_profile_csv_round_trip():
    code = hamming84()
    prof = erasure_profile(code, parity_check(code), range(0, 9), "iterative")
    text = prof.to_csv()
    assert text.splitlines()[0] == "w,count,binom,fraction"
    back = ErasureProfile.from_csv(text, 8)
    assert back.weights == prof.weights


def test_greedy_golay_matrix(golay_search):
    h = golay_search.matrix
    assert stopping_distance(h) == 8
    assert covers_all_isets(h, 7)[0]
    assert count_undecodable(h.code, h, 7, "iterative") == 0
