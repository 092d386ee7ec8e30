"""Linear codes over prime fields and their parity-check matrices.

Codes are described by a generator matrix. Known constructions (Golay-24,
Reed-Solomon, Hamming, repetition, single parity) validate themselves on
construction. Codeword enumeration is chunked so memory stays flat; on GF(2)
information vectors are walked in Gray-code order over packed supports.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

from . import kernels
from .errors import (
    BadDimension,
    BudgetExceeded,
    ConstructionError,
    NoSuchCodeword,
    SearchExhausted,
    UnsupportedLength,
)
from .fieldcore import FieldMatrix, FieldSpec, null_space, rank

ENUM_BUDGET = 10**7
_CHUNK = 1 << 16


@dataclass(frozen=True, eq=False)
class LinearCode:
    generator: FieldMatrix
    name: str = ""
    distance: int | None = None
    mds: bool = False

    def __post_init__(self):
        if rank(self.generator) != self.generator.rows:
            raise BadDimension("generator rows must be linearly independent")

    @property
    def n(self) -> int:
        return self.generator.cols

    @property
    def k(self) -> int:
        return self.generator.rows

    @property
    def q(self) -> int:
        return self.generator.p

    @property
    def r(self) -> int:
        """Redundancy, the dimension of the dual."""
        return self.n - self.k

    @cached_property
    def d(self) -> int:
        return self.distance if self.distance is not None else min_distance(self)

    def __repr__(self):
        label = self.name or "code"
        return f"LinearCode({label}: n={self.n}, k={self.k}, q={self.q})"


@dataclass(frozen=True, eq=False)
class ParityCheckMatrix:
    """Rows are dual codewords spanning the dual; redundant rows are allowed."""

    matrix: FieldMatrix
    code: LinearCode
    label: str = field(default="")

    @property
    def rows(self) -> int:
        return self.matrix.rows

    @property
    def n(self) -> int:
        return self.matrix.cols

    @cached_property
    def row_masks(self) -> np.ndarray:
        if self.n > kernels.MAX_BITS:
            raise ValueError(f"support masks need n <= {kernels.MAX_BITS}")
        return kernels.as_masks(self.matrix.row_supports())


def validate_pcm(h: ParityCheckMatrix) -> None:
    """Raise ValueError unless every row is a dual codeword and the rows span the dual."""
    code = h.code
    if h.matrix.p != code.q or h.matrix.cols != code.n:
        raise ValueError("parity-check matrix shape or field does not match the code")
    prod = (code.generator.data @ h.matrix.data.T) % code.q
    if np.any(prod):
        raise ValueError("a row is not orthogonal to the code")
    if rank(h.matrix) != code.r:
        raise ValueError(f"rank {rank(h.matrix)} differs from n - k = {code.r}")


def parity_check(code: LinearCode, label: str = "basis") -> ParityCheckMatrix:
    return ParityCheckMatrix(null_space(code.generator), code, label)


# -- enumeration -------------------------------------------------------------


def _check_budget(code: LinearCode, budget: int) -> None:
    if code.q**code.k > budget:
        raise BudgetExceeded(f"{code.q}^{code.k} codewords exceed the enumeration budget {budget}")


def _gray_masks(code: LinearCode) -> np.ndarray:
    rows = kernels.as_masks(code.generator.row_supports())
    idx = np.arange(1 << code.k, dtype=np.int64)
    gray = idx ^ (idx >> 1)
    out = np.zeros(idx.shape[0], dtype=np.int64)
    for b, row in enumerate(rows):
        out ^= np.where((gray >> b) & 1, row, 0)
    return out


def iter_codewords(code: LinearCode, budget: int = ENUM_BUDGET, chunk: int = _CHUNK) -> Iterator[np.ndarray]:
    """Yield all codewords in (chunk, n) blocks, zero word included."""
    _check_budget(code, budget)
    q, k = code.q, code.k
    total = q**k
    g = code.generator.data
    powers = q ** np.arange(k - 1, -1, -1, dtype=np.int64)
    for a in range(0, total, chunk):
        idx = np.arange(a, min(total, a + chunk), dtype=np.int64)
        info = (idx[:, None] // powers) % q
        yield (info @ g) % q


def codewords(code: LinearCode, budget: int = ENUM_BUDGET) -> np.ndarray:
    blocks = list(iter_codewords(code, budget))
    return np.vstack(blocks) if blocks else np.zeros((0, code.n), dtype=np.int64)


def codeword_supports(code: LinearCode, budget: int = ENUM_BUDGET) -> np.ndarray:
    """Support masks of all codewords (one per codeword, duplicates kept)."""
    if code.n > kernels.MAX_BITS:
        raise ValueError(f"support masks need n <= {kernels.MAX_BITS}")
    _check_budget(code, budget)
    if code.q == 2:
        return _gray_masks(code)
    bits = np.int64(1) << np.arange(code.n, dtype=np.int64)
    return np.concatenate([(cw != 0).astype(np.int64) @ bits for cw in iter_codewords(code, budget)])


def min_distance(code: LinearCode, budget: int = ENUM_BUDGET) -> int:
    """Exact minimum Hamming weight over nonzero codewords."""
    if code.k == 0:
        raise ValueError("the zero code has no minimum distance")
    if code.q == 2 and code.n <= kernels.MAX_BITS:
        _check_budget(code, budget)
        w = np.bitwise_count(_gray_masks(code))
        return int(w[w > 0].min())
    best = code.n
    for cw in iter_codewords(code, budget):
        w = np.count_nonzero(cw, axis=1)
        w = w[w > 0]
        if w.size:
            best = min(best, int(w.min()))
    return best


def weight_enumerator(code: LinearCode, budget: int = ENUM_BUDGET) -> list[int]:
    """A_w for w = 0..n."""
    if code.q == 2 and code.n <= kernels.MAX_BITS:
        _check_budget(code, budget)
        w = np.bitwise_count(_gray_masks(code)).astype(np.int64)
        return np.bincount(w, minlength=code.n + 1).tolist()
    counts = np.zeros(code.n + 1, dtype=np.int64)
    for cw in iter_codewords(code, budget):
        counts += np.bincount(np.count_nonzero(cw, axis=1), minlength=code.n + 1)
    return counts.tolist()


def same_codewords(a: LinearCode, b: LinearCode) -> bool:
    """Equal as codeword sets (compared via row spaces)."""
    if (a.n, a.k, a.q) != (b.n, b.k, b.q):
        return False
    return rank(a.generator.vstack(b.generator)) == a.k


# -- constructions -------------------------------------------------------------


def dual(code: LinearCode) -> LinearCode:
    g = null_space(code.generator)
    name = f"dual({code.name})" if code.name else ""
    if code.mds and g.rows:
        return LinearCode(g, name, distance=code.k + 1, mds=True)
    return LinearCode(g, name)


def _polymod2(a: int, b: int) -> int:
    db = b.bit_length()
    while a and a.bit_length() >= db:
        a ^= b << (a.bit_length() - db)
    return a


def golay_generator_poly() -> int:
    """Smallest degree-11 divisor of x^23 - 1 over GF(2), as a bit-packed polynomial."""
    target = (1 << 23) | 1
    for mid in range(1 << 10):
        g = (1 << 11) | (mid << 1) | 1
        if _polymod2(target, g) == 0:
            return g
    raise ConstructionError("x^23 - 1 has no degree-11 factor")


def golay24() -> LinearCode:
    """Extended binary Golay (24, 12, 8) code, checked by full enumeration."""
    g = golay_generator_poly()
    rows = []
    for i in range(12):
        shifted = g << i
        bits = [(shifted >> j) & 1 for j in range(23)]
        rows.append(bits + [sum(bits) % 2])
    gen = FieldMatrix.from_rows(rows, 2)
    code = LinearCode(gen, "golay24")
    if (code.n, code.k) != (24, 12):
        raise ConstructionError("wrong golay dimensions")
    if np.any((gen.data @ gen.data.T) % 2):
        raise ConstructionError("golay generator is not self-orthogonal")
    d = min_distance(code)
    if d != 8:
        raise ConstructionError(f"golay minimum distance {d} != 8")
    return LinearCode(gen, "golay24", distance=8)


def rs_code(q: int, n: int, k: int, points: Sequence[int] | None = None) -> LinearCode:
    """Evaluation Reed-Solomon code: polynomials of degree < k at n distinct points of GF(q)."""
    spec = FieldSpec(q)
    if n > q:
        raise UnsupportedLength(f"length {n} exceeds field size {q}")
    if not 1 <= k <= n:
        raise BadDimension(f"need 1 <= k <= n, got k={k}, n={n}")
    pts = list(range(n)) if points is None else [int(x) % q for x in points]
    if len(set(pts)) != n:
        raise ValueError("evaluation points must be distinct")
    gen = np.array([[pow(x, i, q) for x in pts] for i in range(k)], dtype=np.int64)
    d = n - k + 1
    code = LinearCode(FieldMatrix(spec, gen), f"rs:{q},{n},{k}", distance=d, mds=True)
    if q**k <= 10**6 and min_distance(code) != d:
        raise ConstructionError("Reed-Solomon code failed the MDS check")
    return code


def repetition_code(q: int, n: int) -> LinearCode:
    return LinearCode(FieldMatrix.from_rows([[1] * n], q), f"rep:{q},{n}", distance=n, mds=True)


def parity_code(n: int) -> LinearCode:
    """Binary single-parity-check code of length n (d = 2)."""
    rows = [[1 if j in (0, i) else 0 for j in range(n)] for i in range(1, n)]
    return LinearCode(FieldMatrix.from_rows(rows, 2), f"parity:{n}", distance=2, mds=True)


def hamming74() -> LinearCode:
    h = FieldMatrix.from_rows([[(j >> b) & 1 for j in range(1, 8)] for b in range(3)], 2)
    return LinearCode(null_space(h), "hamming74")


def hamming84() -> LinearCode:
    base = null_space(FieldMatrix.from_rows([[(j >> b) & 1 for j in range(1, 8)] for b in range(3)], 2))
    rows = [list(r) + [int(sum(r)) % 2] for r in base.data]
    return LinearCode(FieldMatrix.from_rows(rows, 2), "hamming84")


# -- prescribed supports ---------------------------------------------------------


def codeword_with_support(code: LinearCode, support: Sequence[int]) -> np.ndarray:
    """A codeword whose nonzero positions are exactly ``support``.

    Solves for kernel vectors of the parity checks restricted to ``support`` and
    rejects those with extra zeros. For an MDS code and |support| = d the kernel
    is one-dimensional and the first candidate succeeds.
    """
    s = sorted(set(int(i) for i in support))
    if any(not 0 <= i < code.n for i in s):
        raise ValueError("support index out of range")
    d = code.d
    if len(s) < d:
        raise NoSuchCodeword(f"support of size {len(s)} is below the minimum distance {d}")
    q = code.q
    h = null_space(code.generator)
    if h.rows == 0:
        kern = np.eye(len(s), dtype=np.int64)
    else:
        kern = null_space(h.take_columns(s)).data
    dim = kern.shape[0]
    cap = q ** (len(s) - d + 1)
    tried = 0
    for coeffs in itertools.product(range(q), repeat=dim):
        if not any(coeffs):
            continue
        if tried >= cap:
            raise SearchExhausted(f"no codeword with the requested support among {cap} candidates")
        tried += 1
        vec = (np.asarray(coeffs, dtype=np.int64) @ kern) % q
        if np.all(vec != 0):
            out = np.zeros(code.n, dtype=np.int64)
            out[s] = vec
            return out
    raise NoSuchCodeword("no codeword has exactly this support")


# -- registry and files -------------------------------------------------------------


def code_from_name(spec: str) -> LinearCode:
    """Resolve ``golay24``, ``hamming74``, ``hamming84``, ``rs:q,n,k``, ``rep:q,n``,
    ``parity:n`` or a path to a code file."""
    s = spec.strip()
    if s == "golay24":
        return golay24()
    if s == "hamming74":
        return hamming74()
    if s == "hamming84":
        return hamming84()
    head, _, args = s.partition(":")
    if head in ("rs", "rep", "parity") and args:
        vals = [int(x) for x in args.split(",")]
        if head == "rs" and len(vals) == 3:
            return rs_code(*vals)
        if head == "rep" and len(vals) == 2:
            return repetition_code(*vals)
        if head == "parity" and len(vals) == 1:
            return parity_code(vals[0])
        raise ValueError(f"bad arguments in code name {spec!r}")
    if os.path.exists(s):
        with open(s, encoding="utf-8") as fh:
            return code_from_text(fh.read())
    raise ValueError(f"unknown code {spec!r}")


def code_to_text(code: LinearCode) -> str:
    head = f"CODE {code.n} {code.k} {code.q}"
    if code.distance is not None:
        head += f" {code.distance}"
    return head + "\n" + code.generator.to_text()


def code_from_text(text: str) -> LinearCode:
    first, _, rest = text.partition("\n")
    parts = first.split()
    if not parts or parts[0] != "CODE" or len(parts) not in (4, 5):
        raise ValueError("code file must start with 'CODE n k q [d]'")
    n, k, q = (int(x) for x in parts[1:4])
    d = int(parts[4]) if len(parts) == 5 else None
    gen = FieldMatrix.from_text(rest)
    if (gen.rows, gen.cols, gen.p) != (k, n, q):
        raise ValueError("CODE header does not match the matrix")
    return LinearCode(gen, distance=d, mds=d is not None and d == n - k + 1)
