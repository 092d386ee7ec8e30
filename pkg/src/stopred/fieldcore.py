"""Dense matrices over prime fields GF(p).

Entries are canonical residues in [0, p) held in a read-only int64 array.
Everything here is exact integer arithmetic. GF(2) elimination packs each row
into a Python int and works with XOR.

Text format (used throughout the package)::

    rows cols p
    e00 e01 ...
    ...
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

MAX_PRIME = 1 << 16


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    p: int

    def __post_init__(self):
        if not (2 <= self.p <= MAX_PRIME and is_prime(self.p)):
            raise ValueError(f"field size must be a prime in [2, {MAX_PRIME}], got {self.p}")

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return pow(a, self.p - 2, self.p)


@dataclass(frozen=True, eq=False)
class FieldMatrix:
    field: FieldSpec
    data: np.ndarray

    def __post_init__(self):
        arr = np.array(self.data, dtype=np.int64, copy=True)
        if arr.ndim != 2:
            raise ValueError("FieldMatrix needs a 2-d array")
        arr %= self.field.p
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]], p: int, cols: int | None = None) -> "FieldMatrix":
        rows = [list(r) for r in rows]
        if not rows:
            return cls(FieldSpec(p), np.zeros((0, cols or 0), dtype=np.int64))
        return cls(FieldSpec(p), np.array(rows, dtype=np.int64))

    @classmethod
    def zeros(cls, rows: int, cols: int, p: int) -> "FieldMatrix":
        return cls(FieldSpec(p), np.zeros((rows, cols), dtype=np.int64))

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def entries(self) -> tuple[int, ...]:
        return tuple(int(x) for x in self.data.ravel())

    def __eq__(self, other):
        if not isinstance(other, FieldMatrix):
            return NotImplemented
        return self.p == other.p and self.data.shape == other.data.shape and bool(np.array_equal(self.data, other.data))

    def __hash__(self):
        return hash((self.p, self.data.shape, self.data.tobytes()))

    def __repr__(self):
        return f"FieldMatrix(p={self.p}, shape={self.data.shape})"

    def transpose(self) -> "FieldMatrix":
        return FieldMatrix(self.field, self.data.T)

    def __matmul__(self, other: "FieldMatrix") -> "FieldMatrix":
        if self.p != other.p:
            raise ValueError("field mismatch")
        return FieldMatrix(self.field, (self.data @ other.data) % self.p)

    def take_columns(self, cols: Sequence[int]) -> "FieldMatrix":
        return FieldMatrix(self.field, self.data[:, list(cols)])

    def vstack(self, other: "FieldMatrix") -> "FieldMatrix":
        return FieldMatrix(self.field, np.vstack([self.data, other.data]))

    def row_supports(self) -> list[int]:
        """Support of each row as an int bitmask (bit j = column j nonzero)."""
        return [sum(1 << int(j) for j in np.flatnonzero(r)) for r in self.data]

    def to_text(self) -> str:
        lines = [f"{self.rows} {self.cols} {self.p}"]
        lines += [" ".join(str(int(x)) for x in row) for row in self.data]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "FieldMatrix":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise ValueError("empty matrix text")
        r, c, p = (int(x) for x in lines[0].split())
        body = [[int(x) for x in ln.split()] for ln in lines[1 : 1 + r]]
        if len(body) != r or any(len(row) != c for row in body):
            raise ValueError("matrix text does not match its header")
        if any(not 0 <= x < p for row in body for x in row):
            raise ValueError("entry out of range [0, p)")
        return cls(FieldSpec(p), np.array(body, dtype=np.int64).reshape(r, c))


def _pack(data: np.ndarray) -> list[int]:
    return [sum(1 << int(j) for j in np.flatnonzero(row)) for row in data]


def _unpack(rows: list[int], cols: int) -> np.ndarray:
    out = np.zeros((len(rows), cols), dtype=np.int64)
    for i, v in enumerate(rows):
        for j in range(cols):
            out[i, j] = (v >> j) & 1
    return out


def _row_reduce_gf2(m: FieldMatrix):
    rows = _pack(m.data)
    pivots: list[int] = []
    r = 0
    for col in range(m.cols):
        bit = 1 << col
        piv = next((i for i in range(r, len(rows)) if rows[i] & bit), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i] & bit:
                rows[i] ^= rows[r]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    return FieldMatrix(m.field, _unpack(rows, m.cols)), r, pivots


def row_reduce(m: FieldMatrix) -> tuple[FieldMatrix, int, list[int]]:
    """Reduced row-echelon form, rank and pivot columns; zero rows sink to the bottom."""
    if m.p == 2:
        return _row_reduce_gf2(m)
    p = m.p
    a = m.data.copy()
    pivots: list[int] = []
    r = 0
    for col in range(m.cols):
        if r == a.shape[0]:
            break
        nz = np.flatnonzero(a[r:, col])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        a[r] = (a[r] * m.field.inv(int(a[r, col]))) % p
        others = np.flatnonzero(a[:, col])
        others = others[others != r]
        if others.size:
            a[others] = (a[others] - np.outer(a[others, col], a[r])) % p
        pivots.append(col)
        r += 1
    return FieldMatrix(m.field, a), r, pivots


def rank(m: FieldMatrix) -> int:
    return row_reduce(m)[1]


def null_space(m: FieldMatrix) -> FieldMatrix:
    """Basis (as rows) of {x : m x^T = 0}."""
    red, rk, pivots = row_reduce(m)
    p = m.p
    free = [c for c in range(m.cols) if c not in set(pivots)]
    basis = np.zeros((len(free), m.cols), dtype=np.int64)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for r, pc in enumerate(pivots):
            basis[i, pc] = (-red.data[r, f]) % p
    return FieldMatrix(m.field, basis)


def in_row_space(m: FieldMatrix, vec: Sequence[int]) -> bool:
    v = FieldMatrix(m.field, np.asarray(vec, dtype=np.int64).reshape(1, -1))
    return rank(m.vstack(v)) == rank(m)
