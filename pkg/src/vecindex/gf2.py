"""Dense GF(2) linear algebra on int bitsets.

A row is a Python ``int`` whose bit ``j`` holds column ``j``; a matrix is an
immutable tuple of such rows plus a column count.  Python's arbitrary
precision ints act as the packed words, and XOR is row addition.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence


class ShapeError(ValueError):
    """Raised when operand dimensions do not agree."""


def _mask(cols: int) -> int:
    return (1 << cols) - 1


@dataclass(frozen=True)
class BitMatrix:
    rows: tuple[int, ...]
    cols: int

    def __post_init__(self):
        if self.cols < 0:
            raise ShapeError("shape: negative column count")
        object.__setattr__(self, "rows", tuple(int(r) for r in self.rows))
        full = _mask(self.cols)
        for r in self.rows:
            if r < 0 or r & ~full:
                raise ShapeError(f"shape: row {r:b} has bits beyond {self.cols} columns")

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), self.cols

    @classmethod
    def zeros(cls, n_rows: int, cols: int) -> "BitMatrix":
        return cls((0,) * n_rows, cols)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls(tuple(1 << i for i in range(n)), n)

    @classmethod
    def from_strings(cls, rows: Sequence[str], cols: Optional[int] = None) -> "BitMatrix":
        """Build from '0'/'1' strings; character ``j`` is column ``j``."""
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(tuple(bits_from_string(s, cols) for s in rows), cols)

    @classmethod
    def from_array(cls, array) -> "BitMatrix":
        rows = [[int(b) & 1 for b in row] for row in array]
        cols = len(rows[0]) if rows else 0
        return cls(tuple(bits_from_list(r) for r in rows), cols)

    def to_strings(self) -> list[str]:
        return [bits_to_string(r, self.cols) for r in self.rows]

    def to_array(self):
        import numpy as np

        out = np.zeros((len(self.rows), self.cols), dtype=np.uint8)
        for i, r in enumerate(self.rows):
            for j in iter_bits(r):
                out[i, j] = 1
        return out

    def row(self, i: int) -> int:
        return self.rows[i]

    def stack(self, extra: Iterable[int]) -> "BitMatrix":
        return BitMatrix(self.rows + tuple(extra), self.cols)

    def drop_row(self, i: int) -> "BitMatrix":
        return BitMatrix(self.rows[:i] + self.rows[i + 1:], self.cols)

    def combine(self, coeffs: int) -> int:
        """Return ``coeffs . self``, the XOR of the rows selected by ``coeffs``."""
        acc = 0
        for i in iter_bits(coeffs):
            if i >= len(self.rows):
                raise ShapeError("shape: coefficient vector longer than row count")
            acc ^= self.rows[i]
        return acc

    def mul_vec(self, vec: int) -> int:
        """Matrix-vector product; bit ``i`` of the result is ``<row_i, vec>``."""
        if vec & ~_mask(self.cols):
            raise ShapeError("shape: vector longer than column count")
        out = 0
        for i, r in enumerate(self.rows):
            if (r & vec).bit_count() & 1:
                out |= 1 << i
        return out


def iter_bits(x: int):
    """Yield the indices of the set bits of ``x`` in increasing order."""
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def bits_from_string(s: str, n: Optional[int] = None) -> int:
    s = s.strip()
    if n is not None and len(s) != n:
        raise ShapeError(f"shape: expected {n} bits, got {len(s)}")
    out = 0
    for j, ch in enumerate(s):
        if ch == "1":
            out |= 1 << j
        elif ch != "0":
            raise ValueError(f"not a bit character: {ch!r}")
    return out


def bits_to_string(x: int, n: int) -> str:
    return "".join("1" if (x >> j) & 1 else "0" for j in range(n))


def bits_from_list(bits: Sequence[int]) -> int:
    out = 0
    for j, b in enumerate(bits):
        if b & 1:
            out |= 1 << j
    return out


def bits_to_list(x: int, n: int) -> list[int]:
    return [(x >> j) & 1 for j in range(n)]


def _eliminate(rows: Sequence[int], cols: int):
    """Gauss-Jordan elimination tracking row combinations.

    Pivots are taken column by column from the left, each time using the
    lowest-index remaining row that has the bit set.  Returns the reduced
    pivot rows, their pivot columns, and for each reduced row the mask of
    original rows that sum to it.
    """
    work = list(rows)
    combo = [1 << i for i in range(len(work))]
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == len(work):
            break
        bit = 1 << c
        p = next((i for i in range(r, len(work)) if work[i] & bit), None)
        if p is None:
            continue
        work[r], work[p] = work[p], work[r]
        combo[r], combo[p] = combo[p], combo[r]
        for i in range(len(work)):
            if i != r and work[i] & bit:
                work[i] ^= work[r]
                combo[i] ^= combo[r]
        pivots.append(c)
        r += 1
    return work[:r], pivots, combo[:r]


def rank(m: BitMatrix) -> int:
    return len(_eliminate(m.rows, m.cols)[1])


def rref(m: BitMatrix) -> tuple[BitMatrix, list[int]]:
    """Reduced row-echelon form (zero rows kept at the bottom) and pivot columns."""
    reduced, pivots, _ = _eliminate(m.rows, m.cols)
    padded = tuple(reduced) + (0,) * (m.n_rows - len(reduced))
    return BitMatrix(padded, m.cols), pivots


class SpanSolver:
    """Reusable span-membership solver for one basis.

    The elimination is done once; each :meth:`solve` call then reduces the
    target against the pivot rows.
    """

    def __init__(self, basis: BitMatrix):
        self.basis = basis
        self._rows, self._pivots, self._combo = _eliminate(basis.rows, basis.cols)

    @property
    def rank(self) -> int:
        return len(self._pivots)

    def solve(self, target: int) -> Optional[int]:
        if target < 0 or target & ~_mask(self.basis.cols):
            raise ShapeError("shape: target length does not match basis columns")
        residue = target
        coeffs = 0
        for row, piv, combo in zip(self._rows, self._pivots, self._combo):
            if (residue >> piv) & 1:
                residue ^= row
                coeffs ^= combo
        if residue:
            return None
        if self.basis.combine(coeffs) != target:
            raise AssertionError("span witness failed re-multiplication check")
        return coeffs


def solve_in_span(basis: BitMatrix, target: int) -> Optional[int]:
    """Coefficients ``c`` (bit ``i`` selects basis row ``i``) with ``c . basis == target``.

    Returns ``None`` when ``target`` is not in the row span.
    """
    return SpanSolver(basis).solve(target)


def in_span(basis: BitMatrix, target: int) -> bool:
    return solve_in_span(basis, target) is not None


__all__ = [
    "BitMatrix",
    "ShapeError",
    "SpanSolver",
    "bits_from_list",
    "bits_from_string",
    "bits_to_list",
    "bits_to_string",
    "in_span",
    "iter_bits",
    "rank",
    "rref",
    "solve_in_span",
]
