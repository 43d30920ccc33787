"""Linear index codes as bit matrices over labelled message components."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .gf2 import BitMatrix, iter_bits
from .problem import wrap


@dataclass(frozen=True)
class LinearCode:
    """A GF(2) linear code for K messages of ``t`` components each.

    Column ``(k-1)*t + (i-1)`` carries component ``x_{k,i}``; each row of
    ``symbols`` is one transmitted code symbol.  Scalar codes have ``t == 1``.
    """

    K: int
    t: int
    symbols: BitMatrix
    name: str = ""

    def __post_init__(self):
        if self.symbols.cols != self.K * self.t:
            raise ValueError(
                f"code has {self.symbols.cols} columns, expected K*t = {self.K * self.t}"
            )
        if any(r == 0 for r in self.symbols.rows):
            raise ValueError("code symbols must be non-zero")

    @property
    def length(self) -> int:
        return self.symbols.n_rows

    @property
    def rate(self) -> Fraction:
        """Message components delivered per receiver per transmission."""
        return Fraction(self.t, self.length)

    @property
    def rows(self) -> tuple[int, ...]:
        return self.symbols.rows

    def column(self, k: int, i: int = 1) -> int:
        return (wrap(k, self.K) - 1) * self.t + (i - 1)

    def label(self, col: int) -> tuple[int, int]:
        return col // self.t + 1, col % self.t + 1

    def columns(self) -> list[tuple[int, int]]:
        return [self.label(c) for c in range(self.K * self.t)]

    def row_labels(self, r: int) -> list[tuple[int, int]]:
        return [self.label(c) for c in iter_bits(self.symbols.rows[r])]

    def block_mask(self, k: int) -> int:
        """Bitmask of the ``t`` columns of message ``k``."""
        return ((1 << self.t) - 1) << ((wrap(k, self.K) - 1) * self.t)

    def with_rows(self, rows: Iterable[int], name: str = "") -> "LinearCode":
        return LinearCode(self.K, self.t, BitMatrix(tuple(rows), self.K * self.t), name or self.name)

    def drop_row(self, r: int) -> "LinearCode":
        return LinearCode(self.K, self.t, self.symbols.drop_row(r), self.name)

    @classmethod
    def from_labels(cls, K: int, t: int, rows: Sequence[Sequence[Sequence[int]]], name: str = "") -> "LinearCode":
        """Build from rows of ``[k, i]`` labels; ``k`` is reduced mod K.

        A label repeated within one row cancels, as GF(2) addition demands.
        """
        packed = []
        for row in rows:
            acc = 0
            for k, i in row:
                if not 1 <= i <= t:
                    raise ValueError(f"component index {i} outside 1..{t}")
                acc ^= 1 << ((wrap(k, K) - 1) * t + (i - 1))
            packed.append(acc)
        return cls(K, t, BitMatrix(tuple(packed), K * t), name)

    @classmethod
    def scalar(cls, K: int, rows: Sequence[Sequence[int]], name: str = "") -> "LinearCode":
        """Scalar code from rows of message indices (1-based, reduced mod K)."""
        return cls.from_labels(K, 1, [[(k, 1) for k in row] for row in rows], name)

    def scalar_rows(self) -> list[list[int]]:
        if self.t != 1:
            raise ValueError("not scalar: code has vector components")
        return [[c + 1 for c in iter_bits(r)] for r in self.rows]

    def to_dict(self) -> dict:
        return {
            "K": self.K,
            "t": self.t,
            "rows": [[list(lab) for lab in self.row_labels(r)] for r in range(self.length)],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "LinearCode":
        return cls.from_labels(int(data["K"]), int(data.get("t", 1)), data["rows"], str(data.get("name", "")))

    def to_matrix_text(self) -> str:
        return "".join(s + "\n" for s in self.symbols.to_strings())

    @classmethod
    def from_matrix_text(cls, text: str, K: int, t: int = 1) -> "LinearCode":
        lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
        return cls(K, t, BitMatrix.from_strings(lines, K * t))

    def describe_row(self, r: int, symbol: str = "x") -> str:
        labels = self.row_labels(r)
        if self.t == 1:
            return "+".join(f"{symbol}_{k}" for k, _ in labels)
        return "+".join(f"{symbol}_{{{k},{i}}}" for k, i in labels)

    def row_set(self) -> frozenset:
        return frozenset(self.rows)
