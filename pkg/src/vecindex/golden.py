"""Transcribed reference listings and the batch comparator over them."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import Optional

from .codes import LinearCode
from .constructions import build
from .problem import extended_problem
from .vector import substitute
from .verify import Erratum, GoldenDiff, compare_golden, load_errata


@dataclass(frozen=True)
class GoldenListing:
    id: str
    cls: int
    K: int
    delta: int
    lam: Optional[int]
    U: int
    rows: tuple
    printed_capacity: Optional[Fraction] = None

    @property
    def t(self) -> int:
        return self.U + 1

    def code(self) -> LinearCode:
        """The listing as printed, indices reduced mod K."""
        return LinearCode.from_labels(self.K, self.t, self.rows, self.id)

    def generate(self) -> LinearCode:
        return substitute(build(self.cls, self.K, self.delta, self.lam), self.U)

    def problem(self):
        return extended_problem(self.K, self.U, self.delta)


def load_golden(path=None) -> list[GoldenListing]:
    if path is None:
        text = resources.files("vecindex.data").joinpath("golden.json").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    out = []
    for e in json.loads(text)["listings"]:
        cap = e.get("printed_capacity")
        out.append(
            GoldenListing(
                e["id"], int(e["class"]), int(e["K"]), int(e["delta"]), e.get("lambda"), int(e["U"]),
                tuple(tuple(tuple(x) for x in row) for row in e["rows"]),
                Fraction(cap) if cap else None,
            )
        )
    return out


def load_capacity_errata(path=None) -> list[dict]:
    if path is None:
        text = resources.files("vecindex.data").joinpath("errata.json").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    return json.loads(text).get("capacity_errata", [])


def run_golden(listings=None, errata: Optional[list[Erratum]] = None) -> list[GoldenDiff]:
    listings = load_golden() if listings is None else listings
    errata = load_errata() if errata is None else errata
    return [
        compare_golden(g.generate(), g.code(), errata, g.id, g.problem())
        for g in listings
    ]
