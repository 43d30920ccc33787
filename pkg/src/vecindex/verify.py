"""Decodability, optimality and exhaustive minrank checks, plus the golden comparator."""

from __future__ import annotations

import itertools
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Optional, Sequence, Union

from .codes import LinearCode
from .constructions import capacity
from .gf2 import BitMatrix, SpanSolver, iter_bits
from .problem import ProblemSpec, SymmetricParams, symmetric_params, vector_problem

# Enumeration budget of the minrank oracle, counted in candidate row spaces.
ORACLE_BUDGET = 1 << 24


class InstanceTooLargeError(ValueError):
    pass


@dataclass(frozen=True)
class ReceiverResult:
    receiver: int
    decodable: bool
    # component index -> coefficient mask over code symbols (None when absent)
    witnesses: dict

    def to_dict(self) -> dict:
        return {
            "receiver": self.receiver,
            "decodable": self.decodable,
            "witnesses": {
                str(i): (None if w is None else list(iter_bits(w))) for i, w in sorted(self.witnesses.items())
            },
        }


def _check_shape(problem: ProblemSpec, code: LinearCode):
    if problem.K != code.K:
        raise ValueError(f"shape: problem has K={problem.K}, code has K={code.K}")
    if problem.block != code.t:
        raise ValueError(f"shape: problem blocks of {problem.block}, code has t={code.t}")


def decodable(problem: ProblemSpec, code: LinearCode) -> list[ReceiverResult]:
    """Per receiver, whether each wanted component lies in the span of the code and its side information.

    Eliminating the antidote columns from the code rows is equivalent to
    appending their unit vectors to the basis, and keeps the basis at one
    row per code symbol.
    """
    _check_shape(problem, code)
    out = []
    for k in range(1, problem.K + 1):
        w = problem.wants[k - 1]
        side = 0
        for a in problem.antidotes[k - 1]:
            side |= code.block_mask(a)
        solver = SpanSolver(BitMatrix(tuple(r & ~side for r in code.rows), code.symbols.cols))
        wits = {}
        for i in range(1, code.t + 1):
            wits[i] = solver.solve(1 << code.column(w, i))
        out.append(ReceiverResult(k, all(v is not None for v in wits.values()), wits))
    return out


def all_decodable(problem: ProblemSpec, code: LinearCode) -> bool:
    return all(r.decodable for r in decodable(problem, code))


@dataclass
class VerificationReport:
    problem_id: str
    code_id: str
    K: int
    U: int
    D: int
    length: int
    receivers: list
    rate: Fraction
    capacity: Fraction
    notes: list = field(default_factory=list)

    @property
    def decodable(self) -> bool:
        return all(r.decodable for r in self.receivers)

    @property
    def optimal(self) -> bool:
        return self.decodable and self.rate == self.capacity

    def failed_receivers(self) -> list[int]:
        return [r.receiver for r in self.receivers if not r.decodable]

    def to_dict(self) -> dict:
        return {
            "problem": self.problem_id,
            "code": self.code_id,
            "K": self.K,
            "U": self.U,
            "D": self.D,
            "length": self.length,
            "rate": _frac(self.rate),
            "capacity": _frac(self.capacity),
            "decodable": self.decodable,
            "optimal": self.optimal,
            "failed_receivers": self.failed_receivers(),
            "receivers": [r.to_dict() for r in self.receivers],
            "notes": list(self.notes),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def check_optimality(
    problem: Union[ProblemSpec, tuple, SymmetricParams], code: LinearCode, problem_id: str = "", code_id: str = ""
) -> VerificationReport:
    """Verify decodability and compare the code rate t/l with the symmetric capacity."""
    if isinstance(problem, ProblemSpec):
        params = symmetric_params(problem)
        spec = problem
    else:
        params = problem if isinstance(problem, SymmetricParams) else SymmetricParams(*problem)
        spec = vector_problem(params.K, params.U, params.D)
    notes = []
    if spec.block != code.t:
        notes.append(f"code carries {code.t} components per message; problem blocks are {spec.block}")
        spec = ProblemSpec(spec.K, spec.wants, spec.antidotes, spec.label, code.t)
    receivers = decodable(spec, code)
    cap = capacity(params.K, params.U, params.D)
    rate = code.rate
    if rate > cap and all(r.decodable for r in receivers):
        notes.append("rate exceeds capacity")
    elif rate < cap:
        notes.append(f"rate {_frac(rate)} below capacity {_frac(cap)}")
    return VerificationReport(
        problem_id or spec.label, code_id or code.name, params.K, params.U, params.D,
        code.length, receivers, rate, cap, notes,
    )


# -- exhaustive minrank -------------------------------------------------------

def _gaussian_binomial(n: int, k: int) -> int:
    num = den = 1
    for i in range(k):
        num *= (1 << (n - i)) - 1
        den *= (1 << (i + 1)) - 1
    return num // den


def _rref_spaces(n: int, dim: int, pivots: Sequence[int]):
    """Yield every RREF basis with the given pivot columns, as tuples of int rows."""
    pivset = set(pivots)
    free = [[c for c in range(p + 1, n) if c not in pivset] for p in pivots]
    slots = [(r, c) for r, cols in enumerate(free) for c in cols]
    base = [1 << p for p in pivots]
    for bits in range(1 << len(slots)):
        rows = list(base)
        b = bits
        idx = 0
        while b:
            if b & 1:
                r, c = slots[idx]
                rows[r] |= 1 << c
            b >>= 1
            idx += 1
        yield rows


def _scalar_targets(problem: ProblemSpec):
    out = []
    for k in range(problem.K):
        side = 0
        for a in problem.antidotes[k]:
            side |= 1 << (a - 1)
        out.append((~side, 1 << (problem.wants[k] - 1)))
    return out


def _reduce(x: int, basis: dict) -> int:
    while x:
        top = x.bit_length() - 1
        row = basis.get(top)
        if row is None:
            return x
        x ^= row
    return 0


def _space_decodes(rows, targets) -> bool:
    for keep, target in targets:
        basis: dict[int, int] = {}
        for r in rows:
            r = _reduce(r & keep, basis)
            if r:
                basis[r.bit_length() - 1] = r
        if _reduce(target, basis):
            return False
    return True


def _search_pivots(args):
    n, pivots, targets = args
    for rows in _rref_spaces(n, len(pivots), pivots):
        if _space_decodes(rows, targets):
            return rows
    return None


def minrank_oracle(problem: ProblemSpec, max_len: int, workers: int = 1) -> Optional[int]:
    """Smallest length of a decodable scalar linear code, by exhaustive search.

    Codes are enumerated as row spaces (RREF representatives), since
    decodability depends only on the span.  Returns ``None`` when no code of
    length ``<= max_len`` decodes.
    """
    if problem.block != 1:
        raise ValueError("minrank oracle handles scalar problems only")
    n = problem.K
    max_len = min(max_len, n)
    cost = sum(_gaussian_binomial(n, d) for d in range(1, max_len + 1))
    if cost > ORACLE_BUDGET:
        raise InstanceTooLargeError(f"instance too large: {cost} candidate row spaces exceed budget {ORACLE_BUDGET}")
    targets = _scalar_targets(problem)
    pool = ProcessPoolExecutor(workers) if workers > 1 else None
    try:
        for dim in range(1, max_len + 1):
            jobs = [(n, piv, targets) for piv in itertools.combinations(range(n), dim)]
            results = pool.map(_search_pivots, jobs) if pool else map(_search_pivots, jobs)
            if any(r is not None for r in results):
                return dim
    finally:
        if pool:
            pool.shutdown()
    return None


def minrank_witness(problem: ProblemSpec, length: int) -> Optional[LinearCode]:
    """A decodable scalar code of exactly ``length`` rows, if one exists."""
    targets = _scalar_targets(problem)
    for piv in itertools.combinations(range(problem.K), length):
        rows = _search_pivots((problem.K, piv, targets))
        if rows is not None:
            return LinearCode(problem.K, 1, BitMatrix(tuple(rows), problem.K))
    return None


# -- golden comparison --------------------------------------------------------

@dataclass(frozen=True)
class Erratum:
    example: str
    row: int
    printed: tuple
    normalized: tuple
    note: str = ""

    def printed_mask(self, code: LinearCode) -> int:
        return LinearCode.from_labels(code.K, code.t, [self.printed]).rows[0]

    def normalized_mask(self, code: LinearCode) -> int:
        return LinearCode.from_labels(code.K, code.t, [self.normalized]).rows[0]

    @classmethod
    def from_dict(cls, d: dict) -> "Erratum":
        return cls(
            d["example"], int(d["row"]),
            tuple(tuple(x) for x in d["printed"]), tuple(tuple(x) for x in d["normalized"]),
            d.get("note", ""),
        )


def load_errata(path=None) -> list[Erratum]:
    if path is None:
        text = resources.files("vecindex.data").joinpath("errata.json").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    return [Erratum.from_dict(d) for d in json.loads(text)["errata"]]


@dataclass
class GoldenDiff:
    example: str
    missing: list  # golden rows (index, text) absent from the generated code
    extra: list  # generated rows (index, text) absent from the golden code
    accepted: list  # errata that explain a mismatch
    unexplained: list
    order_matches: bool
    decodable_generated: Optional[bool] = None
    decodable_corrected: Optional[bool] = None
    decodable_printed: Optional[bool] = None

    @property
    def exact(self) -> bool:
        return not self.missing and not self.extra

    @property
    def ok(self) -> bool:
        if self.unexplained:
            return False
        if self.exact:
            return self.decodable_generated is not False
        return bool(self.decodable_generated) and bool(self.decodable_corrected)

    def to_dict(self) -> dict:
        return {
            "example": self.example,
            "ok": self.ok,
            "exact": self.exact,
            "order_matches": self.order_matches,
            "missing": [list(m) for m in self.missing],
            "extra": [list(m) for m in self.extra],
            "accepted_errata": [
                {"row": e.row, "printed": [list(x) for x in e.printed], "normalized": [list(x) for x in e.normalized], "note": e.note}
                for e in self.accepted
            ],
            "unexplained": list(self.unexplained),
            "decodable_generated": self.decodable_generated,
            "decodable_corrected": self.decodable_corrected,
            "decodable_printed": self.decodable_printed,
        }


def compare_golden(
    generated: LinearCode,
    golden: LinearCode,
    errata: Sequence[Erratum] = (),
    example: str = "",
    problem: Optional[ProblemSpec] = None,
) -> GoldenDiff:
    """Row-set comparison of a generated code against a transcribed listing.

    A differing golden row is accepted only when an erratum for ``example``
    names it as printed and maps it onto a generated row, and both the
    generated code and the corrected listing decode on ``problem``.
    """
    if (generated.K, generated.t) != (golden.K, golden.t):
        raise ValueError("shape: generated and golden codes differ in K or t")
    gen_set = set(generated.rows)
    gold_set = set(golden.rows)
    missing = [(i, golden.describe_row(i)) for i, r in enumerate(golden.rows) if r not in gen_set]
    extra = [(i, generated.describe_row(i)) for i, r in enumerate(generated.rows) if r not in gold_set]

    mine = [e for e in errata if e.example == example]
    accepted, unexplained = [], []
    corrected_rows = list(golden.rows)
    extra_masks = {generated.rows[i] for i, _ in extra}
    for i, text in missing:
        hit = next(
            (
                e for e in mine
                if e.row == i
                and e.printed_mask(golden) == golden.rows[i]
                and e.normalized_mask(golden) in extra_masks
            ),
            None,
        )
        if hit is None:
            unexplained.append(f"golden row {i} ({text}) has no generated counterpart")
        else:
            accepted.append(hit)
            corrected_rows[i] = hit.normalized_mask(golden)
    covered = {e.normalized_mask(golden) for e in accepted}
    for i, text in extra:
        if generated.rows[i] not in covered:
            unexplained.append(f"generated row {i} ({text}) is not in the listing")

    diff = GoldenDiff(
        example, missing, extra, accepted, unexplained,
        order_matches=list(generated.rows) == list(golden.rows),
    )
    if problem is not None:
        diff.decodable_generated = all_decodable(problem, generated)
        corrected = golden.with_rows(corrected_rows)
        diff.decodable_corrected = all_decodable(problem, corrected)
        diff.decodable_printed = all_decodable(problem, golden)
    return diff
